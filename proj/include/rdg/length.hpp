// Copyright 2026 The rdgroupoid Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <deque>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "rdg/groupoid.hpp"
#include "rdg/homomorphism.hpp"

namespace rdg {

template <class L>
concept ArrowLength = requires(const L& l, ArrowId a) {
  { l(a) } -> std::convertible_to<double>;
};

/// Tabulated length: one nonnegative real per arrow.
struct LengthFunction {
  std::vector<double> values;

  double operator()(ArrowId a) const { return values[a]; }
  std::size_t size() const { return values.size(); }
};

inline constexpr double kSubadditivitySlack = 1e-12;

/// Exhaustive check of l(x) = 0 on units, l(a^-1) = l(a) and
/// l(ab) <= l(a) + l(b) (with 1e-12 slack).
template <FiniteGroupoid G, ArrowLength L>
Violations validate_length(const G& g, const L& l, std::size_t max_violations = 64) {
  Violations out;
  auto add = [&](std::string kind, std::vector<std::size_t> w, std::string d = {}) {
    if (out.size() < max_violations) out.push_back({std::move(kind), std::move(w), std::move(d)});
  };
  for (ArrowId a = 0; a < g.arrow_count(); ++a) {
    double v = l(a);
    if (!(v >= 0.0) || !std::isfinite(v)) add("NEGATIVE_OR_NAN", {a}, std::to_string(v));
    if (is_unit(g, a) && v != 0.0) add("UNIT_NONZERO", {a}, std::to_string(v));
    if (l(g.inv(a)) != v) add("INVERSE_ASYMMETRY", {a, g.inv(a)});
  }
  for (ArrowId a = 0; a < g.arrow_count(); ++a) {
    const double la = l(a);
    for (ArrowId b : g.range_fiber(g.src(a))) {
      if (l(g.product(a, b)) > la + l(b) + kSubadditivitySlack)
        add("SUBADDITIVITY", {a, b, g.product(a, b)});
    }
  }
  return out;
}

/// Word length for the generating set K cup K^-1, by breadth-first search
/// over arrows (edges g -> k g). Throws NOT_GENERATING with the unreachable
/// arrows if K does not generate.
template <FiniteGroupoid G>
LengthFunction word_length(const G& g, const std::vector<ArrowId>& K) {
  const std::size_t n = g.arrow_count();
  std::vector<std::vector<ArrowId>> gens_from(g.unit_count());
  auto add_gen = [&](ArrowId k) {
    require(k < n, Errc::dangling_id, "generator out of range", {k});
    if (!is_unit(g, k)) gens_from[g.unit_index(g.src(k))].push_back(k);
  };
  for (ArrowId k : K) {
    add_gen(k);
    add_gen(g.inv(k));
  }
  for (auto& v : gens_from) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  constexpr std::size_t unseen = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(n, unseen);
  std::deque<ArrowId> queue;
  for (std::size_t i = 0; i < g.unit_count(); ++i) {
    dist[g.unit(i)] = 0;
    queue.push_back(g.unit(i));
  }
  while (!queue.empty()) {
    ArrowId a = queue.front();
    queue.pop_front();
    for (ArrowId k : gens_from[g.unit_index(g.rng(a))]) {
      ArrowId ka = g.product(k, a);
      if (dist[ka] == unseen) {
        dist[ka] = dist[a] + 1;
        queue.push_back(ka);
      }
    }
  }
  std::vector<std::size_t> missing;
  for (ArrowId a = 0; a < n; ++a)
    if (dist[a] == unseen) missing.push_back(a);
  if (!missing.empty())
    throw Error(Errc::not_generating,
                std::to_string(missing.size()) + " arrows unreachable from the generators", missing);
  LengthFunction out;
  out.values.assign(dist.begin(), dist.end());
  return out;
}

/// (phi^* l)(eta) = l(phi(eta)).
inline LengthFunction pullback_length(const GroupoidHom& phi, const LengthFunction& l) {
  LengthFunction out;
  out.values.resize(phi.map.size());
  for (ArrowId a = 0; a < phi.map.size(); ++a) out.values[a] = l(phi.map[a]);
  return out;
}

/// Closed ball B_l(x, r) = {g in G_x : l(g) <= r}, in fiber order.
template <FiniteGroupoid G, ArrowLength L>
std::vector<ArrowId> ball(const G& g, const L& l, ArrowId x, double r) {
  require(x < g.arrow_count() && is_unit(g, x), Errc::not_a_unit, "ball center must be a unit", {x});
  require(r >= 0.0, Errc::invalid_argument, "ball radius must be nonnegative");
  std::vector<ArrowId> out;
  for (ArrowId a : g.source_fiber(x))
    if (l(a) <= r) out.push_back(a);
  return out;
}

struct GrowthRow {
  ArrowId unit;
  double r;
  std::size_t count;
};

struct GrowthProfile {
  std::vector<GrowthRow> rows;      // unit-major, radii in the given order
  std::vector<double> radii;
  std::vector<std::size_t> max_counts;  // max over units, per radius
  double exponent = 0.0;
};

/// Least-squares slope of log(count) against log(1+r). Needs at least two
/// distinct radii.
inline double fit_growth_exponent(const std::vector<double>& radii,
                                  const std::vector<std::size_t>& counts) {
  std::vector<double> sorted = radii;
  std::sort(sorted.begin(), sorted.end());
  if (std::unique(sorted.begin(), sorted.end()) - sorted.begin() < 2)
    throw Error(Errc::degenerate_fit, "growth fit needs at least two distinct radii");
  const std::size_t m = radii.size();
  double mx = 0, my = 0;
  std::vector<double> xs(m), ys(m);
  for (std::size_t i = 0; i < m; ++i) {
    xs[i] = std::log1p(radii[i]);
    ys[i] = std::log(static_cast<double>(counts[i]));
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

/// Exact ball counts |B_l(x,r)| for every unit and radius, plus the fitted
/// exponent of max_x |B_l(x,r)|.
template <FiniteGroupoid G, ArrowLength L>
GrowthProfile growth_profile(const G& g, const L& l, const std::vector<double>& radii) {
  require(!radii.empty(), Errc::degenerate_fit, "no radii given");
  for (double r : radii) require(r >= 0.0, Errc::invalid_argument, "radii must be nonnegative");
  GrowthProfile out;
  out.radii = radii;
  out.max_counts.assign(radii.size(), 0);
  out.rows.reserve(g.unit_count() * radii.size());
  std::vector<double> lengths;
  for (std::size_t i = 0; i < g.unit_count(); ++i) {
    ArrowId x = g.unit(i);
    lengths.clear();
    for (ArrowId a : g.source_fiber(x)) lengths.push_back(l(a));
    std::sort(lengths.begin(), lengths.end());
    for (std::size_t k = 0; k < radii.size(); ++k) {
      std::size_t c = std::upper_bound(lengths.begin(), lengths.end(), radii[k]) - lengths.begin();
      out.rows.push_back({x, radii[k], c});
      out.max_counts[k] = std::max(out.max_counts[k], c);
    }
  }
  out.exponent = fit_growth_exponent(radii, out.max_counts);
  return out;
}

}  // namespace rdg
