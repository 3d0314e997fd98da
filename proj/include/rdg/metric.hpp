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

// Kernels on a finite metric space: propagation, the uniform Roe operator
// norm, BS norms, scans and growth. The Roe norm is computed by an SVD of
// the kernel matrix, independently of the groupoid code, so comparing it
// with the pair-groupoid reduced norm checks two separate paths.

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "rdg/function.hpp"
#include "rdg/length.hpp"
#include "rdg/metric_space.hpp"
#include "rdg/norms.hpp"
#include "rdg/rd.hpp"

namespace rdg {

/// k(x, y) at row x, column y.
struct Kernel {
  Eigen::MatrixXcd k;

  static Kernel zero(std::size_t n) { return {Eigen::MatrixXcd::Zero(n, n)}; }
  std::size_t size() const { return static_cast<std::size_t>(k.rows()); }
  Kernel adjoint() const { return {k.adjoint()}; }
};

/// k_f(x, y) = f(x <- y), the coefficient of the pair-groupoid arrow with
/// range x and source y.
template <Coefficients F>
Kernel kernel_of(const PairGroupoid& g, const F& f) {
  const std::size_t n = g.points();
  Kernel out = Kernel::zero(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) out.k(x, y) = f(g.arrow(x, y));
  return out;
}

inline GFunction function_of(const PairGroupoid& g, const Kernel& k) {
  GFunction f(g.arrow_count());
  for (std::size_t x = 0; x < g.points(); ++x)
    for (std::size_t y = 0; y < g.points(); ++y) f[g.arrow(x, y)] = k.k(x, y);
  return f;
}

struct Propagation {
  double value = 0.0;
  bool empty = true;  // k = 0: the sup over an empty set, reported as 0
};

template <MetricLike M>
Propagation propagation(const M& X, const Kernel& k) {
  Propagation p;
  for (std::size_t x = 0; x < k.size(); ++x)
    for (std::size_t y = 0; y < k.size(); ++y)
      if (k.k(x, y) != Complex{}) {
        p.value = p.empty ? X.distance(x, y) : std::max(p.value, X.distance(x, y));
        p.empty = false;
      }
  return p;
}

inline double roe_norm(const Kernel& k) {
  if (k.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(k.k);
  return svd.singularValues()(0);
}

enum class BSMode { plain, star };

/// plain: (sup_y sum_x |k(x,y)|^2 (1 + d(x,y))^{2t})^{1/2}; star: the max
/// of that and the same quantity for k*(x,y) = conj k(y,x).
template <MetricLike M>
double bs_norm(const M& X, const Kernel& k, double t, BSMode mode) {
  require_nonnegative_t(t);
  const std::size_t n = k.size();
  double best = 0.0;
  for (std::size_t y = 0; y < n; ++y) {
    double col = 0.0, row = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      const double w = std::pow(1.0 + X.distance(x, y), 2.0 * t);
      col += std::norm(k.k(x, y)) * w;
      row += std::norm(k.k(y, x)) * w;
    }
    best = std::max(best, std::sqrt(col));
    if (mode == BSMode::star) best = std::max(best, std::sqrt(row));
  }
  return best;
}

struct SpaceGrowth {
  std::vector<GrowthRow> rows;  // unit field holds the point index
  std::vector<double> radii;
  std::vector<std::size_t> max_counts;
  double exponent = 0.0;
};

/// |B(x, r)| for every point and radius, and the fitted exponent of the max.
template <MetricLike M>
SpaceGrowth space_growth(const M& X, const std::vector<double>& radii) {
  require(!radii.empty(), Errc::degenerate_fit, "no radii given");
  SpaceGrowth out;
  out.radii = radii;
  out.max_counts.assign(radii.size(), 0);
  for (std::size_t x = 0; x < X.size(); ++x)
    for (std::size_t k = 0; k < radii.size(); ++k) {
      std::size_t c = 0;
      for (std::size_t y = 0; y < X.size(); ++y) c += X.distance(x, y) <= radii[k];
      out.rows.push_back({x, radii[k], c});
      out.max_counts[k] = std::max(out.max_counts[k], c);
    }
  // A one-point space has every count 1; the exponent is 0 rather than a fit.
  std::vector<double> distinct = radii;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() >= 2) out.exponent = fit_growth_exponent(radii, out.max_counts);
  return out;
}

struct MRDRow {
  std::size_t id;
  std::string param;
  double ratio;  // roe_norm / bs_norm(star)
};

struct MRDScanResult {
  double t;
  ScanFamily family;
  std::vector<MRDRow> rows;
  double max_ratio = 0.0;
  std::size_t argmax = 0;
};

/// Kernel families: `ball_indicators` gives tube kernels 1_{d <= r} and
/// all-ones blocks on B(x, r) x B(x, r) for sampled centers; `random_complex`
/// gives Gaussian kernels on tubes. The ball blocks are the metric form of
/// the witnesses, so `witness_seeded` selects the same kernels as balls.
template <MetricLike M>
std::vector<MRDScanResult> mrd_scan(const M& X, const std::vector<double>& ts, const ScanOptions& opts) {
  for (double t : ts) require_nonnegative_t(t);
  const std::size_t n = X.size();
  std::vector<double> radii;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) radii.push_back(X.distance(x, y));
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  if (opts.max_radii >= 2 && radii.size() > opts.max_radii) {
    std::vector<double> thin;
    for (std::size_t k = 0; k < opts.max_radii; ++k)
      thin.push_back(radii[k * (radii.size() - 1) / (opts.max_radii - 1)]);
    thin.erase(std::unique(thin.begin(), thin.end()), thin.end());
    radii = std::move(thin);
  }
  std::mt19937_64 rng(opts.seed);
  auto pick = [&](std::size_t m) { return std::uniform_int_distribution<std::size_t>(0, m - 1)(rng); };

  std::vector<std::pair<std::string, Kernel>> members;
  auto tube = [&](double r) {
    Kernel k = Kernel::zero(n);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (X.distance(x, y) <= r) k.k(x, y) = 1.0;
    return k;
  };
  if (opts.family == ScanFamily::random_complex) {
    std::normal_distribution<double> normal;
    for (std::size_t s = 0; s < opts.trials; ++s) {
      const double r = radii[pick(radii.size())];
      Kernel k = tube(r);
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
          const double re = normal(rng), im = normal(rng);
          k.k(x, y) *= Complex(re, im);
        }
      members.push_back({"random:r=" + detail::num(r) + ";trial=" + std::to_string(s), std::move(k)});
    }
  } else {
    for (double r : radii) members.push_back({"tube:r=" + detail::num(r), tube(r)});
    // Seeds: the first point with the largest radius, then sampled pairs.
    std::vector<std::pair<std::size_t, double>> seeds{{0, radii.back()}};
    for (std::size_t s = 1; s < opts.trials; ++s) seeds.push_back({pick(n), radii[pick(radii.size())]});
    for (auto [c, r] : seeds) {
      Kernel k = Kernel::zero(n);
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
          if (X.distance(c, x) <= r && X.distance(c, y) <= r) k.k(x, y) = 1.0;
      members.push_back({"ball:x=" + std::to_string(c) + ";r=" + detail::num(r), std::move(k)});
    }
  }
  require(!members.empty(), Errc::empty_family, "scan family has no members");

  std::vector<double> norms(members.size());
  parallel_for(members.size(), opts.norm.workers, [&](std::size_t i) { norms[i] = roe_norm(members[i].second); });
  std::vector<MRDScanResult> out;
  for (double t : ts) {
    MRDScanResult res{t, opts.family, {}, 0.0, 0};
    bool any = false;
    for (std::size_t i = 0; i < members.size(); ++i) {
      const double bs = bs_norm(X, members[i].second, t, BSMode::star);
      if (bs == 0.0) continue;
      const double ratio = norms[i] / bs;
      res.rows.push_back({i, members[i].first, ratio});
      if (!any || ratio > res.max_ratio) {
        res.max_ratio = ratio;
        res.argmax = i;
        any = true;
      }
    }
    require(any, Errc::empty_family, "scan family has only zero members");
    out.push_back(std::move(res));
  }
  return out;
}

}  // namespace rdg
