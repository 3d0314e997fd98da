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

// Finite groupoids. Units are arrows: unit x has src = rng = inv = x.
//
// Two models satisfy the FiniteGroupoid concept. `Groupoid` stores explicit
// source/range/inverse arrays and a product table indexed by composable pair.
// `PairGroupoid` is the pair groupoid X x X with the product computed, for
// spaces too large to tabulate.

#include <algorithm>
#include <array>
#include <concepts>
#include <cstdint>
#include <cstddef>
#include <memory>
#include <numeric>
#include <ranges>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rdg/error.hpp"

namespace rdg {

template <class G>
concept FiniteGroupoid = requires(const G& g, ArrowId a, std::size_t i) {
  { g.arrow_count() } -> std::convertible_to<std::size_t>;
  { g.unit_count() } -> std::convertible_to<std::size_t>;
  { g.unit(i) } -> std::convertible_to<ArrowId>;
  { g.unit_index(a) } -> std::convertible_to<std::size_t>;
  { g.src(a) } -> std::convertible_to<ArrowId>;
  { g.rng(a) } -> std::convertible_to<ArrowId>;
  { g.inv(a) } -> std::convertible_to<ArrowId>;
  { g.product(a, a) } -> std::convertible_to<ArrowId>;
  { g.source_fiber(a) } -> std::ranges::random_access_range;
  { g.range_fiber(a) } -> std::ranges::random_access_range;
  { g.source_position(a) } -> std::convertible_to<std::size_t>;
};

template <FiniteGroupoid G>
bool is_unit(const G& g, ArrowId a) {
  return g.unit_index(a) != npos;
}

template <FiniteGroupoid G>
bool composable(const G& g, ArrowId a, ArrowId b) {
  return g.src(a) == g.rng(b);
}

/// Raw tables as they appear in a groupoid file, before any checking.
struct GroupoidTables {
  struct ArrowSpec {
    ArrowId id;
    ArrowId src;
    ArrowId rng;
    ArrowId inv;
  };
  std::vector<ArrowId> units;
  std::vector<ArrowSpec> arrows;
  std::vector<std::array<ArrowId, 3>> product;
};

class Groupoid;
Violations validate(const GroupoidTables& tables);

class Groupoid {
 public:
  /// Builds a groupoid from tables, throwing VALIDATION_ERROR with the full
  /// violation list if any axiom fails.
  static Groupoid from_tables(const GroupoidTables& tables) {
    Violations vs = validate(tables);
    if (!vs.empty()) throw Error(Errc::validation_error, "groupoid axioms violated", std::move(vs));
    return Groupoid(tables);
  }

  /// Builds without the axiom checks. Intended for constructors whose output
  /// is correct by construction and for the validator itself; the tables
  /// must still be index-consistent with composable pairs fully listed.
  static Groupoid unchecked(const GroupoidTables& tables) { return Groupoid(tables); }

  std::size_t arrow_count() const { return src_.size(); }
  std::size_t unit_count() const { return units_.size(); }
  ArrowId unit(std::size_t i) const { return units_[i]; }
  std::span<const ArrowId> units() const { return units_; }
  std::size_t unit_index(ArrowId a) const { return unit_index_[a]; }

  ArrowId src(ArrowId a) const { return src_[a]; }
  ArrowId rng(ArrowId a) const { return rng_[a]; }
  ArrowId inv(ArrowId a) const { return inv_[a]; }

  /// Product ab; requires src(a) == rng(b).
  ArrowId product(ArrowId a, ArrowId b) const { return product_[pair_index(a, b)]; }

  /// Dense index of the composable pair (a,b) in [0, composable_pair_count()).
  std::size_t pair_index(ArrowId a, ArrowId b) const { return pair_base_[a] + rng_pos_[b]; }
  std::size_t composable_pair_count() const { return product_.size(); }

  /// G_x: arrows with source x, in ascending id order.
  std::span<const ArrowId> source_fiber(ArrowId x) const {
    std::size_t i = unit_index_[x];
    return std::span<const ArrowId>(src_arrows_).subspan(src_off_[i], src_off_[i + 1] - src_off_[i]);
  }
  /// G^x: arrows with range x, in ascending id order.
  std::span<const ArrowId> range_fiber(ArrowId x) const {
    std::size_t i = unit_index_[x];
    return std::span<const ArrowId>(rng_arrows_).subspan(rng_off_[i], rng_off_[i + 1] - rng_off_[i]);
  }
  std::size_t source_position(ArrowId a) const { return src_pos_[a]; }
  std::size_t range_position(ArrowId a) const { return rng_pos_[a]; }

  GroupoidTables tables() const {
    GroupoidTables t;
    t.units = units_;
    t.arrows.reserve(arrow_count());
    for (ArrowId a = 0; a < arrow_count(); ++a) t.arrows.push_back({a, src_[a], rng_[a], inv_[a]});
    t.product.reserve(product_.size());
    for (ArrowId a = 0; a < arrow_count(); ++a)
      for (ArrowId b : range_fiber(src_[a])) t.product.push_back({a, b, product(a, b)});
    return t;
  }

 private:
  explicit Groupoid(const GroupoidTables& t) {
    const std::size_t n = t.arrows.size();
    src_.resize(n);
    rng_.resize(n);
    inv_.resize(n);
    for (const auto& a : t.arrows) {
      src_[a.id] = a.src;
      rng_[a.id] = a.rng;
      inv_[a.id] = a.inv;
    }
    units_ = t.units;
    std::sort(units_.begin(), units_.end());
    unit_index_.assign(n, npos);
    for (std::size_t i = 0; i < units_.size(); ++i) unit_index_[units_[i]] = i;

    auto build_csr = [&](const std::vector<ArrowId>& end, std::vector<std::size_t>& off,
                         std::vector<ArrowId>& arrows, std::vector<std::size_t>& pos) {
      off.assign(units_.size() + 1, 0);
      for (ArrowId a = 0; a < n; ++a) ++off[unit_index_[end[a]] + 1];
      std::partial_sum(off.begin(), off.end(), off.begin());
      arrows.resize(n);
      pos.resize(n);
      std::vector<std::size_t> fill(off.begin(), off.end() - 1);
      for (ArrowId a = 0; a < n; ++a) {
        std::size_t u = unit_index_[end[a]];
        pos[a] = fill[u] - off[u];
        arrows[fill[u]++] = a;
      }
    };
    build_csr(src_, src_off_, src_arrows_, src_pos_);
    build_csr(rng_, rng_off_, rng_arrows_, rng_pos_);

    pair_base_.resize(n);
    std::size_t total = 0;
    for (ArrowId a = 0; a < n; ++a) {
      pair_base_[a] = total;
      std::size_t u = unit_index_[src_[a]];
      total += rng_off_[u + 1] - rng_off_[u];
    }
    product_.assign(total, npos);
    for (const auto& p : t.product) product_[pair_index(p[0], p[1])] = p[2];
  }

  std::vector<ArrowId> units_;
  std::vector<std::size_t> unit_index_;
  std::vector<ArrowId> src_, rng_, inv_;
  std::vector<std::size_t> src_off_, rng_off_;
  std::vector<ArrowId> src_arrows_, rng_arrows_;
  std::vector<std::size_t> src_pos_, rng_pos_;
  std::vector<std::size_t> pair_base_;
  std::vector<ArrowId> product_;
};

using GroupoidPtr = std::shared_ptr<const Groupoid>;

inline GroupoidPtr share(Groupoid g) { return std::make_shared<const Groupoid>(std::move(g)); }

/// Pair groupoid X x X on points 0..n-1. Arrow (y,x) has id y*n + x, source
/// x and range y; (z,y)(y,x) = (z,x).
class PairGroupoid {
 public:
  explicit PairGroupoid(std::size_t n) : n_(n), magic_(n ? ~std::uint64_t{0} / n + 1 : 0) {
    require(n >= 1, Errc::invalid_argument, "pair groupoid needs at least one point");
    require(n <= 65535, Errc::invalid_argument, "pair groupoid arrow ids must fit in 32 bits");
  }

  std::size_t points() const { return n_; }
  std::size_t arrow_count() const { return n_ * n_; }
  std::size_t unit_count() const { return n_; }
  ArrowId unit(std::size_t i) const { return i * n_ + i; }
  std::size_t unit_index(ArrowId a) const {
    const std::size_t y = div(a);
    return a - y * n_ == y ? y : npos;
  }

  ArrowId arrow(std::size_t y, std::size_t x) const { return y * n_ + x; }
  std::size_t range_point(ArrowId a) const { return div(a); }
  std::size_t source_point(ArrowId a) const { return a - div(a) * n_; }

  ArrowId src(ArrowId a) const { return unit(source_point(a)); }
  ArrowId rng(ArrowId a) const { return unit(div(a)); }
  ArrowId inv(ArrowId a) const {
    const std::size_t y = div(a);
    return (a - y * n_) * n_ + y;
  }
  ArrowId product(ArrowId a, ArrowId b) const { return div(a) * n_ + source_point(b); }

  auto source_fiber(ArrowId x) const {
    const std::size_t n = n_, col = source_point(x);
    return std::views::iota(std::size_t{0}, n) |
           std::views::transform([n, col](std::size_t y) -> ArrowId { return y * n + col; });
  }
  auto range_fiber(ArrowId x) const {
    const std::size_t row = div(x) * n_;
    return std::views::iota(row, row + n_);
  }
  std::size_t source_position(ArrowId a) const { return div(a); }

 private:
  // Division by n through a precomputed reciprocal; exact for 32-bit
  // dividends, which every arrow id is.
  std::size_t div(ArrowId a) const {
    return static_cast<std::size_t>((static_cast<unsigned __int128>(magic_) * a) >> 64);
  }

  std::size_t n_;
  std::uint64_t magic_;
};

static_assert(FiniteGroupoid<Groupoid>);
static_assert(FiniteGroupoid<PairGroupoid>);

/// Checks the groupoid axioms through the concept interface: unit
/// structure, endpoints, inverses, identities and associativity. Every
/// violation carries a witness tuple.
template <FiniteGroupoid G>
Violations check_axioms(const G& g, std::size_t max_violations = 64) {
  Violations out;
  auto add = [&](std::string kind, std::vector<std::size_t> w, std::string detail = {}) {
    if (out.size() < max_violations) out.push_back({std::move(kind), std::move(w), std::move(detail)});
  };
  const std::size_t n = g.arrow_count();
  for (std::size_t i = 0; i < g.unit_count(); ++i) {
    ArrowId u = g.unit(i);
    if (g.src(u) != u || g.rng(u) != u || g.inv(u) != u) add("UNIT_STRUCTURE", {u});
  }
  for (ArrowId a = 0; a < n; ++a) {
    if (!is_unit(g, g.src(a)) || !is_unit(g, g.rng(a))) {
      add("ENDPOINT_NOT_UNIT", {a});
      continue;
    }
    ArrowId ai = g.inv(a);
    if (g.inv(ai) != a) add("INVOLUTION", {a, ai});
    if (g.src(ai) != g.rng(a) || g.rng(ai) != g.src(a)) add("INVERSE_MISMATCH", {a, ai});
  }
  if (!out.empty()) return out;

  for (ArrowId a = 0; a < n; ++a) {
    if (g.product(g.rng(a), a) != a || g.product(a, g.src(a)) != a) add("IDENTITY", {a});
    ArrowId ai = g.inv(a);
    if (g.src(ai) == g.rng(a) && g.rng(ai) == g.src(a)) {
      if (g.product(a, ai) != g.rng(a) || g.product(ai, a) != g.src(a))
        add("INVERSE_PRODUCT", {a, ai});
    }
    for (ArrowId b : g.range_fiber(g.src(a))) {
      ArrowId ab = g.product(a, b);
      if (ab >= n) {
        add("PRODUCT_MISSING", {a, b});
        continue;
      }
      if (g.src(ab) != g.src(b) || g.rng(ab) != g.rng(a)) add("PRODUCT_ENDPOINTS", {a, b, ab});
    }
  }
  if (!out.empty()) return out;

  for (ArrowId a = 0; a < n; ++a) {
    for (ArrowId b : g.range_fiber(g.src(a))) {
      ArrowId ab = g.product(a, b);
      for (ArrowId c : g.range_fiber(g.src(b))) {
        if (g.product(ab, c) != g.product(a, g.product(b, c))) add("ASSOCIATIVITY", {a, b, c});
      }
    }
  }
  return out;
}

template <FiniteGroupoid G>
Violations validate(const G& g) {
  return check_axioms(g);
}

/// Validates raw tables. Out-of-range references throw DANGLING_ID; ids
/// that are not exactly 0..N-1 throw SCHEMA_ERROR. Everything else is
/// returned as a violation list (empty means ok).
inline Violations validate(const GroupoidTables& t) {
  const std::size_t n = t.arrows.size();
  std::vector<char> seen(n, 0);
  for (const auto& a : t.arrows) {
    require(a.id < n && !seen[a.id], Errc::schema_error,
            "arrow ids must be exactly 0..N-1 without repeats", {a.id});
    seen[a.id] = 1;
  }
  auto check_ref = [&](ArrowId id, const char* what) {
    require(id < n, Errc::dangling_id, std::string(what) + " references missing arrow " +
                                           std::to_string(id), {id});
  };
  for (ArrowId u : t.units) check_ref(u, "unit list");
  for (const auto& a : t.arrows) {
    check_ref(a.src, "src");
    check_ref(a.rng, "rng");
    check_ref(a.inv, "inv");
  }
  for (const auto& p : t.product) {
    check_ref(p[0], "product");
    check_ref(p[1], "product");
    check_ref(p[2], "product");
  }

  Violations out;
  std::vector<ArrowId> src(n), rng(n), inv(n);
  for (const auto& a : t.arrows) {
    src[a.id] = a.src;
    rng[a.id] = a.rng;
    inv[a.id] = a.inv;
  }
  std::vector<char> is_u(n, 0);
  for (ArrowId u : t.units) {
    if (is_u[u]) out.push_back({"DUPLICATE_UNIT", {u}, {}});
    is_u[u] = 1;
    if (src[u] != u || rng[u] != u || inv[u] != u) out.push_back({"UNIT_STRUCTURE", {u}, {}});
  }
  for (ArrowId a = 0; a < n; ++a) {
    if (!is_u[src[a]] || !is_u[rng[a]]) out.push_back({"ENDPOINT_NOT_UNIT", {a}, {}});
    if (inv[inv[a]] != a) out.push_back({"INVOLUTION", {a, inv[a]}, {}});
    if (src[inv[a]] != rng[a] || rng[inv[a]] != src[a])
      out.push_back({"INVERSE_MISMATCH", {a, inv[a]}, {}});
  }
  if (!out.empty()) return out;

  // The product must be defined exactly on composable pairs.
  std::vector<std::size_t> range_count(n, 0);
  for (ArrowId a = 0; a < n; ++a) ++range_count[rng[a]];
  std::size_t expected = 0;
  for (ArrowId a = 0; a < n; ++a) expected += range_count[src[a]];
  std::vector<std::pair<ArrowId, ArrowId>> pairs;
  pairs.reserve(t.product.size());
  for (const auto& p : t.product) {
    if (src[p[0]] != rng[p[1]]) out.push_back({"PRODUCT_DOMAIN", {p[0], p[1]}, "pair not composable"});
    pairs.emplace_back(p[0], p[1]);
  }
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t i = 1; i < pairs.size(); ++i)
    if (pairs[i] == pairs[i - 1]) out.push_back({"PRODUCT_DUPLICATE", {pairs[i].first, pairs[i].second}, {}});
  if (!out.empty()) return out;
  if (pairs.size() != expected) {
    // Report the first composable pair without a product entry.
    for (ArrowId a = 0; a < n && out.empty(); ++a)
      for (ArrowId b = 0; b < n; ++b)
        if (src[a] == rng[b] && !std::binary_search(pairs.begin(), pairs.end(), std::pair{a, b})) {
          out.push_back({"PRODUCT_MISSING", {a, b}, {}});
          break;
        }
    return out;
  }
  return check_axioms(Groupoid::unchecked(t));
}

/// Orbit representatives: the smallest unit of each orbit {r(g) : g in G_x}.
template <FiniteGroupoid G>
std::vector<ArrowId> orbit_representatives(const G& g) {
  std::vector<char> covered(g.unit_count(), 0);
  std::vector<ArrowId> reps;
  for (std::size_t i = 0; i < g.unit_count(); ++i) {
    if (covered[i]) continue;
    ArrowId x = g.unit(i);
    reps.push_back(x);
    for (ArrowId a : g.source_fiber(x)) covered[g.unit_index(g.rng(a))] = 1;
  }
  return reps;
}

/// Iso(G) membership scan: principal iff every arrow with src = rng is a unit.
template <FiniteGroupoid G>
bool is_principal(const G& g) {
  for (std::size_t i = 0; i < g.unit_count(); ++i) {
    ArrowId x = g.unit(i);
    for (ArrowId a : g.source_fiber(x))
      if (g.rng(a) == x && a != x) return false;
  }
  return true;
}

inline bool is_principal(const PairGroupoid&) { return true; }

template <FiniteGroupoid G>
std::size_t max_fiber_size(const G& g) {
  std::size_t m = 0;
  for (std::size_t i = 0; i < g.unit_count(); ++i)
    m = std::max<std::size_t>(m, std::ranges::size(g.source_fiber(g.unit(i))));
  return m;
}

}  // namespace rdg
