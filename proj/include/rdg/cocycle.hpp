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

// Twists as normalized circle-valued 2-cocycles. The twist E = G x_sigma T
// is never built; its canonical section g -> (g,1) is implicit in every
// formula that takes a cocycle.

#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "rdg/groupoid.hpp"
#include "rdg/homomorphism.hpp"

namespace rdg {

using Complex = std::complex<double>;

template <class S>
concept CocycleFn = requires(const S& s, ArrowId a) {
  { s(a, a) } -> std::convertible_to<Complex>;
};

struct TrivialCocycle {
  Complex operator()(ArrowId, ArrowId) const { return {1.0, 0.0}; }
};

/// Tabulated cocycle over the composable pairs of an explicit groupoid.
class Cocycle {
 public:
  Cocycle(GroupoidPtr g, std::vector<Complex> values) : g_(std::move(g)), values_(std::move(values)) {
    require(values_.size() == g_->composable_pair_count(), Errc::invalid_argument,
            "cocycle table size does not match the composable pairs");
  }

  Complex operator()(ArrowId a, ArrowId b) const { return values_[g_->pair_index(a, b)]; }

  const Groupoid& groupoid() const { return *g_; }
  const GroupoidPtr& groupoid_ptr() const { return g_; }
  const std::vector<Complex>& values() const { return values_; }

 private:
  GroupoidPtr g_;
  std::vector<Complex> values_;
};

inline constexpr double kCocycleTolerance = 1e-10;

/// Exhaustive check of |sigma| = 1, sigma(r(a),a) = sigma(a,s(a)) = 1 and
/// sigma(a,b) sigma(ab,c) = sigma(b,c) sigma(a,bc).
template <FiniteGroupoid G, CocycleFn S>
Violations validate_cocycle(const G& g, const S& sigma, double tol = kCocycleTolerance,
                            std::size_t max_violations = 64) {
  Violations out;
  auto add = [&](std::string kind, std::vector<std::size_t> w) {
    if (out.size() < max_violations) out.push_back({std::move(kind), std::move(w), {}});
  };
  for (ArrowId a = 0; a < g.arrow_count(); ++a) {
    if (std::abs(Complex(sigma(g.rng(a), a)) - 1.0) > tol ||
        std::abs(Complex(sigma(a, g.src(a))) - 1.0) > tol)
      add("NORMALIZATION", {a});
    for (ArrowId b : g.range_fiber(g.src(a)))
      if (std::abs(std::abs(Complex(sigma(a, b))) - 1.0) > tol) add("MODULUS", {a, b});
  }
  if (!out.empty()) return out;
  for (ArrowId a = 0; a < g.arrow_count(); ++a)
    for (ArrowId b : g.range_fiber(g.src(a))) {
      const ArrowId ab = g.product(a, b);
      const Complex sab = sigma(a, b);
      for (ArrowId c : g.range_fiber(g.src(b))) {
        Complex lhs = sab * Complex(sigma(ab, c));
        Complex rhs = Complex(sigma(b, c)) * Complex(sigma(a, g.product(b, c)));
        if (std::abs(lhs - rhs) > tol) add("COCYCLE_IDENTITY", {a, b, c});
      }
    }
  return out;
}

template <CocycleFn S>
Cocycle tabulate(const GroupoidPtr& g, const S& sigma) {
  std::vector<Complex> v(g->composable_pair_count());
  for (ArrowId a = 0; a < g->arrow_count(); ++a)
    for (ArrowId b : g->range_fiber(g->src(a))) v[g->pair_index(a, b)] = sigma(a, b);
  return Cocycle(g, std::move(v));
}

inline Cocycle trivial_cocycle(const GroupoidPtr& g) { return tabulate(g, TrivialCocycle{}); }

/// (phi^* sigma)(a,b) = sigma(phi(a), phi(b)).
template <CocycleFn S>
Cocycle pullback_cocycle(const GroupoidHom& phi, const S& sigma) {
  return tabulate(phi.dom, [&](ArrowId a, ArrowId b) { return Complex(sigma(phi(a), phi(b))); });
}

/// Cocycle on G x H (ids a*|H| + h) given by sigma((a,h),(a',h')) =
/// sigma(a,a'), the twist E x H.
template <CocycleFn S>
Cocycle product_cocycle(const S& sigma, const Groupoid& H, const GroupoidPtr& product) {
  const std::size_t nh = H.arrow_count();
  return tabulate(product, [&](ArrowId p, ArrowId q) { return Complex(sigma(p / nh, q / nh)); });
}

/// sigma'(a,b) = beta(a) beta(b) conj(beta(ab)) sigma(a,b). Cohomologous to
/// sigma when beta is unit-modulus and 1 on units.
template <FiniteGroupoid G, class Phase, CocycleFn S = TrivialCocycle>
class CoboundaryCocycle {
 public:
  CoboundaryCocycle(const G& g, Phase beta, S base = {}) : g_(&g), beta_(std::move(beta)), base_(std::move(base)) {}

  Complex operator()(ArrowId a, ArrowId b) const {
    Complex c;
    if constexpr (requires { beta_.root_index(a); }) {
      // Phases that are roots of unity combine by adding exponents.
      c = beta_.root(beta_.root_index(a) + beta_.root_index(b) - beta_.root_index(g_->product(a, b)));
    } else {
      c = beta_(a) * beta_(b) * std::conj(beta_(g_->product(a, b)));
    }
    if constexpr (std::same_as<S, TrivialCocycle>) return c;
    else return c * Complex(base_(a, b));
  }

 private:
  const G* g_;
  Phase beta_;
  S base_;
};

/// Deterministic pseudo-random phase on arrows: 1 on units, otherwise a
/// 64th root of unity chosen by hashing (seed, arrow). Needs no storage, so
/// it works on implicit groupoids of any size.
template <FiniteGroupoid G>
class HashedPhase {
 public:
  HashedPhase(const G& g, std::uint64_t seed) : g_(&g), seed_(seed) {
    for (int k = 0; k < 64; ++k) roots_[k] = std::polar(1.0, 2.0 * std::numbers::pi * k / 64.0);
  }

  Complex operator()(ArrowId a) const { return root(root_index(a)); }

  /// k with beta(a) = e^{2 pi i k/64}.
  unsigned root_index(ArrowId a) const {
    if (is_unit(*g_, a)) return 0;
    std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * (a + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return static_cast<unsigned>(z & 63);
  }
  /// e^{2 pi i k/64}, k taken mod 64.
  Complex root(unsigned k) const { return roots_[k & 63]; }

 private:
  const G* g_;
  std::uint64_t seed_;
  Complex roots_[64];
};

template <FiniteGroupoid G>
auto hashed_coboundary(const G& g, std::uint64_t seed) {
  return CoboundaryCocycle<G, HashedPhase<G>>(g, HashedPhase<G>(g, seed));
}

/// Coboundary from an explicit phase table (forced to 1 on units).
template <CocycleFn S>
Cocycle perturb(const GroupoidPtr& g, const S& sigma, std::vector<Complex> beta) {
  require(beta.size() == g->arrow_count(), Errc::invalid_argument, "phase table size mismatch");
  for (ArrowId x : g->units()) beta[x] = 1.0;
  return tabulate(g, [&](ArrowId a, ArrowId b) {
    return beta[a] * beta[b] * std::conj(beta[g->product(a, b)]) * Complex(sigma(a, b));
  });
}

/// On Z_n x Z_n (element (a1,a2) has index a1*n + a2, as produced by
/// direct_product_table): sigma(a,b) = omega^{a2 b1} with omega = e^{2 pi i/n}.
/// n = 2 is the Heisenberg cocycle (-1)^{a2 b1}.
inline Cocycle bicharacter_cocycle(const GroupoidPtr& g, std::size_t n) {
  require(g->arrow_count() == n * n && g->unit_count() == 1, Errc::invalid_argument,
          "bicharacter cocycle needs the group Z_n x Z_n");
  Cocycle out = tabulate(g, [n](ArrowId a, ArrowId b) {
    std::size_t e = ((a % n) * (b / n)) % n;
    if (n == 2) return Complex(e ? -1.0 : 1.0, 0.0);
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(n));
  });
  // Right size but another group (Z_{n^2}, say): the formula is then no cocycle.
  Violations v = validate_cocycle(*g, out);
  if (!v.empty()) throw Error(Errc::invalid_argument, "bicharacter cocycle needs the group Z_n x Z_n", std::move(v));
  return out;
}

inline Cocycle heisenberg_cocycle(const GroupoidPtr& g) { return bicharacter_cocycle(g, 2); }

}  // namespace rdg
