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

// Functions on a groupoid (elements of the twisted convolution algebra in
// the cocycle picture: f~(g) = f(g,1)) and the algebra operations.

#include <cmath>
#include <complex>
#include <concepts>
#include <string>
#include <vector>

#include "rdg/cocycle.hpp"
#include "rdg/groupoid.hpp"

namespace rdg {

/// Dense coefficient vector indexed by arrow id.
struct GFunction {
  std::vector<Complex> coeffs;

  GFunction() = default;
  explicit GFunction(std::size_t n) : coeffs(n, Complex{}) {}
  explicit GFunction(std::vector<Complex> c) : coeffs(std::move(c)) {}

  std::size_t size() const { return coeffs.size(); }
  Complex& operator[](ArrowId a) { return coeffs[a]; }
  const Complex& operator[](ArrowId a) const { return coeffs[a]; }
  Complex operator()(ArrowId a) const { return coeffs[a]; }

  bool is_zero() const {
    for (const Complex& c : coeffs)
      if (c != Complex{}) return false;
    return true;
  }
  std::size_t support_size() const {
    std::size_t k = 0;
    for (const Complex& c : coeffs) k += c != Complex{};
    return k;
  }
};

/// Anything that yields a coefficient per arrow: GFunction, or a lazily
/// evaluated function when the groupoid is too large to tabulate.
template <class F>
concept Coefficients = requires(const F& f, ArrowId a) {
  { f(a) } -> std::convertible_to<Complex>;
  { f.size() } -> std::convertible_to<std::size_t>;
};

inline GFunction delta(std::size_t arrows, ArrowId a) {
  GFunction f(arrows);
  f[a] = 1.0;
  return f;
}

template <FiniteGroupoid G>
GFunction unit_indicator(const G& g) {
  GFunction f(g.arrow_count());
  for (std::size_t i = 0; i < g.unit_count(); ++i) f[g.unit(i)] = 1.0;
  return f;
}

inline GFunction ones(std::size_t arrows) {
  GFunction f(arrows);
  for (auto& c : f.coeffs) c = 1.0;
  return f;
}

/// Pointwise modulus |f~|.
inline GFunction modulus(const GFunction& f) {
  GFunction out(f.size());
  for (std::size_t a = 0; a < f.size(); ++a) out[a] = std::abs(f[a]);
  return out;
}

template <FiniteGroupoid G, Coefficients F>
void require_same_groupoid(const G& g, const F& f) {
  require(f.size() == g.arrow_count(), Errc::groupoid_mismatch,
          "function has " + std::to_string(f.size()) + " coefficients, groupoid has " +
              std::to_string(g.arrow_count()) + " arrows");
}

/// (f *_sigma h)(g) = sum_{ab = g} f(a) h(b) sigma(a,b).
template <FiniteGroupoid G, CocycleFn S>
GFunction convolve(const G& g, const GFunction& f, const GFunction& h, const S& sigma) {
  require_same_groupoid(g, f);
  require_same_groupoid(g, h);
  GFunction out(g.arrow_count());
  for (ArrowId a = 0; a < g.arrow_count(); ++a) {
    if (f[a] == Complex{}) continue;
    for (ArrowId b : g.range_fiber(g.src(a))) {
      if (h[b] == Complex{}) continue;
      out[g.product(a, b)] += f[a] * h[b] * Complex(sigma(a, b));
    }
  }
  return out;
}

/// f*(g) = conj(sigma(g, g^-1)) conj(f(g^-1)).
template <FiniteGroupoid G, CocycleFn S>
GFunction involution(const G& g, const GFunction& f, const S& sigma) {
  require_same_groupoid(g, f);
  GFunction out(g.arrow_count());
  for (ArrowId a = 0; a < g.arrow_count(); ++a) {
    ArrowId ai = g.inv(a);
    out[a] = std::conj(Complex(sigma(a, ai))) * std::conj(f[ai]);
  }
  return out;
}

}  // namespace rdg
