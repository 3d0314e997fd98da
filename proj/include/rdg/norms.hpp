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

// Regular representation on source fibers, the reduced C*-norm, and the
// weighted seminorms used by the rapid decay inequality.
//
// For a unit x the fiber operator acts on l^2(G_x) by
//   M[g, eta] = f(g eta^-1) sigma(g eta^-1, eta),
// the canonical-section form of the twisted regular representation. With
// this phase, M(f *_sigma h) = M(f) M(h) and M(f*) = M(f)^*.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rdg/cocycle.hpp"
#include "rdg/function.hpp"
#include "rdg/groupoid.hpp"
#include "rdg/length.hpp"
#include "rdg/parallel.hpp"
#include "rdg/spectral.hpp"

namespace rdg {

struct FiberOperator {
  ArrowId unit;
  std::vector<ArrowId> fiber;  // row/column order
  Eigen::MatrixXcd matrix;
};

template <FiniteGroupoid G>
void require_unit(const G& g, ArrowId x) {
  require(x < g.arrow_count() && is_unit(g, x), Errc::not_a_unit,
          "arrow " + std::to_string(x) + " is not a unit", {x});
}

/// Dense matrix of lambda_x(f), evaluated entrywise from the formula.
template <FiniteGroupoid G, Coefficients F, CocycleFn S>
FiberOperator rep_matrix(const G& g, const F& f, ArrowId x, const S& sigma) {
  require_same_groupoid(g, f);
  require_unit(g, x);
  FiberOperator out;
  out.unit = x;
  for (ArrowId a : g.source_fiber(x)) out.fiber.push_back(a);
  const auto n = static_cast<Eigen::Index>(out.fiber.size());
  out.matrix = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const ArrowId eta = out.fiber[j];
    const ArrowId eta_inv = g.inv(eta);
    for (Eigen::Index i = 0; i < n; ++i) {
      const ArrowId a = g.product(out.fiber[i], eta_inv);
      const Complex c = f(a);
      if (c != Complex{}) out.matrix(i, j) = c * Complex(sigma(a, eta));
    }
  }
  return out;
}

/// Nonzero coefficients of f grouped by source unit, for sparse mat-vecs.
template <FiniteGroupoid G>
class SupportIndex {
 public:
  SupportIndex(const G& g, const GFunction& f) : offsets_(g.unit_count() + 1, 0) {
    for (ArrowId a = 0; a < f.size(); ++a)
      if (f[a] != Complex{}) ++offsets_[g.unit_index(g.src(a)) + 1];
    for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
    arrows_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (ArrowId a = 0; a < f.size(); ++a)
      if (f[a] != Complex{}) arrows_[fill[g.unit_index(g.src(a))]++] = a;
  }

  std::span<const ArrowId> from(std::size_t unit_index) const {
    return std::span<const ArrowId>(arrows_).subspan(offsets_[unit_index],
                                                     offsets_[unit_index + 1] - offsets_[unit_index]);
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<ArrowId> arrows_;
};

/// Matrix-free lambda_x(f): (M xi)(a eta) += f(a) sigma(a, eta) xi(eta) for
/// eta in G_x and a in supp(f) with src(a) = r(eta).
template <FiniteGroupoid G, Coefficients F, CocycleFn S>
class FiberApply {
 public:
  FiberApply(const G& g, const F& f, const S& sigma, ArrowId x,
             const SupportIndex<G>* support = nullptr)
      : g_(g), f_(f), sigma_(sigma), support_(support) {
    for (ArrowId a : g.source_fiber(x)) fiber_.push_back(a);
  }

  Eigen::Index dim() const { return static_cast<Eigen::Index>(fiber_.size()); }

  /// Records the nonzero entries if there are at most `limit` of them, so
  /// later mat-vecs cost O(nnz) instead of re-evaluating f on every pair.
  /// Returns false (and keeps the matrix-free path) past the limit.
  bool tabulate(std::size_t limit) {
    std::vector<Entry> e;
    const bool complete = for_each_entry([&](std::size_t i, std::size_t j, Complex m) {
      if (e.size() >= limit) return false;
      e.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), m});
      return true;
    });
    if (complete) entries_ = std::move(e);
    return complete;
  }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& xi) const {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim());
    visit_all([&](std::size_t i, std::size_t j, Complex m) { out(i) += m * xi(j); });
    return out;
  }

  Eigen::VectorXcd apply_adjoint(const Eigen::VectorXcd& xi) const {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim());
    visit_all([&](std::size_t i, std::size_t j, Complex m) { out(j) += std::conj(m) * xi(i); });
    return out;
  }

 private:
  struct Entry {
    std::uint32_t i, j;
    Complex m;
  };

  template <class Visit>
  void visit_all(Visit&& visit) const {
    if (entries_) {
      for (const Entry& e : *entries_) visit(e.i, e.j, e.m);
    } else {
      for_each_entry([&](std::size_t i, std::size_t j, Complex m) {
        visit(i, j, m);
        return true;
      });
    }
  }

  // Visits every nonzero entry; stops early when visit returns false.
  template <class Visit>
  bool for_each_entry(Visit&& visit) const {
    for (std::size_t j = 0; j < fiber_.size(); ++j) {
      const ArrowId eta = fiber_[j];
      const ArrowId r = g_.rng(eta);
      auto body = [&](ArrowId a, Complex c) {
        return visit(g_.source_position(g_.product(a, eta)), j, c * Complex(sigma_(a, eta)));
      };
      if (support_) {
        for (ArrowId a : support_->from(g_.unit_index(r)))
          if (!body(a, f_(a))) return false;
      } else {
        for (ArrowId a : g_.source_fiber(r)) {
          const Complex c = f_(a);
          if (c != Complex{} && !body(a, c)) return false;
        }
      }
    }
    return true;
  }

  const G& g_;
  const F& f_;
  const S& sigma_;
  const SupportIndex<G>* support_;
  std::vector<ArrowId> fiber_;
  std::optional<std::vector<Entry>> entries_;
};

/// Entry cap for tabulated fiber operators (24 bytes each).
inline constexpr std::size_t kTabulateLimit = std::size_t{1} << 21;

struct FiberNorm {
  ArrowId unit = 0;
  std::size_t dim = 0;
  SpectralNorm norm;
};

template <FiniteGroupoid G, Coefficients F, CocycleFn S>
FiberNorm fiber_norm(const G& g, const F& f, ArrowId x, const S& sigma,
                     const SpectralOptions& opts = {}, const SupportIndex<G>* support = nullptr) {
  require_same_groupoid(g, f);
  require_unit(g, x);
  FiberNorm out;
  out.unit = x;
  out.dim = std::ranges::size(g.source_fiber(x));
  if (out.dim <= opts.dense_limit) {
    out.norm = dense_spectral_norm(rep_matrix(g, f, x, sigma).matrix);
  } else {
    FiberApply<G, F, S> op(g, f, sigma, x, support);
    op.tabulate(kTabulateLimit);
    out.norm = power_iteration_norm(
        op.dim(), [&](const Eigen::VectorXcd& v) { return op.apply(v); },
        [&](const Eigen::VectorXcd& v) { return op.apply_adjoint(v); }, opts);
  }
  return out;
}

enum class UnitScope { orbit_representatives, all_units };

struct NormOptions {
  SpectralOptions spectral;
  UnitScope scope = UnitScope::orbit_representatives;
  std::size_t workers = 1;
  bool throw_on_no_convergence = true;
};

struct NormReport {
  std::vector<FiberNorm> fibers;
  double value = 0.0;
  double max_residual = 0.0;
  bool converged = true;
};

/// ||f||_{C*_r(G,sigma)} = sup_x ||lambda_x(f)||. Fibers in one orbit carry
/// unitarily equivalent operators, so by default one unit per orbit is
/// evaluated; UnitScope::all_units evaluates every fiber.
template <FiniteGroupoid G, Coefficients F, CocycleFn S>
NormReport reduced_norm(const G& g, const F& f, const S& sigma, const NormOptions& opts = {}) {
  require_same_groupoid(g, f);
  std::vector<ArrowId> units;
  if (opts.scope == UnitScope::all_units) {
    for (std::size_t i = 0; i < g.unit_count(); ++i) units.push_back(g.unit(i));
  } else {
    units = orbit_representatives(g);
  }
  std::unique_ptr<SupportIndex<G>> support;
  if constexpr (std::same_as<F, GFunction>) {
    if (max_fiber_size(g) > opts.spectral.dense_limit && f.support_size() * 4 < f.size())
      support = std::make_unique<SupportIndex<G>>(g, f);
  }

  NormReport out;
  out.fibers.resize(units.size());
  parallel_for(units.size(), opts.workers, [&](std::size_t i) {
    out.fibers[i] = fiber_norm(g, f, units[i], sigma, opts.spectral, support.get());
  });
  for (const auto& fb : out.fibers) {
    out.value = std::max(out.value, fb.norm.value);
    out.max_residual = std::max(out.max_residual, fb.norm.residual);
    if (!fb.norm.converged) out.converged = false;
  }
  if (!out.converged && opts.throw_on_no_convergence) {
    for (const auto& fb : out.fibers)
      if (!fb.norm.converged) throw NoConvergence(out.value, fb.norm.residual, fb.norm.iterations);
  }
  return out;
}

/// Seminorm selectors: the value at one source fiber, the sup over source
/// fibers, or the symmetric max over f and f*.
struct AtUnit {
  ArrowId unit;
};
struct SupSource {};
struct Symmetric {};
using SeminormMode = std::variant<AtUnit, SupSource, Symmetric>;

inline void require_nonnegative_t(double t) {
  require(t >= 0.0 && std::isfinite(t), Errc::negative_t, "t must be a finite nonnegative number");
}

/// (sum_{g in G_x} |f(g)|^2 (1 + l(g))^{2t})^{1/2}.
template <FiniteGroupoid G, Coefficients F, ArrowLength L>
double seminorm_at(const G& g, const F& f, const L& l, double t, ArrowId x) {
  double s = 0.0;
  for (ArrowId a : g.source_fiber(x)) {
    const double m = std::norm(Complex(f(a)));
    if (m != 0.0) s += m * std::pow(1.0 + l(a), 2.0 * t);
  }
  return std::sqrt(s);
}

/// Same sum for f*: |f*(g)| = |f(g^-1)| and l(g^-1) = l(g), so this runs
/// over the range fiber G^x.
template <FiniteGroupoid G, Coefficients F, ArrowLength L>
double adjoint_seminorm_at(const G& g, const F& f, const L& l, double t, ArrowId x) {
  double s = 0.0;
  for (ArrowId a : g.source_fiber(x)) {
    const double m = std::norm(Complex(f(g.inv(a))));
    if (m != 0.0) s += m * std::pow(1.0 + l(a), 2.0 * t);
  }
  return std::sqrt(s);
}

/// ||f||_{l,t,s,x}, ||f||_{l,t,s} or ||f||_{l,t}. Moduli do not depend on
/// the cocycle, so none is needed.
template <FiniteGroupoid G, Coefficients F, ArrowLength L>
double weighted_seminorm(const G& g, const F& f, const L& l, double t,
                         const SeminormMode& mode) {
  require_same_groupoid(g, f);
  require_nonnegative_t(t);
  if (auto* at = std::get_if<AtUnit>(&mode)) {
    require_unit(g, at->unit);
    return seminorm_at(g, f, l, t, at->unit);
  }
  const bool symmetric = std::holds_alternative<Symmetric>(mode);
  double best = 0.0;
  for (std::size_t i = 0; i < g.unit_count(); ++i) {
    const ArrowId x = g.unit(i);
    best = std::max(best, seminorm_at(g, f, l, t, x));
    if (symmetric) best = std::max(best, adjoint_seminorm_at(g, f, l, t, x));
  }
  return best;
}

namespace detail {

/// (1 + l)^{2t} for each t, memoized for small integer lengths, which is
/// what graph metrics and word lengths produce.
class WeightTable {
 public:
  explicit WeightTable(const std::vector<double>& ts) : ts_(ts) {}

  const double* operator()(double l) {
    if (l >= 0 && l < kCached && l == std::floor(l)) {
      const auto k = static_cast<std::size_t>(l);
      if (k >= filled_.size()) {
        filled_.resize(k + 1, 0);
        cache_.resize((k + 1) * ts_.size());
      }
      if (!filled_[k]) {
        compute(l, &cache_[k * ts_.size()]);
        filled_[k] = 1;
      }
      return &cache_[k * ts_.size()];
    }
    scratch_.resize(ts_.size());
    compute(l, scratch_.data());
    return scratch_.data();
  }

 private:
  static constexpr double kCached = 4096;
  void compute(double l, double* out) const {
    for (std::size_t k = 0; k < ts_.size(); ++k) out[k] = std::pow(1.0 + l, 2.0 * ts_[k]);
  }
  std::vector<double> ts_;
  std::vector<char> filled_;
  std::vector<double> cache_, scratch_;
};

}  // namespace detail

/// Symmetric seminorm at several exponents in one pass over the arrows.
template <FiniteGroupoid G, Coefficients F, ArrowLength L>
std::vector<double> symmetric_seminorms(const G& g, const F& f, const L& l,
                                        const std::vector<double>& ts) {
  require_same_groupoid(g, f);
  for (double t : ts) require_nonnegative_t(t);
  detail::WeightTable weights(ts);
  std::vector<double> best(ts.size(), 0.0), s(ts.size()), s_star(ts.size());
  for (std::size_t i = 0; i < g.unit_count(); ++i) {
    const ArrowId x = g.unit(i);
    std::fill(s.begin(), s.end(), 0.0);
    std::fill(s_star.begin(), s_star.end(), 0.0);
    for (ArrowId a : g.source_fiber(x)) {
      const double m = std::norm(Complex(f(a)));
      const double m_star = std::norm(Complex(f(g.inv(a))));
      if (m == 0.0 && m_star == 0.0) continue;
      const double* w = weights(l(a));
      for (std::size_t k = 0; k < ts.size(); ++k) {
        s[k] += m * w[k];
        s_star[k] += m_star * w[k];
      }
    }
    for (std::size_t k = 0; k < ts.size(); ++k)
      best[k] = std::max({best[k], std::sqrt(s[k]), std::sqrt(s_star[k])});
  }
  return best;
}

/// Schur-test bound max(sup_x sum_{G_x} |f|, sup_x sum_{G^x} |f|), which
/// dominates the reduced norm for every cocycle.
template <FiniteGroupoid G>
double i_norm_bound(const G& g, const GFunction& f) {
  require_same_groupoid(g, f);
  double best = 0.0;
  for (std::size_t i = 0; i < g.unit_count(); ++i) {
    const ArrowId x = g.unit(i);
    double col = 0.0, row = 0.0;
    for (ArrowId a : g.source_fiber(x)) col += std::abs(f[a]);
    for (ArrowId a : g.range_fiber(x)) row += std::abs(f[a]);
    best = std::max({best, col, row});
  }
  return best;
}

}  // namespace rdg
