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

// Rapid decay diagnostics: ratios, scans over test families, the witness
// construction, and growth versus decay experiments on model families.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "rdg/constructions.hpp"
#include "rdg/function.hpp"
#include "rdg/length.hpp"
#include "rdg/metric_space.hpp"
#include "rdg/norms.hpp"

namespace rdg {

/// Coefficients computed on demand, used where the groupoid is too large to
/// tabulate a function.
struct LazyFunction {
  std::function<Complex(ArrowId)> fn;
  std::size_t n = 0;
  Complex operator()(ArrowId a) const { return fn(a); }
  std::size_t size() const { return n; }
};

template <FiniteGroupoid G, Coefficients F>
bool is_zero_function(const G& g, const F& f) {
  for (ArrowId a = 0; a < g.arrow_count(); ++a)
    if (Complex(f(a)) != Complex{}) return false;
  return true;
}

/// ||f||_{C*_r} / ||f||_{l,t}. Throws ZERO_FUNCTION for f = 0.
template <FiniteGroupoid G, Coefficients F, CocycleFn S, ArrowLength L>
double rd_ratio(const G& g, const F& f, const S& sigma, const L& l, double t,
                const NormOptions& opts = {}) {
  require_same_groupoid(g, f);
  require_nonnegative_t(t);
  const double semi = weighted_seminorm(g, f, l, t, Symmetric{});
  require(semi > 0.0, Errc::zero_function, "rd_ratio of the zero function");
  return reduced_norm(g, f, sigma, opts).value / semi;
}

// ---------------------------------------------------------------------------
// Witness

/// f(g) = conj sigma(g, gamma2) on g = gamma1 gamma2^-1 with gamma1, gamma2
/// in F, zero elsewhere. gamma2 is recovered from s(g) because the range map
/// is injective on F. Holds pointers to g and sigma.
template <FiniteGroupoid G, CocycleFn S>
class WitnessFunction {
 public:
  WitnessFunction(const G& g, const S& sigma, std::vector<ArrowId> by_range)
      : g_(&g), sigma_(&sigma), by_range_(std::move(by_range)) {}

  Complex operator()(ArrowId a) const {
    const ArrowId gamma2 = factor(a);
    return gamma2 == npos ? Complex{} : std::conj(Complex((*sigma_)(a, gamma2)));
  }
  std::size_t size() const { return g_->arrow_count(); }

  /// |f|, which is the indicator of F F^-1 whatever the cocycle.
  struct Modulus {
    const WitnessFunction* w;
    Complex operator()(ArrowId a) const { return w->factor(a) == npos ? 0.0 : 1.0; }
    std::size_t size() const { return w->size(); }
  };
  Modulus modulus() const { return {this}; }

 private:
  // gamma2 with a = gamma1 gamma2^-1 for gamma1, gamma2 in F, or npos.
  ArrowId factor(ArrowId a) const {
    const ArrowId gamma2 = by_range_[g_->unit_index(g_->src(a))];
    if (gamma2 == npos) return npos;
    const ArrowId gamma1 = g_->product(a, gamma2);
    return by_range_[g_->unit_index(g_->rng(gamma1))] == gamma1 ? gamma2 : npos;
  }

  const G* g_;
  const S* sigma_;
  std::vector<ArrowId> by_range_;  // unit index -> element of F with that range, or npos
};

template <FiniteGroupoid G, CocycleFn S>
struct Witness {
  ArrowId unit;
  double radius;
  std::vector<ArrowId> F;
  WitnessFunction<G, S> f;
  double norm_lower_bound;  // ||lambda_x(f) xi|| for xi = |F|^{-1/2} 1_F

  /// |F|^{1/2} (1 + 2R)^t: l <= 2R on F F^-1 and each fiber meets it at most |F| times.
  double seminorm_upper_bound(double t) const {
    return std::sqrt(static_cast<double>(F.size())) * std::pow(1.0 + 2.0 * radius, t);
  }
  double ratio_lower_bound(double t) const { return norm_lower_bound / seminorm_upper_bound(t); }
};

/// F = B_l(x,R); throws EMPTY_BALL or RANGE_NOT_INJECTIVE (with the pair).
template <FiniteGroupoid G, CocycleFn S, ArrowLength L>
Witness<G, S> witness_construct(const G& g, const S& sigma, const L& l, ArrowId x, double R) {
  require_unit(g, x);
  require(R >= 0.0 && !std::isnan(R), Errc::empty_ball, "witness radius must be nonnegative");
  std::vector<ArrowId> F = ball(g, l, x, R);
  require(!F.empty(), Errc::empty_ball, "witness ball is empty", {x});
  std::vector<ArrowId> by_range(g.unit_count(), npos);
  for (ArrowId a : F) {
    ArrowId& slot = by_range[g.unit_index(g.rng(a))];
    if (slot != npos)
      throw Error(Errc::range_not_injective, "range map is not injective on the ball", {slot, a});
    slot = a;
  }
  WitnessFunction<G, S> f(g, sigma, std::move(by_range));

  FiberApply<G, WitnessFunction<G, S>, S> op(g, f, sigma, x);
  Eigen::VectorXcd xi = Eigen::VectorXcd::Zero(op.dim());
  const double c = 1.0 / std::sqrt(static_cast<double>(F.size()));
  for (ArrowId a : F) xi(g.source_position(a)) = c;
  const double lower = op.apply(xi).norm();
  return Witness<G, S>{x, R, std::move(F), std::move(f), lower};
}

struct WitnessCheck {
  double t;
  double norm;            // reduced norm (power iteration value is itself a lower bound)
  double norm_residual;
  double seminorm;
  double seminorm_bound;
  bool norm_ok;           // norm >= |F| - tol
  bool seminorm_ok;       // seminorm <= bound + tol
};

inline constexpr double kWitnessTolerance = 1e-6;

/// Recomputes both sides of the witness guarantee at each t.
template <FiniteGroupoid G, CocycleFn S, ArrowLength L>
std::vector<WitnessCheck> verify_witness(const G& g, const S& sigma, const L& l,
                                         const Witness<G, S>& w, const std::vector<double>& ts,
                                         NormOptions opts = {}, double tol = kWitnessTolerance) {
  opts.throw_on_no_convergence = false;
  const NormReport nr = reduced_norm(g, w.f, sigma, opts);
  const std::vector<double> semis = symmetric_seminorms(g, w.f.modulus(), l, ts);
  const double size = static_cast<double>(w.F.size());
  std::vector<WitnessCheck> out;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double bound = w.seminorm_upper_bound(ts[k]);
    out.push_back({ts[k], nr.value, nr.max_residual, semis[k], bound,
                   nr.value >= size - tol, semis[k] <= bound + tol});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scans

enum class ScanFamily { ball_indicators, random_complex, witness_seeded };

inline std::string_view family_name(ScanFamily f) {
  switch (f) {
    case ScanFamily::ball_indicators: return "ball_indicators";
    case ScanFamily::random_complex: return "random_complex";
    case ScanFamily::witness_seeded: return "witness_seeded";
  }
  return "?";
}

inline ScanFamily parse_family(std::string_view s) {
  if (s == "ball_indicators" || s == "balls") return ScanFamily::ball_indicators;
  if (s == "random_complex" || s == "random") return ScanFamily::random_complex;
  if (s == "witness_seeded" || s == "witness") return ScanFamily::witness_seeded;
  throw Error(Errc::invalid_argument, "unknown family '" + std::string(s) + "'");
}

struct ScanOptions {
  ScanFamily family = ScanFamily::ball_indicators;
  std::size_t trials = 16;  // ball centers, random draws, or witness seeds
  std::uint64_t seed = 1;
  std::size_t max_radii = 32;
  NormOptions norm;
};

struct ScanRow {
  std::size_t id;
  std::string param;
  double ratio;
  double bound;     // lower bound on the RD constant certified by this row
  double residual;
};

struct RDScanResult {
  double t;
  ScanFamily family;
  std::vector<ScanRow> rows;
  double max_ratio = 0.0;
  std::size_t argmax = 0;
};

/// Distinct length values on the fibers of the given units, thinned to at
/// most `cap` (always keeping the smallest and the largest).
template <FiniteGroupoid G, ArrowLength L>
std::vector<double> radius_grid(const G& g, const L& l, const std::vector<ArrowId>& units,
                                std::size_t cap) {
  std::vector<double> v;
  for (ArrowId x : units)
    for (ArrowId a : g.source_fiber(x)) v.push_back(l(a));
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  if (cap >= 2 && v.size() > cap) {
    std::vector<double> thin;
    for (std::size_t k = 0; k < cap; ++k) thin.push_back(v[k * (v.size() - 1) / (cap - 1)]);
    thin.erase(std::unique(thin.begin(), thin.end()), thin.end());
    v = std::move(thin);
  }
  return v;
}

namespace detail {

struct Member {
  std::string param;
  std::function<LazyFunction()> make;
  std::optional<std::function<double(double)>> certified;  // witness ratio bound per t
};

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Max of reduced_norm / symmetric seminorm over a deterministic family, at
/// each t in ts. Norms are computed once per member; unconverged power
/// iterations contribute their lower bound and report the residual.
template <FiniteGroupoid G, CocycleFn S, ArrowLength L>
std::vector<RDScanResult> rd_scan(const G& g, const S& sigma, const L& l,
                                  const std::vector<double>& ts, const ScanOptions& opts) {
  for (double t : ts) require_nonnegative_t(t);
  std::mt19937_64 rng(opts.seed);
  std::vector<ArrowId> all_units;
  for (std::size_t i = 0; i < g.unit_count(); ++i) all_units.push_back(g.unit(i));
  auto pick_unit = [&] { return all_units[std::uniform_int_distribution<std::size_t>(0, all_units.size() - 1)(rng)]; };

  std::vector<detail::Member> members;
  const std::size_t n = g.arrow_count();
  const std::vector<double> radii = radius_grid(g, l, all_units, opts.max_radii);
  auto pick_radius = [&] { return radii[std::uniform_int_distribution<std::size_t>(0, radii.size() - 1)(rng)]; };

  switch (opts.family) {
    case ScanFamily::ball_indicators: {
      for (double r : radii)
        members.push_back({"tube:r=" + detail::num(r), [&l, r, n] {
                             return LazyFunction{[&l, r](ArrowId a) { return Complex(l(a) <= r ? 1.0 : 0.0); }, n};
                           },
                           std::nullopt});
      for (std::size_t k = 0; k < opts.trials; ++k) {
        const ArrowId x = pick_unit();
        const double r = pick_radius();
        members.push_back({"ball:x=" + std::to_string(x) + ";r=" + detail::num(r),
                           [&g, &l, x, r, n] {
                             return LazyFunction{[&g, &l, x, r](ArrowId a) {
                                                   return Complex(g.src(a) == x && l(a) <= r ? 1.0 : 0.0);
                                                 },
                                                 n};
                           },
                           std::nullopt});
      }
      break;
    }
    case ScanFamily::random_complex: {
      for (std::size_t k = 0; k < opts.trials; ++k) {
        const double r = pick_radius();
        const std::uint64_t s = rng();
        members.push_back({"random:r=" + detail::num(r) + ";trial=" + std::to_string(k),
                           [&l, r, s, n] {
                             auto coeffs = std::make_shared<GFunction>(n);
                             std::mt19937_64 local(s);
                             std::normal_distribution<double> normal;
                             for (ArrowId a = 0; a < n; ++a) {
                               const double re = normal(local), im = normal(local);
                               if (l(a) <= r) (*coeffs)[a] = {re, im};
                             }
                             return LazyFunction{[coeffs](ArrowId a) { return (*coeffs)[a]; }, n};
                           },
                           std::nullopt});
      }
      break;
    }
    case ScanFamily::witness_seeded: {
      std::vector<std::pair<ArrowId, double>> seeds;
      const ArrowId x0 = g.unit(0);
      seeds.push_back({x0, radius_grid(g, l, {x0}, 0).back()});
      for (std::size_t k = 1; k < opts.trials; ++k) seeds.push_back({pick_unit(), pick_radius()});
      for (auto [x, r] : seeds) {
        // Seeds whose ball is not range-injective do not yield a witness.
        std::shared_ptr<Witness<G, S>> w;
        try {
          w = std::make_shared<Witness<G, S>>(witness_construct(g, sigma, l, x, r));
        } catch (const Error& e) {
          if (e.code() != Errc::range_not_injective) throw;
          continue;
        }
        members.push_back({"witness:x=" + std::to_string(x) + ";r=" + detail::num(r),
                           [w, n] { return LazyFunction{[w](ArrowId a) { return w->f(a); }, n}; },
                           [w](double t) { return w->ratio_lower_bound(t); }});
      }
      break;
    }
  }
  require(!members.empty(), Errc::empty_family, "scan family has no members");

  struct Eval {
    double norm, residual;
    std::vector<double> semis;
  };
  std::vector<Eval> evals(members.size());
  NormOptions nopts = opts.norm;
  nopts.throw_on_no_convergence = false;
  const std::size_t outer = std::min(nopts.workers, members.size());
  nopts.workers = std::max<std::size_t>(1, nopts.workers / std::max<std::size_t>(1, outer));
  parallel_for(members.size(), outer, [&](std::size_t i) {
    const LazyFunction f = members[i].make();
    const NormReport nr = reduced_norm(g, f, sigma, nopts);
    evals[i] = {nr.value, nr.max_residual, symmetric_seminorms(g, f, l, ts)};
  });

  std::vector<RDScanResult> out;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    RDScanResult res{ts[k], opts.family, {}, 0.0, 0};
    bool any = false;
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (evals[i].semis[k] == 0.0) continue;  // zero member
      const double ratio = evals[i].norm / evals[i].semis[k];
      const double bound = members[i].certified ? (*members[i].certified)(ts[k]) : ratio;
      res.rows.push_back({i, members[i].param, ratio, bound, evals[i].residual});
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

template <FiniteGroupoid G, CocycleFn S, ArrowLength L>
RDScanResult rd_scan(const G& g, const S& sigma, const L& l, double t, const ScanOptions& opts) {
  return rd_scan(g, sigma, l, std::vector<double>{t}, opts).front();
}

// ---------------------------------------------------------------------------
// Dichotomy experiments

enum class ModelFamily { paths, binary_trees, cyclic_groups };

inline std::string_view model_name(ModelFamily f) {
  switch (f) {
    case ModelFamily::paths: return "paths";
    case ModelFamily::binary_trees: return "binary_trees";
    case ModelFamily::cyclic_groups: return "cyclic_groups";
  }
  return "?";
}

inline ModelFamily parse_model(std::string_view s) {
  if (s == "paths" || s == "path") return ModelFamily::paths;
  if (s == "binary_trees" || s == "trees" || s == "tree") return ModelFamily::binary_trees;
  if (s == "cyclic_groups" || s == "cyclic") return ModelFamily::cyclic_groups;
  throw Error(Errc::invalid_argument, "unknown model family '" + std::string(s) + "'");
}

struct DichotomyOptions {
  ModelFamily family = ModelFamily::paths;
  std::vector<std::size_t> sizes;  // points for paths, depth for trees, order for cyclic groups
  std::vector<double> ts{1.0};
  ScanOptions scan;
};

struct DichotomyRow {
  std::size_t size;
  double t;
  double growth_exponent;
  double scan_max;
  double witness_bound;  // |F|^{1/2}(1+2R)^{-t} scaled by the measured ||lambda_x(f) xi|| / |F|
  double witness_radius;
  std::size_t witness_size;
};

struct DichotomyClass {
  double t;
  bool bounded;    // last two scan maxima within 10% relative
  bool diverging;  // witness bound strictly increasing over the last three sizes
  std::string label;
};

struct DichotomyReport {
  ModelFamily family;
  std::vector<DichotomyRow> rows;  // size-major
  std::vector<DichotomyClass> classes;
};

/// Heuristic labels from the per-size rows; the thresholds are empirical.
inline std::vector<DichotomyClass> classify(const std::vector<DichotomyRow>& rows,
                                            const std::vector<double>& ts) {
  std::vector<DichotomyClass> out;
  for (double t : ts) {
    std::vector<const DichotomyRow*> r;
    for (const auto& row : rows)
      if (row.t == t) r.push_back(&row);
    DichotomyClass c{t, false, false, "inconclusive"};
    if (r.size() >= 2) {
      const double a = r[r.size() - 2]->scan_max, b = r.back()->scan_max;
      c.bounded = std::abs(a - b) <= 0.1 * std::max(a, b);
    }
    if (r.size() >= 3) {
      const std::size_t m = r.size();
      c.diverging = r[m - 3]->witness_bound < r[m - 2]->witness_bound &&
                    r[m - 2]->witness_bound < r[m - 1]->witness_bound;
    }
    if (c.diverging) c.label = "RD-violating (empirical)";
    else if (c.bounded) c.label = "RD-consistent (empirical)";
    out.push_back(c);
  }
  return out;
}

namespace detail {

/// Witness at x with the largest radius whose ball is range-injective.
template <FiniteGroupoid G, CocycleFn S, ArrowLength L>
Witness<G, S> largest_witness(const G& g, const S& sigma, const L& l, ArrowId x) {
  std::vector<double> radii = radius_grid(g, l, {x}, 0);
  for (auto it = radii.rbegin(); it != radii.rend(); ++it) {
    try {
      return witness_construct(g, sigma, l, x, *it);
    } catch (const Error& e) {
      if (e.code() != Errc::range_not_injective) throw;
    }
  }
  throw Error(Errc::range_not_injective, "no range-injective ball at the unit",
              std::vector<std::size_t>{x});
}

template <FiniteGroupoid G, CocycleFn S, ArrowLength L>
void dichotomy_rows(const G& g, const S& sigma, const L& l, std::size_t size,
                    const DichotomyOptions& opts, std::vector<DichotomyRow>& out) {
  const ArrowId x0 = g.unit(0);
  std::vector<double> radii;
  for (double r : radius_grid(g, l, {x0}, 0))
    if (r > 0) radii.push_back(r);
  if (radii.size() < 2) radii = {1.0, 2.0};
  const double exponent = growth_profile(g, l, radii).exponent;
  const auto scans = rd_scan(g, sigma, l, opts.ts, opts.scan);
  const auto w = largest_witness(g, sigma, l, x0);
  for (std::size_t k = 0; k < opts.ts.size(); ++k)
    out.push_back({size, opts.ts[k], exponent, scans[k].max_ratio, w.ratio_lower_bound(opts.ts[k]),
                   w.radius, w.F.size()});
}

}  // namespace detail

/// Growth exponent, scan maximum and witness bound per (size, t) for a
/// model family, with empirical bounded/diverging labels per t. Paths and
/// trees use the pair groupoid with the graph metric; Z_n uses the word
/// length for the generator 1 (not principal, included as a contrast).
inline DichotomyReport dichotomy_experiment(const DichotomyOptions& opts) {
  require(!opts.sizes.empty(), Errc::empty_family, "dichotomy needs at least one size");
  DichotomyReport rep{opts.family, {}, {}};
  for (std::size_t size : opts.sizes) {
    switch (opts.family) {
      case ModelFamily::paths: {
        require(size >= 2, Errc::invalid_argument, "paths need at least two points");
        const FiniteMetricSpace X = path_space(size);
        const PairGroupoid g(size);
        detail::dichotomy_rows(g, TrivialCocycle{}, PairMetricLength(X), size, opts, rep.rows);
        break;
      }
      case ModelFamily::binary_trees: {
        require(size >= 1 && size <= 20, Errc::invalid_argument, "tree depth must be in 1..20");
        const HeapTreeMetric X(size);
        const PairGroupoid g(X.size());
        detail::dichotomy_rows(g, TrivialCocycle{}, PairMetricLength(X), size, opts, rep.rows);
        break;
      }
      case ModelFamily::cyclic_groups: {
        require(size >= 3, Errc::invalid_argument, "cyclic groups need order at least 3");
        const Groupoid g = group_groupoid(cyclic_group_table(size));
        const LengthFunction l = word_length(g, {1});
        detail::dichotomy_rows(g, TrivialCocycle{}, l, size, opts, rep.rows);
        break;
      }
    }
  }
  rep.classes = classify(rep.rows, opts.ts);
  return rep;
}

}  // namespace rdg
