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

// Checks for the permanence results: restriction to subgroupoids, products
// with finite groupoids, and transfer along n-regular homomorphisms. Each
// check reports both sides of every inequality or identity.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "rdg/constructions.hpp"
#include "rdg/function.hpp"
#include "rdg/homomorphism.hpp"
#include "rdg/length.hpp"
#include "rdg/norms.hpp"

namespace rdg {

enum class Relation { less_equal, equal };

struct CheckRow {
  std::string check;
  double lhs;
  double rhs;
  bool pass;
  double tol;
};

struct PermanenceReport {
  std::string name;
  std::string digest;  // filled by the caller that knows the inputs
  std::vector<CheckRow> rows;

  bool pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
  }
};

/// Identities are exact up to rounding in the matrix products.
inline constexpr double kIdentityTolerance = 1e-12;
/// Inequalities between independently computed spectral norms.
inline constexpr double kNormTolerance = 1e-9;

/// Relative tolerances for the two kinds of row.
struct CheckTolerances {
  double identity = kIdentityTolerance;
  double norm = kNormTolerance;
};

/// Tolerances are relative to max(1, |lhs|, |rhs|); the recorded tol is the
/// absolute slack actually allowed.
inline CheckRow compare(std::string name, double lhs, double rhs, Relation rel, double rel_tol) {
  const double tol = rel_tol * std::max({1.0, std::abs(lhs), std::abs(rhs)});
  const bool pass = rel == Relation::equal ? std::abs(lhs - rhs) <= tol : lhs <= rhs + tol;
  return {std::move(name), lhs, rhs, pass, tol};
}

inline std::string with_t(const char* name, double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s[t=%.17g]", name, t);
  return buf;
}

// ---------------------------------------------------------------------------
// Subgroupoids

/// f lives on H and must vanish off restrict(H, U) (else SUPPORT_LEAK).
/// Checks ||f|_G||_G <= ||f||_H and equality of symmetric seminorms.
template <CocycleFn S, ArrowLength L>
PermanenceReport check_subgroupoid(const Groupoid& H, const S& sigma, const std::vector<ArrowId>& U,
                                   const GFunction& f, const L& l, const std::vector<double>& ts,
                                   const NormOptions& opts = {}, const CheckTolerances& tol = {}) {
  require_same_groupoid(H, f);
  const Subgroupoid sub = restrict(H, U);
  const Groupoid& G = *sub.groupoid;
  std::vector<char> inside(H.arrow_count(), 0);
  for (ArrowId a : sub.to_parent) inside[a] = 1;
  std::vector<std::size_t> leak;
  for (ArrowId a = 0; a < H.arrow_count(); ++a)
    if (!inside[a] && f[a] != Complex{}) leak.push_back(a);
  if (!leak.empty())
    throw Error(Errc::support_leak, "function is not supported on the subgroupoid", leak);

  GFunction fg(G.arrow_count());
  LengthFunction lg;
  for (ArrowId a = 0; a < G.arrow_count(); ++a) {
    fg[a] = f[sub.to_parent[a]];
    lg.values.push_back(l(sub.to_parent[a]));
  }
  auto sigma_g = [&](ArrowId a, ArrowId b) { return Complex(sigma(sub.to_parent[a], sub.to_parent[b])); };

  PermanenceReport rep{"subgroupoid", {}, {}};
  rep.rows.push_back(compare("norm_inclusion", reduced_norm(G, fg, sigma_g, opts).value,
                             reduced_norm(H, f, sigma, opts).value, Relation::less_equal, tol.norm));
  const auto sg = symmetric_seminorms(G, fg, lg, ts);
  const auto sh = symmetric_seminorms(H, f, l, ts);
  for (std::size_t k = 0; k < ts.size(); ++k)
    rep.rows.push_back(compare(with_t("seminorm_equality", ts[k]), sg[k], sh[k], Relation::equal,
                               tol.identity));
  return rep;
}

// ---------------------------------------------------------------------------
// Products with a finite groupoid

/// Partition of the arrows into bisections (source and range injective on
/// each class). Arrows are edges src -> rng of a bipartite multigraph and a
/// bisection is a matching, so an edge colouring by alternating-path swaps
/// reaches the lower bound: the largest fiber size. Classes list arrows in
/// increasing order.
inline std::vector<std::vector<ArrowId>> bisection_cover(const Groupoid& H) {
  const std::size_t units = H.unit_count(), colours = max_fiber_size(H);
  // at_src[u][c], at_rng[v][c]: the arrow of colour c at that unit, or npos.
  std::vector<std::vector<ArrowId>> at_src(units, std::vector<ArrowId>(colours, npos)), at_rng = at_src;
  std::vector<std::size_t> colour(H.arrow_count(), npos);
  auto free_at = [&](const std::vector<ArrowId>& slots) {
    return static_cast<std::size_t>(std::find(slots.begin(), slots.end(), npos) - slots.begin());
  };
  for (ArrowId e = 0; e < H.arrow_count(); ++e) {
    const std::size_t u = H.unit_index(H.src(e)), v = H.unit_index(H.rng(e));
    const std::size_t a = free_at(at_src[u]), b = free_at(at_rng[v]);
    if (at_rng[v][a] != npos) {
      // Swap a and b along the path leaving v by colour a; it cannot reach u.
      std::vector<ArrowId> path;
      std::size_t c = a;
      for (ArrowId p = at_rng[v][a]; p != npos;) {
        path.push_back(p);
        c = c == a ? b : a;
        p = c == b ? at_src[H.unit_index(H.src(p))][b] : at_rng[H.unit_index(H.rng(p))][a];
      }
      for (ArrowId p : path) {
        at_src[H.unit_index(H.src(p))][colour[p]] = npos;
        at_rng[H.unit_index(H.rng(p))][colour[p]] = npos;
      }
      for (ArrowId p : path) {
        colour[p] = colour[p] == a ? b : a;
        at_src[H.unit_index(H.src(p))][colour[p]] = p;
        at_rng[H.unit_index(H.rng(p))][colour[p]] = p;
      }
    }
    colour[e] = a;
    at_src[u][a] = at_rng[v][a] = e;
  }
  std::vector<std::vector<ArrowId>> classes(colours);
  for (ArrowId e = 0; e < H.arrow_count(); ++e) classes[colour[e]].push_back(e);
  return classes;
}

struct ProductInputs {
  GroupoidPtr G;
  GroupoidPtr H;
  double C;
  double t;
};

/// f on G x H (id a*|H| + h), twisted by sigma pulled back from G and with
/// length l(g, h) = l(g). With n the bisection cover size, checks
///  - f = sum_k f^(k), f^(k) = f (1 x 1_{B_k});
///  - ||f^(k)|| = max_{h in B_k} ||f(., h)||_G (a bisection slice acts as a
///    direct sum of G-operators);
///  - sum over (eta, k) in Z of ||xi(., eta)||^2 <= n ||xi||^2 for sampled xi;
///  - ||f|| <= n C ||f||_{l,t}.
/// Throws BAD_CONSTANTS if C <= 0, t < 0, or some slice violates
/// ||f_h||_G <= C ||f_h||_{l,t}, since then (C, t) does not hold on G.
template <CocycleFn S, ArrowLength L>
PermanenceReport check_product(const ProductInputs& in, const S& sigma, const L& l, const GFunction& f,
                               std::size_t samples = 8, std::uint64_t seed = 1,
                               const NormOptions& opts = {}, const CheckTolerances& tol = {}) {
  require(in.C > 0.0 && std::isfinite(in.C), Errc::bad_constants, "C must be positive");
  require(in.t >= 0.0 && std::isfinite(in.t), Errc::bad_constants, "t must be nonnegative");
  const Groupoid& G = *in.G;
  const Groupoid& H = *in.H;
  const GroupoidPtr P = share(product_groupoid(G, H));
  require_same_groupoid(*P, f);
  const std::size_t nh = H.arrow_count();
  auto sigma_p = [&](ArrowId p, ArrowId q) { return Complex(sigma(p / nh, q / nh)); };
  auto l_p = LengthFunction{};
  for (ArrowId p = 0; p < P->arrow_count(); ++p) l_p.values.push_back(l(p / nh));

  const auto cover = bisection_cover(H);
  const double n = static_cast<double>(cover.size());
  PermanenceReport rep{"product", {}, {}};
  rep.rows.push_back({"cover_size", n, n, true, 0.0});

  GFunction sum(P->arrow_count());
  for (std::size_t k = 0; k < cover.size(); ++k) {
    GFunction fk(P->arrow_count());
    double slice_max = 0.0;
    for (ArrowId h : cover[k]) {
      GFunction fh(G.arrow_count());
      for (ArrowId a = 0; a < G.arrow_count(); ++a) fh[a] = fk[a * nh + h] = f[a * nh + h];
      if (fh.is_zero()) continue;
      const double nrm = reduced_norm(G, fh, sigma, opts).value;
      const double semi = weighted_seminorm(G, fh, l, in.t, Symmetric{});
      if (nrm > in.C * semi * (1 + tol.norm))
        throw Error(Errc::bad_constants, "C does not dominate a slice on G", std::vector<std::size_t>{k, h});
      slice_max = std::max(slice_max, nrm);
    }
    for (ArrowId p = 0; p < sum.size(); ++p) sum[p] += fk[p];
    rep.rows.push_back(compare("slice_norm[k=" + std::to_string(k) + "]",
                               reduced_norm(*P, fk, sigma_p, opts).value, slice_max, Relation::equal,
                               tol.norm));
  }
  double dev = 0.0;
  for (ArrowId p = 0; p < sum.size(); ++p) dev = std::max(dev, std::abs(sum[p] - f[p]));
  rep.rows.push_back(compare("decomposition_residual", dev, 0.0, Relation::equal, tol.identity));

  // Z = {(eta, k) : eta in H_y, B_k meets H_{r(eta)}} for the unit (x, y).
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (std::size_t s = 0; s < samples; ++s) {
    const ArrowId x = G.unit(rng() % G.unit_count());
    const ArrowId y = H.unit(rng() % H.unit_count());
    const auto gx = G.source_fiber(x);
    double total = 0.0, zsum = 0.0;
    for (ArrowId eta : H.source_fiber(y)) {
      double slice = 0.0;
      for (std::size_t i = 0; i < gx.size(); ++i) {
        const double re = normal(rng), im = normal(rng);
        slice += re * re + im * im;
      }
      total += slice;
      std::size_t hits = 0;
      for (const auto& B : cover)
        hits += std::any_of(B.begin(), B.end(), [&](ArrowId b) { return H.src(b) == H.rng(eta); });
      zsum += static_cast<double>(hits) * slice;
    }
    rep.rows.push_back(compare("slice_energy[sample=" + std::to_string(s) + "]", zsum, n * total,
                               Relation::less_equal, tol.identity));
  }

  rep.rows.push_back(compare("product_rd", reduced_norm(*P, f, sigma_p, opts).value,
                             n * in.C * weighted_seminorm(*P, f, l_p, in.t, Symmetric{}),
                             Relation::less_equal, tol.norm));
  return rep;
}

// ---------------------------------------------------------------------------
// n-regular homomorphisms

/// (phi^ f)(eta) = f(phi(eta)). Throws NOT_REGULAR.
inline GFunction lift_function(const GroupoidHom& phi, const GFunction& f) {
  require_regular(phi);
  require_same_groupoid(*phi.cod, f);
  GFunction out(phi.dom->arrow_count());
  for (ArrowId a = 0; a < out.size(); ++a) out[a] = f[phi(a)];
  return out;
}

/// (phi^_y xi)(eta) = xi(phi(eta)) for eta in H_y; xi is indexed by source
/// position in G_{phi(y)}. Throws NOT_REGULAR.
inline Eigen::VectorXcd lift_vector(const GroupoidHom& phi, ArrowId y, const Eigen::VectorXcd& xi) {
  require_regular(phi);
  const Groupoid& H = *phi.dom;
  const Groupoid& G = *phi.cod;
  require_unit(H, y);
  require(static_cast<std::size_t>(xi.size()) == G.source_fiber(phi(y)).size(), Errc::invalid_argument,
          "vector length does not match the fiber");
  const auto hy = H.source_fiber(y);
  Eigen::VectorXcd out(static_cast<Eigen::Index>(hy.size()));
  for (std::size_t i = 0; i < hy.size(); ++i) out(i) = xi(G.source_position(phi(hy[i])));
  return out;
}

/// The |H_y| x |G_x| matrix of phi^_y.
inline Eigen::MatrixXcd lift_matrix(const GroupoidHom& phi, ArrowId y) {
  const Groupoid& H = *phi.dom;
  const Groupoid& G = *phi.cod;
  const auto hy = H.source_fiber(y);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(hy.size(), G.source_fiber(phi(y)).size());
  for (std::size_t i = 0; i < hy.size(); ++i) m(i, G.source_position(phi(hy[i]))) = 1.0;
  return m;
}

template <CocycleFn S>
auto pulled_back(const GroupoidHom& phi, const S& sigma) {
  return [&phi, &sigma](ArrowId a, ArrowId b) { return Complex(sigma(phi(a), phi(b))); };
}

/// The three lemma identities at the unit y of H:
///  (i)   ||phi^_y xi||^2 = n ||xi||^2 (for the given xi),
///  (ii)  ||phi^ f||_{phi*l,t} = n^{1/2} ||f||_{l,t} (symmetric seminorms),
///  (iii) lambda_y(phi^ f) phi^_y = n phi^_y lambda_{phi(y)}(f), reported as
///        the largest entry of the difference against 0.
template <CocycleFn S, ArrowLength L>
PermanenceReport check_lemma(const GroupoidHom& phi, const S& sigma, const L& l, const GFunction& f,
                             ArrowId y, const Eigen::VectorXcd& xi, const std::vector<double>& ts,
                             const CheckTolerances& tol = {}) {
  const double n = static_cast<double>(require_regular(phi));
  const Groupoid& H = *phi.dom;
  const Groupoid& G = *phi.cod;
  require_unit(H, y);
  PermanenceReport rep{"pullback", {}, {}};

  const Eigen::VectorXcd lifted = lift_vector(phi, y, xi);
  rep.rows.push_back(compare("vector_lift", lifted.squaredNorm(), n * xi.squaredNorm(), Relation::equal,
                             tol.identity));

  const GFunction hf = lift_function(phi, f);
  LengthFunction hl;
  for (ArrowId a = 0; a < H.arrow_count(); ++a) hl.values.push_back(l(phi(a)));
  const auto sh = symmetric_seminorms(H, hf, hl, ts);
  const auto sg = symmetric_seminorms(G, f, l, ts);
  for (std::size_t k = 0; k < ts.size(); ++k)
    rep.rows.push_back(compare(with_t("seminorm_lift", ts[k]), sh[k], std::sqrt(n) * sg[k],
                               Relation::equal, tol.identity));

  const Eigen::MatrixXcd Phi = lift_matrix(phi, y);
  const Eigen::MatrixXcd LH = rep_matrix(H, hf, y, pulled_back(phi, sigma)).matrix;
  const Eigen::MatrixXcd LG = rep_matrix(G, f, phi(y), sigma).matrix;
  const Eigen::MatrixXcd left = LH * Phi, right = n * Phi * LG;
  const double scale = std::max({1.0, left.cwiseAbs().maxCoeff(), right.cwiseAbs().maxCoeff()});
  const double resid = (left - right).cwiseAbs().maxCoeff();
  rep.rows.push_back({"intertwining_residual", resid, 0.0, resid <= tol.identity * scale,
                      tol.identity * scale});
  return rep;
}

/// ||f||_G <= n^-1 ||phi^ f||_H, and with (C, t) valid for phi^ f on H,
/// ||f||_G <= C n^{-1/2} ||f||_{l,t}. Throws BAD_CONSTANTS when C <= 0,
/// t < 0 or ||phi^ f||_H > C ||phi^ f||_{phi*l,t}.
template <CocycleFn S, ArrowLength L>
PermanenceReport check_rd_transfer(const GroupoidHom& phi, const S& sigma, const L& l, const GFunction& f,
                                   double C, double t, const NormOptions& opts = {},
                                   const CheckTolerances& tol = {}) {
  require(C > 0.0 && std::isfinite(C), Errc::bad_constants, "C must be positive");
  require(t >= 0.0 && std::isfinite(t), Errc::bad_constants, "t must be nonnegative");
  const double n = static_cast<double>(require_regular(phi));
  const Groupoid& H = *phi.dom;
  const Groupoid& G = *phi.cod;
  const GFunction hf = lift_function(phi, f);
  LengthFunction hl;
  for (ArrowId a = 0; a < H.arrow_count(); ++a) hl.values.push_back(l(phi(a)));

  const double norm_g = reduced_norm(G, f, sigma, opts).value;
  const double norm_h = reduced_norm(H, hf, pulled_back(phi, sigma), opts).value;
  const double semi_h = weighted_seminorm(H, hf, hl, t, Symmetric{});
  if (norm_h > C * semi_h * (1 + tol.norm))
    throw Error(Errc::bad_constants, "C does not dominate the lifted function on H");

  PermanenceReport rep{"transfer", {}, {}};
  rep.rows.push_back(compare("premise_on_H", norm_h, C * semi_h, Relation::less_equal, tol.norm));
  rep.rows.push_back(compare("norm_transfer", norm_g, norm_h / n, Relation::less_equal, tol.norm));
  rep.rows.push_back(compare("rd_transfer", norm_g, C / std::sqrt(n) * weighted_seminorm(G, f, l, t, Symmetric{}),
                             Relation::less_equal, tol.norm));
  return rep;
}

}  // namespace rdg
