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

#include <string>
#include <utility>
#include <vector>

#include "rdg/groupoid.hpp"

namespace rdg {

/// A total map of arrows compatible with source, range, product and inverse.
struct GroupoidHom {
  GroupoidPtr dom;
  GroupoidPtr cod;
  std::vector<ArrowId> map;

  ArrowId operator()(ArrowId a) const { return map[a]; }
};

inline Violations validate(const GroupoidHom& h, std::size_t max_violations = 64) {
  Violations out;
  auto add = [&](std::string kind, std::vector<std::size_t> w) {
    if (out.size() < max_violations) out.push_back({std::move(kind), std::move(w), {}});
  };
  const Groupoid& H = *h.dom;
  const Groupoid& G = *h.cod;
  if (h.map.size() != H.arrow_count()) {
    add("NOT_TOTAL", {h.map.size(), H.arrow_count()});
    return out;
  }
  for (ArrowId a = 0; a < H.arrow_count(); ++a)
    if (h.map[a] >= G.arrow_count()) add("DANGLING_IMAGE", {a, h.map[a]});
  if (!out.empty()) return out;
  for (ArrowId a = 0; a < H.arrow_count(); ++a) {
    ArrowId fa = h.map[a];
    if (G.src(fa) != h.map[H.src(a)]) add("SOURCE", {a});
    if (G.rng(fa) != h.map[H.rng(a)]) add("RANGE", {a});
    if (G.inv(fa) != h.map[H.inv(a)]) add("INVERSE", {a});
  }
  if (!out.empty()) return out;
  for (ArrowId a = 0; a < H.arrow_count(); ++a)
    for (ArrowId b : H.range_fiber(H.src(a)))
      if (G.product(h.map[a], h.map[b]) != h.map[H.product(a, b)]) add("PRODUCT", {a, b});
  return out;
}

inline GroupoidHom identity_hom(const GroupoidPtr& g) {
  std::vector<ArrowId> m(g->arrow_count());
  for (ArrowId a = 0; a < m.size(); ++a) m[a] = a;
  return {g, g, std::move(m)};
}

/// Result of the n-regularity test. When `regular` is false, `reason` and
/// `witness` describe the first failure found.
struct Regularity {
  bool regular = false;
  std::size_t n = 0;
  std::string reason;
  std::vector<std::size_t> witness;
};

/// phi is n-regular if it maps units of H onto units of G and every fiber
/// count |phi^{-1}(g) cap H_y| over g in G_{phi(y)} equals n.
inline Regularity n_regularity(const GroupoidHom& phi) {
  const Groupoid& H = *phi.dom;
  const Groupoid& G = *phi.cod;
  Regularity r;
  std::vector<char> hit(G.unit_count(), 0);
  for (ArrowId y : H.units()) {
    ArrowId x = phi(y);
    if (!is_unit(G, x)) {
      r.reason = "unit maps to a non-unit";
      r.witness = {y, x};
      return r;
    }
    hit[G.unit_index(x)] = 1;
  }
  for (std::size_t i = 0; i < G.unit_count(); ++i) {
    if (!hit[i]) {
      r.reason = "not surjective on units";
      r.witness = {G.unit(i)};
      return r;
    }
  }
  std::size_t n = npos;
  std::vector<std::size_t> count;
  for (ArrowId y : H.units()) {
    ArrowId x = phi(y);
    auto gx = G.source_fiber(x);
    count.assign(gx.size(), 0);
    for (ArrowId eta : H.source_fiber(y)) ++count[G.source_position(phi(eta))];
    for (std::size_t k = 0; k < gx.size(); ++k) {
      if (n == npos) n = count[k];
      if (count[k] != n || n == 0) {
        r.reason = "fiber count " + std::to_string(count[k]) + " differs from " + std::to_string(n);
        r.witness = {y, gx[k]};
        return r;
      }
    }
  }
  r.regular = true;
  r.n = n;
  return r;
}

/// Returns n or throws NOT_REGULAR.
inline std::size_t require_regular(const GroupoidHom& phi) {
  Regularity r = n_regularity(phi);
  if (!r.regular) throw Error(Errc::not_regular, r.reason, r.witness);
  return r.n;
}

}  // namespace rdg
