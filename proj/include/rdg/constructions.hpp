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

// Constructors for explicit groupoids. All of them emit arrows in a
// canonical order so that serialized output is deterministic.

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rdg/groupoid.hpp"
#include "rdg/homomorphism.hpp"

namespace rdg {

namespace detail {

template <class Product>
Groupoid assemble(std::vector<ArrowId> units, const std::vector<ArrowId>& src,
                  const std::vector<ArrowId>& rng, const std::vector<ArrowId>& inv,
                  Product&& product) {
  const std::size_t n = src.size();
  GroupoidTables t;
  t.units = std::move(units);
  t.arrows.reserve(n);
  for (ArrowId a = 0; a < n; ++a) t.arrows.push_back({a, src[a], rng[a], inv[a]});
  std::vector<std::vector<ArrowId>> by_range(n);
  for (ArrowId b = 0; b < n; ++b) by_range[rng[b]].push_back(b);
  for (ArrowId a = 0; a < n; ++a)
    for (ArrowId b : by_range[src[a]]) t.product.push_back({a, b, product(a, b)});
  return Groupoid::unchecked(t);
}

}  // namespace detail

/// Pair groupoid on n points as an explicit table; same arrow numbering as
/// PairGroupoid: (y,x) -> y*n + x.
inline Groupoid pair_groupoid(std::size_t n) {
  require(n >= 1, Errc::invalid_argument, "pair_groupoid needs n >= 1");
  const std::size_t m = n * n;
  std::vector<ArrowId> units, src(m), rng(m), inv(m);
  for (std::size_t x = 0; x < n; ++x) units.push_back(x * n + x);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x) {
      ArrowId a = y * n + x;
      src[a] = x * n + x;
      rng[a] = y * n + y;
      inv[a] = x * n + y;
    }
  return detail::assemble(std::move(units), src, rng, inv,
                          [n](ArrowId a, ArrowId b) { return (a / n) * n + b % n; });
}

using CayleyTable = std::vector<std::vector<std::size_t>>;

inline CayleyTable cyclic_group_table(std::size_t n) {
  require(n >= 1, Errc::invalid_argument, "cyclic group needs n >= 1");
  CayleyTable t(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return t;
}

/// Direct product A x B; element (a,b) gets index a*|B| + b.
inline CayleyTable direct_product_table(const CayleyTable& a, const CayleyTable& b) {
  const std::size_t na = a.size(), nb = b.size();
  CayleyTable t(na * nb, std::vector<std::size_t>(na * nb));
  for (std::size_t a1 = 0; a1 < na; ++a1)
    for (std::size_t b1 = 0; b1 < nb; ++b1)
      for (std::size_t a2 = 0; a2 < na; ++a2)
        for (std::size_t b2 = 0; b2 < nb; ++b2)
          t[a1 * nb + b1][a2 * nb + b2] = a[a1][a2] * nb + b[b1][b2];
  return t;
}

/// One-unit groupoid of a finite group given by its multiplication table.
/// Arrow ids are element indices; the unit is the identity element.
inline Groupoid group_groupoid(const CayleyTable& cayley) {
  const std::size_t n = cayley.size();
  require(n >= 1, Errc::not_a_group, "empty table");
  for (std::size_t a = 0; a < n; ++a) {
    require(cayley[a].size() == n, Errc::not_a_group, "table is not square", {a});
    for (std::size_t b = 0; b < n; ++b)
      require(cayley[a][b] < n, Errc::not_a_group, "entry out of range", {a, b});
  }
  std::size_t e = npos;
  for (std::size_t c = 0; c < n && e == npos; ++c) {
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a) ok = cayley[c][a] == a && cayley[a][c] == a;
    if (ok) e = c;
  }
  require(e != npos, Errc::not_a_group, "no identity element");
  std::vector<ArrowId> inv(n, npos);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b)
      if (cayley[a][b] == e && cayley[b][a] == e) {
        inv[a] = b;
        break;
      }
    require(inv[a] != npos, Errc::not_a_group, "element without inverse", {a});
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        require(cayley[cayley[a][b]][c] == cayley[a][cayley[b][c]], Errc::not_a_group,
                "associativity fails", {a, b, c});
  std::vector<ArrowId> src(n, e), rng(n, e);
  return detail::assemble({e}, src, rng, inv, [&](ArrowId a, ArrowId b) { return cayley[a][b]; });
}

/// Left action of G on the set {0..m-1}: anchor p(y) is a unit of G, and
/// act(g, y) is defined whenever src(g) = p(y).
using Action = std::function<std::size_t(ArrowId, std::size_t)>;

struct TransformationGroupoid {
  GroupoidPtr groupoid;
  GroupoidHom projection;  // (g,y) -> g, always 1-regular
  std::vector<std::pair<ArrowId, std::size_t>> pairs;  // arrow id -> (g,y)
};

/// G |x Y with arrows {(g,y) : src(g) = p(y)}, ordered by g then y;
/// s(g,y) = (p(y),y), r(g,y) = (r(g), g.y), (h, g.y)(g,y) = (hg, y).
inline TransformationGroupoid transformation_groupoid(const GroupoidPtr& G,
                                                      const std::vector<ArrowId>& anchor,
                                                      const Action& act) {
  const std::size_t m = anchor.size();
  for (std::size_t y = 0; y < m; ++y)
    require(anchor[y] < G->arrow_count() && is_unit(*G, anchor[y]), Errc::not_an_action,
            "anchor must map into the unit space", {y});
  // Action axioms.
  std::vector<std::vector<std::size_t>> over(G->unit_count());
  for (std::size_t y = 0; y < m; ++y) over[G->unit_index(anchor[y])].push_back(y);
  auto points_over = [&](ArrowId x) -> const std::vector<std::size_t>& {
    return over[G->unit_index(x)];
  };
  std::vector<std::vector<std::size_t>> image(G->arrow_count());
  for (ArrowId g = 0; g < G->arrow_count(); ++g) {
    for (std::size_t y : points_over(G->src(g))) {
      std::size_t gy = act(g, y);
      require(gy < m, Errc::not_an_action, "action leaves the space", {g, y});
      require(anchor[gy] == G->rng(g), Errc::not_an_action, "p(g.y) != r(g)", {g, y});
      if (is_unit(*G, g)) require(gy == y, Errc::not_an_action, "p(y).y != y", {g, y});
      image[g].push_back(gy);
    }
  }
  for (ArrowId h = 0; h < G->arrow_count(); ++h)
    for (ArrowId g : G->range_fiber(G->src(h)))
      for (std::size_t y : points_over(G->src(g)))
        require(act(G->product(h, g), y) == act(h, act(g, y)), Errc::not_an_action,
                "(hg).y != h.(g.y)", {h, g, y});

  TransformationGroupoid out;
  std::map<std::pair<ArrowId, std::size_t>, ArrowId> id;
  for (ArrowId g = 0; g < G->arrow_count(); ++g)
    for (std::size_t y : points_over(G->src(g))) {
      id[{g, y}] = out.pairs.size();
      out.pairs.emplace_back(g, y);
    }
  const std::size_t n = out.pairs.size();
  std::vector<ArrowId> units, src(n), rng(n), inv(n), proj(n);
  for (std::size_t y = 0; y < m; ++y) units.push_back(id.at({anchor[y], y}));
  for (ArrowId a = 0; a < n; ++a) {
    auto [g, y] = out.pairs[a];
    std::size_t gy = act(g, y);
    src[a] = id.at({anchor[y], y});
    rng[a] = id.at({G->rng(g), gy});
    inv[a] = id.at({G->inv(g), gy});
    proj[a] = g;
  }
  Groupoid T = detail::assemble(std::move(units), src, rng, inv, [&](ArrowId a, ArrowId b) {
    return id.at({G->product(out.pairs[a].first, out.pairs[b].first), out.pairs[b].second});
  });
  out.groupoid = share(std::move(T));
  out.projection = {out.groupoid, G, std::move(proj)};
  return out;
}

/// G x H with componentwise structure; (a,h) gets id a*|H| + h.
inline Groupoid product_groupoid(const Groupoid& G, const Groupoid& H) {
  const std::size_t nh = H.arrow_count(), n = G.arrow_count() * nh;
  std::vector<ArrowId> units, src(n), rng(n), inv(n);
  for (ArrowId x : G.units())
    for (ArrowId y : H.units()) units.push_back(x * nh + y);
  for (ArrowId a = 0; a < G.arrow_count(); ++a)
    for (ArrowId h = 0; h < nh; ++h) {
      ArrowId p = a * nh + h;
      src[p] = G.src(a) * nh + H.src(h);
      rng[p] = G.rng(a) * nh + H.rng(h);
      inv[p] = G.inv(a) * nh + H.inv(h);
    }
  return detail::assemble(std::move(units), src, rng, inv, [&](ArrowId p, ArrowId q) {
    return G.product(p / nh, q / nh) * nh + H.product(p % nh, q % nh);
  });
}

/// Projection G x H -> G onto the first factor.
inline GroupoidHom first_projection(const GroupoidPtr& product, const GroupoidPtr& G,
                                    const Groupoid& H) {
  const std::size_t nh = H.arrow_count();
  std::vector<ArrowId> m(product->arrow_count());
  for (ArrowId p = 0; p < m.size(); ++p) m[p] = p / nh;
  return {product, G, std::move(m)};
}

/// A subgroupoid together with its embedding into the parent.
struct Subgroupoid {
  GroupoidPtr groupoid;
  std::vector<ArrowId> to_parent;  // sub id -> parent id
};

/// The subgroupoid on an arrow subset that contains the units of its
/// arrows and is closed under product and inverse. Arrows keep their
/// relative order. Throws VALIDATION_ERROR if the subset is not closed.
inline Subgroupoid induced_subgroupoid(const Groupoid& G, std::vector<ArrowId> arrows) {
  std::sort(arrows.begin(), arrows.end());
  arrows.erase(std::unique(arrows.begin(), arrows.end()), arrows.end());
  std::vector<ArrowId> local(G.arrow_count(), npos);
  for (std::size_t i = 0; i < arrows.size(); ++i) local[arrows[i]] = i;
  Violations vs;
  for (ArrowId a : arrows) {
    if (local[G.src(a)] == npos || local[G.rng(a)] == npos) vs.push_back({"UNIT_MISSING", {a}, {}});
    if (local[G.inv(a)] == npos) vs.push_back({"NOT_CLOSED_INVERSE", {a}, {}});
  }
  if (vs.empty())
    for (ArrowId a : arrows)
      for (ArrowId b : G.range_fiber(G.src(a)))
        if (local[b] != npos && local[G.product(a, b)] == npos)
          vs.push_back({"NOT_CLOSED_PRODUCT", {a, b}, {}});
  if (!vs.empty()) throw Error(Errc::validation_error, "arrow subset is not a subgroupoid", vs);

  const std::size_t n = arrows.size();
  std::vector<ArrowId> units, src(n), rng(n), inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    ArrowId a = arrows[i];
    if (is_unit(G, a)) units.push_back(i);
    src[i] = local[G.src(a)];
    rng[i] = local[G.rng(a)];
    inv[i] = local[G.inv(a)];
  }
  Groupoid sub = detail::assemble(std::move(units), src, rng, inv, [&](ArrowId a, ArrowId b) {
    return local[G.product(arrows[a], arrows[b])];
  });
  return {share(std::move(sub)), std::move(arrows)};
}

/// G restricted to a set of units: arrows with source and range in U.
inline Subgroupoid restrict(const Groupoid& G, const std::vector<ArrowId>& U) {
  std::vector<char> in(G.arrow_count(), 0);
  for (ArrowId u : U) {
    require(u < G.arrow_count() && is_unit(G, u), Errc::not_a_unit, "restrict needs units", {u});
    in[u] = 1;
  }
  std::vector<ArrowId> arrows;
  for (ArrowId a = 0; a < G.arrow_count(); ++a)
    if (in[G.src(a)] && in[G.rng(a)]) arrows.push_back(a);
  return induced_subgroupoid(G, std::move(arrows));
}

/// Iso(G): arrows with src = rng.
inline Subgroupoid isotropy(const Groupoid& G) {
  std::vector<ArrowId> arrows;
  for (ArrowId a = 0; a < G.arrow_count(); ++a)
    if (G.src(a) == G.rng(a)) arrows.push_back(a);
  return induced_subgroupoid(G, std::move(arrows));
}

struct BlowUp {
  GroupoidPtr groupoid;
  GroupoidHom projection;  // (w,g,y) -> g
  std::vector<std::array<std::size_t, 3>> triples;  // arrow id -> (w, g, y)
};

/// Blow-up G[p] over a surjection p: Y -> G^(0), with Y = {0..m-1}.
/// Arrows (w,g,y) with p(w) = r(g), p(y) = s(g), ordered by g, w, y.
/// (w,g,y)(y,h,z) = (w,gh,z); units (y, p(y), y).
inline BlowUp blow_up(const GroupoidPtr& G, const std::vector<ArrowId>& p) {
  const std::size_t m = p.size();
  std::vector<std::vector<std::size_t>> over(G->unit_count());
  for (std::size_t y = 0; y < m; ++y) {
    require(p[y] < G->arrow_count() && is_unit(*G, p[y]), Errc::not_surjective,
            "p must map into the unit space", {y});
    over[G->unit_index(p[y])].push_back(y);
  }
  for (std::size_t i = 0; i < G->unit_count(); ++i)
    require(!over[i].empty(), Errc::not_surjective, "unit not in the image of p", {G->unit(i)});

  BlowUp out;
  std::map<std::array<std::size_t, 3>, ArrowId> id;
  for (ArrowId g = 0; g < G->arrow_count(); ++g)
    for (std::size_t w : over[G->unit_index(G->rng(g))])
      for (std::size_t y : over[G->unit_index(G->src(g))]) {
        id[{w, g, y}] = out.triples.size();
        out.triples.push_back({w, g, y});
      }
  const std::size_t n = out.triples.size();
  std::vector<ArrowId> units, src(n), rng(n), inv(n), proj(n);
  for (std::size_t y = 0; y < m; ++y) units.push_back(id.at({y, p[y], y}));
  for (ArrowId a = 0; a < n; ++a) {
    auto [w, g, y] = out.triples[a];
    src[a] = id.at({y, p[y], y});
    rng[a] = id.at({w, p[w], w});
    inv[a] = id.at({y, G->inv(g), w});
    proj[a] = g;
  }
  Groupoid B = detail::assemble(std::move(units), src, rng, inv, [&](ArrowId a, ArrowId b) {
    const auto& s = out.triples[a];
    const auto& t = out.triples[b];
    return id.at({s[0], G->product(s[1], t[1]), t[2]});
  });
  out.groupoid = share(std::move(B));
  out.projection = {out.groupoid, G, std::move(proj)};
  return out;
}

}  // namespace rdg
