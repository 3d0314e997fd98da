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

#include <set>

#include "catch_amalgamated.hpp"
#include "oracle/oracle.hpp"
#include "rdg/rdg.hpp"

using namespace rdg;

namespace {

bool same_tables(const Groupoid& a, const Groupoid& b) {
  if (a.arrow_count() != b.arrow_count() || a.unit_count() != b.unit_count()) return false;
  for (ArrowId x = 0; x < a.arrow_count(); ++x) {
    if (a.src(x) != b.src(x) || a.rng(x) != b.rng(x) || a.inv(x) != b.inv(x)) return false;
    for (ArrowId y : a.range_fiber(a.src(x)))
      if (a.product(x, y) != b.product(x, y)) return false;
  }
  return true;
}

// Isotropy by brute force: arrows with src == rng that are not units.
template <class G>
std::size_t nontrivial_isotropy(const G& g) {
  std::size_t k = 0;
  for (ArrowId a = 0; a < g.arrow_count(); ++a) k += g.src(a) == g.rng(a) && !is_unit(g, a);
  return k;
}

template <class G>
bool endpoint_map_injective(const G& g) {
  std::set<std::pair<ArrowId, ArrowId>> seen;
  for (ArrowId a = 0; a < g.arrow_count(); ++a)
    if (!seen.insert({g.src(a), g.rng(a)}).second) return false;
  return true;
}

GroupoidPtr z2() { return share(group_groupoid(cyclic_group_table(2))); }

}  // namespace

TEST_CASE("pair groupoid sizes") {
  Groupoid p3 = pair_groupoid(3);
  CHECK(p3.arrow_count() == 9);
  CHECK(p3.unit_count() == 3);
  Groupoid p1 = pair_groupoid(1);
  CHECK(p1.arrow_count() == 1);
  CHECK(p1.unit_count() == 1);
  CHECK(is_principal(pair_groupoid(4)));
  CHECK(validate(p3).empty());
}

TEST_CASE("implicit pair groupoid agrees with the table") {
  for (std::size_t n : {1u, 2u, 5u, 7u}) {
    Groupoid t = pair_groupoid(n);
    PairGroupoid p(n);
    REQUIRE(p.arrow_count() == t.arrow_count());
    for (ArrowId a = 0; a < t.arrow_count(); ++a) {
      CHECK(p.src(a) == t.src(a));
      CHECK(p.rng(a) == t.rng(a));
      CHECK(p.inv(a) == t.inv(a));
      CHECK(p.unit_index(a) == t.unit_index(a));
      for (ArrowId b : t.range_fiber(t.src(a))) CHECK(p.product(a, b) == t.product(a, b));
    }
    CHECK(check_axioms(p).empty());
  }
}

TEST_CASE("pair groupoid division holds at the size cap") {
  PairGroupoid p(65535);
  const ArrowId last = p.arrow_count() - 1;
  CHECK(p.range_point(last) == 65534);
  CHECK(p.source_point(last) == 65534);
  CHECK(p.range_point(65535) == 1);
  CHECK(p.source_point(65534) == 65534);
  CHECK_THROWS_AS(PairGroupoid(65536), Error);
}

TEST_CASE("group groupoids") {
  Groupoid g2 = group_groupoid(cyclic_group_table(2));
  CHECK(g2.arrow_count() == 2);
  CHECK(g2.unit_count() == 1);
  CHECK_FALSE(is_principal(g2));
  Groupoid g6 = group_groupoid(cyclic_group_table(6));
  CHECK_FALSE(is_principal(g6));
  CHECK(isotropy(g6).groupoid->arrow_count() == 6);
  CHECK(validate(g6).empty());
}

TEST_CASE("malformed group tables are rejected") {
  CayleyTable no_identity{{1, 0}, {0, 1}};
  no_identity[0] = {1, 1};
  try {
    group_groupoid(no_identity);
    FAIL("accepted a table without identity");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_a_group);
  }
  CayleyTable not_assoc{{0, 1, 2}, {1, 0, 0}, {2, 0, 0}};
  CHECK_THROWS_AS(group_groupoid(not_assoc), Error);
}

TEST_CASE("transformation groupoid of the swap action") {
  auto t = transformation_groupoid(z2(), {0, 0}, [](ArrowId g, std::size_t y) { return g == 0 ? y : 1 - y; });
  CHECK(t.groupoid->arrow_count() == 4);
  CHECK(t.groupoid->unit_count() == 2);
  CHECK(nontrivial_isotropy(*t.groupoid) == 0);
  CHECK(is_principal(*t.groupoid));
  CHECK(validate(*t.groupoid).empty());
  CHECK(require_regular(t.projection) == 1);
}

TEST_CASE("trivial action on a point recovers the group") {
  auto G = z2();
  auto t = transformation_groupoid(G, {0}, [](ArrowId, std::size_t y) { return y; });
  CHECK(same_tables(*t.groupoid, *G));
}

TEST_CASE("action axioms are enforced") {
  // Anchors y to the unit but sends it outside the fiber over r(g).
  auto bad = [](ArrowId, std::size_t) { return std::size_t{5}; };
  try {
    transformation_groupoid(z2(), {0, 0}, bad);
    FAIL("accepted a bad action");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_an_action);
  }
  // Units must act trivially.
  auto flip = [](ArrowId, std::size_t y) { return 1 - y; };
  CHECK_THROWS_AS(transformation_groupoid(z2(), {0, 0}, flip), Error);
}

TEST_CASE("product groupoids") {
  Groupoid p = product_groupoid(*z2(), pair_groupoid(2));
  CHECK(p.arrow_count() == 8);
  CHECK(p.unit_count() == 2);
  CHECK(validate(p).empty());
  CHECK(same_tables(product_groupoid(*z2(), pair_groupoid(1)), *z2()));
  Groupoid pp = product_groupoid(pair_groupoid(2), pair_groupoid(3));
  CHECK(nontrivial_isotropy(pp) == 0);
  CHECK(is_principal(pp));
}

TEST_CASE("restriction to unit subsets") {
  Groupoid p4 = pair_groupoid(4);
  CHECK(same_tables(*restrict(p4, {0, 5}).groupoid, pair_groupoid(2)));
  std::vector<ArrowId> all(p4.units().begin(), p4.units().end());
  CHECK(same_tables(*restrict(p4, all).groupoid, p4));
  Subgroupoid one = restrict(pair_groupoid(3), {8});
  CHECK(one.groupoid->arrow_count() == 1);
  CHECK(one.to_parent == std::vector<ArrowId>{8});
}

TEST_CASE("blow-ups and regularity") {
  auto G = z2();
  BlowUp b = blow_up(G, {0, 0});
  CHECK(b.groupoid->arrow_count() == 8);
  CHECK(b.groupoid->unit_count() == 2);
  CHECK(validate(*b.groupoid).empty());
  CHECK(validate(b.projection).empty());
  CHECK(require_regular(b.projection) == 2);

  BlowUp b3 = blow_up(G, {0, 0, 0});
  CHECK(require_regular(b3.projection) == 3);

  auto P2 = share(pair_groupoid(2));
  BlowUp same = blow_up(P2, {0, 3});
  CHECK(same_tables(*same.groupoid, *P2));

  try {
    blow_up(P2, {0, 0});
    FAIL("accepted a non-surjective p");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_surjective);
  }
}

TEST_CASE("covers of uneven multiplicity are not regular") {
  auto P2 = share(pair_groupoid(2));
  BlowUp b = blow_up(P2, {0, 0, 3});  // unit 0 covered twice, unit 3 once
  Regularity r = n_regularity(b.projection);
  CHECK_FALSE(r.regular);
  CHECK_FALSE(r.witness.empty());
}

TEST_CASE("maps that miss units are not regular") {
  auto P2 = share(pair_groupoid(2));
  auto P1 = share(pair_groupoid(1));
  GroupoidHom into{P1, P2, {0}};
  CHECK(validate(into).empty());
  Regularity r = n_regularity(into);
  CHECK_FALSE(r.regular);
  CHECK(r.witness == std::vector<std::size_t>{3});
  CHECK_THROWS_AS(require_regular(into), Error);
}

TEST_CASE("projection of an action groupoid is 1-regular") {
  auto Z3 = share(group_groupoid(cyclic_group_table(3)));
  auto t = transformation_groupoid(Z3, {0, 0, 0}, [](ArrowId g, std::size_t y) { return (g + y) % 3; });
  CHECK(require_regular(t.projection) == 1);
}

TEST_CASE("principal iff the endpoint map is injective") {
  for (const auto& c : oracle::small_suite())
    CHECK(is_principal(*c.g) == endpoint_map_injective(*c.g));
}

TEST_CASE("every constructor output validates") {
  for (const auto& c : oracle::small_suite()) {
    INFO(c.name);
    CHECK(validate(*c.g).empty());
    CHECK(validate(c.g->tables()).empty());
  }
}

TEST_CASE("broken tables report violations") {
  GroupoidTables t = pair_groupoid(2).tables();
  t.arrows[1].inv = 1;
  Violations v = validate(t);
  CHECK_FALSE(v.empty());
  CHECK_THROWS_AS(Groupoid::from_tables(t), Error);

  GroupoidTables u = pair_groupoid(2).tables();
  for (auto& p : u.product)
    if (p[0] == 1 && p[1] == 2) p[2] = 1;
  CHECK_FALSE(validate(u).empty());
}
