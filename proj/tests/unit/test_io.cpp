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

#include <random>

#include "catch_amalgamated.hpp"
#include "oracle/oracle.hpp"
#include "rdg/io.hpp"
#include "rdg/rdg.hpp"

using namespace rdg;
using rdg::io::json;

namespace {

bool same(const Groupoid& a, const Groupoid& b) {
  if (a.arrow_count() != b.arrow_count() || a.unit_count() != b.unit_count()) return false;
  for (ArrowId x = 0; x < a.arrow_count(); ++x) {
    if (a.src(x) != b.src(x) || a.rng(x) != b.rng(x) || a.inv(x) != b.inv(x)) return false;
    for (ArrowId y : a.range_fiber(a.src(x)))
      if (a.product(x, y) != b.product(x, y)) return false;
  }
  return true;
}

template <class F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::invalid_argument;
}

json z2_json() {
  return json::parse(R"({"units":[0],"arrows":[{"id":0,"src":0,"rng":0,"inv":0},{"id":1,"src":0,"rng":0,"inv":1}],
                         "product":[[0,0,0],[0,1,1],[1,0,1],[1,1,0]]})");
}

}  // namespace

TEST_CASE("groupoids round-trip") {
  for (const auto& c : oracle::small_suite()) {
    INFO(c.name);
    const json j = io::to_json(*c.g);
    CHECK(same(io::groupoid_from_json(j), *c.g));
    CHECK(same(io::groupoid_from_json(io::parse(j.dump())), *c.g));
  }
  CHECK(same(io::groupoid_from_json(z2_json()), group_groupoid(cyclic_group_table(2))));
}

TEST_CASE("homomorphisms, lengths, cocycles and functions round-trip") {
  std::mt19937_64 rng(51);
  auto Z2 = share(group_groupoid(cyclic_group_table(2)));
  BlowUp b = blow_up(Z2, {0, 0});
  const GroupoidHom phi = io::hom_from_json(io::to_json(b.projection), b.groupoid, Z2);
  CHECK(phi.map == b.projection.map);

  auto Z6 = share(group_groupoid(cyclic_group_table(6)));
  const LengthFunction l = word_length(*Z6, {1, 2});
  CHECK(io::length_from_json(io::to_json(l), *Z6).values == l.values);

  for (const auto& c : oracle::small_suite()) {
    INFO(c.name);
    const Cocycle sigma = oracle::random_twist(c.g, c.sigma, rng);
    const Cocycle back = io::cocycle_from_json(io::parse(io::to_json(sigma).dump()), c.g);
    for (ArrowId a = 0; a < c.g->arrow_count(); ++a)
      for (ArrowId x : c.g->range_fiber(c.g->src(a))) CHECK(std::abs(back(a, x) - sigma(a, x)) < 1e-15);
    const GFunction f = oracle::random_function(c.g->arrow_count(), rng, 0.5);
    const GFunction g = io::function_from_json(io::parse(io::to_json(f).dump()), f.size());
    for (ArrowId a = 0; a < f.size(); ++a) CHECK(g[a] == f[a]);
  }
}

TEST_CASE("metric spaces round-trip") {
  const json edges = json::parse(R"({"points":[10,20,30],"edges":[[10,20,2],[20,30,3]]})");
  const FiniteMetricSpace X = io::space_from_json(edges);
  CHECK(X.distance(0, 2) == 5.0);
  CHECK(X.labels() == std::vector<std::int64_t>{10, 20, 30});
  const FiniteMetricSpace Y = io::space_from_json(io::parse(io::to_json(X).dump()));
  CHECK(Y.labels() == X.labels());
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < 3; ++k) CHECK(Y.distance(i, k) == X.distance(i, k));
}

TEST_CASE("schema errors") {
  json dangling = z2_json();
  dangling["arrows"][1]["inv"] = 7;
  CHECK(code_of([&] { io::groupoid_from_json(dangling); }) == Errc::schema_error);
  json extra = z2_json();
  extra["colour"] = "red";
  CHECK(code_of([&] { io::groupoid_from_json(extra); }) == Errc::schema_error);
  json missing = z2_json();
  missing.erase("product");
  CHECK(code_of([&] { io::groupoid_from_json(missing); }) == Errc::schema_error);
  json negative = z2_json();
  negative["units"][0] = -1;
  CHECK(code_of([&] { io::groupoid_from_json(negative); }) == Errc::schema_error);

  auto Z2 = share(io::groupoid_from_json(z2_json()));
  CHECK(code_of([&] { io::length_from_json(json::parse(R"({"values":[[0,0]]})"), *Z2); }) == Errc::schema_error);
  CHECK(code_of([&] { io::function_from_json(json::parse(R"({"coeffs":[[5,1,0]]})"), 2); }) == Errc::schema_error);
  CHECK(code_of([&] { io::hom_from_json(json::parse(R"({"map":[[0,0]]})"), Z2, Z2); }) == Errc::schema_error);
  CHECK(code_of([&] { io::space_from_json(json::parse(R"({"points":[1,2],"edges":[[1,3,1]]})")); }) ==
        Errc::schema_error);
  CHECK(code_of([&] { io::parse("{\"units\": [0,"); }) == Errc::parse_error);
}

TEST_CASE("validation errors carry witnesses") {
  auto Z2 = share(io::groupoid_from_json(z2_json()));
  // sigma(0,1) = -1 breaks normalization at the arrow 1.
  try {
    io::cocycle_from_json(json::parse(R"({"entries":[[0,1,-1,0]]})"), Z2);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::validation_error);
    REQUIRE_FALSE(e.violations().empty());
    CHECK(e.violations().front().kind == "NORMALIZATION");
    CHECK(e.violations().front().witness == std::vector<std::size_t>{1});
  }
  try {
    io::cocycle_from_json(json::parse(R"({"entries":[[1,1,2,0]]})"), Z2);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::validation_error);
    CHECK(e.violations().front().kind == "MODULUS");
    CHECK(e.violations().front().witness == std::vector<std::size_t>{1, 1});
  }
  CHECK_NOTHROW(io::cocycle_from_json(json::parse(R"({"entries":[[1,1,-1,0]]})"), Z2));
  // A unit of nonzero length.
  CHECK(code_of([&] { io::length_from_json(json::parse(R"({"values":[[0,1],[1,1]]})"), *Z2); }) ==
        Errc::validation_error);
  CHECK(code_of([&] { io::space_from_json(json::parse(R"({"dist":[[0,1],[2,0]]})")); }) == Errc::validation_error);
}

TEST_CASE("csv and manifest") {
  io::Csv c({"a", "b"});
  c.row({"1", "x;y"});
  CHECK(c.str() == "a,b\n1,x;y\n");
  CHECK_THROWS_AS(c.row({"1", "x,y"}), Error);
  CHECK_THROWS_AS(c.row({"1", "\"q\""}), Error);
  CHECK_THROWS_AS(c.row({"1"}), Error);

  io::Manifest m;
  m.set("b", "2");
  m.set("a", "1");
  m.set("b", "3");
  CHECK(m.str() == "b=3\na=1\n");
  CHECK(io::fmt(0.1) == "0.10000000000000001");
  CHECK(io::hex64(io::fnv1a64("")) == "cbf29ce484222325");
  CHECK(io::hex64(io::fnv1a64("a")) == "af63dc4c8601ec8c");
}
