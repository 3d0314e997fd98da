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

#include <cmath>

#include "catch_amalgamated.hpp"
#include "oracle/oracle.hpp"
#include "rdg/rdg.hpp"

using namespace rdg;
using Catch::Matchers::WithinAbs;

namespace {

bool has_kind(const Violations& vs, const std::string& kind) {
  for (const auto& v : vs)
    if (v.kind == kind) return true;
  return false;
}

// Ball counts from hop distances: |B(x, r)| = #{y : d(x, y) <= r}.
std::size_t bfs_ball(const std::vector<std::vector<std::size_t>>& adj, std::size_t x, double r) {
  std::size_t c = 0;
  for (std::size_t d : oracle::bfs(adj, x)) c += d <= r;
  return c;
}

}  // namespace

TEST_CASE("word length on Z_6") {
  Groupoid z6 = group_groupoid(cyclic_group_table(6));
  LengthFunction l = word_length(z6, {1});
  // Cayley graph of Z_6 for {1, 5} is a 6-cycle.
  std::vector<std::vector<std::size_t>> cycle(6);
  for (std::size_t i = 0; i < 6; ++i) cycle[i] = {(i + 1) % 6, (i + 5) % 6};
  const auto d = oracle::bfs(cycle, 0);
  for (ArrowId a = 0; a < 6; ++a) CHECK(l(a) == static_cast<double>(d[a]));
  CHECK(l(3) == 3);
  CHECK(l(4) == 2);
  CHECK(l(5) == 1);
  CHECK(validate_length(z6, l).empty());
  CHECK(ball(z6, l, 0, 2).size() == 5);
}

TEST_CASE("word length of all non-units is at most one") {
  for (const auto& c : oracle::small_suite()) {
    std::vector<ArrowId> K;
    for (ArrowId a = 0; a < c.g->arrow_count(); ++a)
      if (!is_unit(*c.g, a)) K.push_back(a);
    if (K.empty()) continue;
    LengthFunction l = word_length(*c.g, K);
    for (double v : l.values) CHECK(v <= 1.0);
    CHECK(validate_length(*c.g, l).empty());
  }
}

TEST_CASE("non-generating sets are reported") {
  Groupoid z4 = group_groupoid(cyclic_group_table(4));
  try {
    word_length(z4, {2});
    FAIL("Z_4 generated by 2");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_generating);
    CHECK(e.witness() == std::vector<std::size_t>{1, 3});
  }
}

TEST_CASE("length axioms are checked") {
  Groupoid z6 = group_groupoid(cyclic_group_table(6));
  LengthFunction l = word_length(z6, {1});
  LengthFunction bad_unit = l;
  bad_unit.values[0] = 0.5;
  CHECK(has_kind(validate_length(z6, bad_unit), "UNIT_NONZERO"));

  // l(1) = l(5) = 1 but l(1 + 1) = 3.
  LengthFunction bad_sum = l;
  bad_sum.values[2] = bad_sum.values[4] = 3;
  CHECK(has_kind(validate_length(z6, bad_sum), "SUBADDITIVITY"));

  LengthFunction asym = l;
  asym.values[1] = 2;
  CHECK(has_kind(validate_length(z6, asym), "INVERSE_ASYMMETRY"));
}

TEST_CASE("pullback lengths") {
  auto z6 = share(group_groupoid(cyclic_group_table(6)));
  LengthFunction l = word_length(*z6, {1});
  CHECK(pullback_length(identity_hom(z6), l).values == l.values);

  auto t = transformation_groupoid(z6, {0, 0, 0}, [](ArrowId g, std::size_t y) { return (g + y) % 3; });
  LengthFunction lt = pullback_length(t.projection, l);
  for (ArrowId a = 0; a < lt.size(); ++a) CHECK(lt(a) == l(t.pairs[a].first));
  CHECK(validate_length(*t.groupoid, lt).empty());

  BlowUp b = blow_up(z6, {0, 0});
  LengthFunction lb = pullback_length(b.projection, l);
  for (ArrowId a = 0; a < lb.size(); ++a) CHECK(lb(a) == l(b.triples[a][1]));
  CHECK(validate_length(*b.groupoid, lb).empty());
}

TEST_CASE("balls on path pair groupoids") {
  FiniteMetricSpace p4 = path_space(4);
  PairGroupoid g(4);
  PairMetricLength l(p4);
  CHECK(ball(g, l, g.unit(0), 1).size() == 2);
  CHECK(ball(g, l, g.unit(0), 0) == std::vector<ArrowId>{g.unit(0)});
  CHECK(validate_length(g, l).empty());
}

TEST_CASE("balls are nested") {
  FiniteMetricSpace X = grid_space(4, 3);
  PairGroupoid g(X.size());
  PairMetricLength l(X);
  for (std::size_t i = 0; i < g.unit_count(); ++i)
    for (double r = 0; r < 6; ++r) {
      auto small = ball(g, l, g.unit(i), r), big = ball(g, l, g.unit(i), r + 0.5);
      CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
    }
}

TEST_CASE("growth counts equal metric ball sizes") {
  const auto adj = oracle::grid_graph(5, 4);
  FiniteMetricSpace X = grid_space(5, 4);
  PairGroupoid g(X.size());
  GrowthProfile p = growth_profile(g, PairMetricLength(X), {0, 1, 2, 3, 7});
  for (const auto& row : p.rows) CHECK(row.count == bfs_ball(adj, g.source_point(row.unit), row.r));
}

TEST_CASE("growth exponent of paths is about one") {
  FiniteMetricSpace X = path_space(64);
  PairGroupoid g(64);
  std::vector<double> radii;
  for (int r = 1; r <= 31; ++r) radii.push_back(r);
  GrowthProfile p = growth_profile(g, PairMetricLength(X), radii);
  for (std::size_t k = 0; k < radii.size(); ++k) CHECK(p.max_counts[k] == 2 * radii[k] + 1);
  CHECK(p.exponent >= 0.8);
  CHECK(p.exponent <= 1.2);
}

TEST_CASE("growth exponent of binary trees is large") {
  HeapTreeMetric X(10);
  PairGroupoid g(X.size());
  std::vector<double> radii;
  for (int r = 1; r <= 10; ++r) radii.push_back(r);
  // Independent regression on the root's exact counts 2^{r+1} - 1.
  double mx = 0, my = 0;
  for (double r : radii) {
    mx += std::log1p(r);
    my += std::log(std::pow(2.0, r + 1) - 1);
  }
  mx /= radii.size();
  my /= radii.size();
  double sxy = 0, sxx = 0;
  for (double r : radii) {
    sxy += (std::log1p(r) - mx) * (std::log(std::pow(2.0, r + 1) - 1) - my);
    sxx += (std::log1p(r) - mx) * (std::log1p(r) - mx);
  }
  const double root_slope = sxy / sxx;
  const auto counts = ball(g, PairMetricLength(X), g.unit(0), 10).size();
  CHECK(counts == 2047);
  GrowthProfile p = growth_profile(g, PairMetricLength(X), radii);
  CHECK(p.exponent > 3);
  CHECK(root_slope > 3);
}

TEST_CASE("growth on the trivial groupoid") {
  Groupoid one = pair_groupoid(1);
  LengthFunction l{{0.0}};
  GrowthProfile p = growth_profile(one, l, {0, 1, 2});
  for (auto c : p.max_counts) CHECK(c == 1);
  CHECK_THAT(p.exponent, WithinAbs(0.0, 1e-15));
}

TEST_CASE("degenerate growth fits") {
  Groupoid one = pair_groupoid(1);
  LengthFunction l{{0.0}};
  try {
    growth_profile(one, l, {2, 2});
    FAIL("fit with one radius");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::degenerate_fit);
  }
  CHECK_THROWS_AS(growth_profile(one, l, {}), Error);
}

TEST_CASE("tree metric without a table matches Dijkstra") {
  for (std::size_t depth : {1u, 3u, 5u}) {
    HeapTreeMetric h(depth);
    FiniteMetricSpace t = binary_tree_space(depth);
    const auto adj = oracle::tree_graph(depth);
    REQUIRE(h.size() == t.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
      const auto d = oracle::bfs(adj, i);
      for (std::size_t j = 0; j < h.size(); ++j) {
        CHECK(h.distance(i, j) == static_cast<double>(d[j]));
        CHECK(t.distance(i, j) == static_cast<double>(d[j]));
      }
    }
  }
}
