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
#include "rdg/rdg.hpp"

using namespace rdg;

namespace {

double max_diff(const GFunction& a, const GFunction& b) {
  double d = 0.0;
  for (ArrowId x = 0; x < a.size(); ++x) d = std::max(d, std::abs(a[x] - b[x]));
  return d;
}

double scale(const GFunction& f) {
  double s = 1.0;
  for (const auto& c : f.coeffs) s = std::max(s, std::abs(c));
  return s;
}

GroupoidPtr klein() {
  return share(group_groupoid(direct_product_table(cyclic_group_table(2), cyclic_group_table(2))));
}

}  // namespace

TEST_CASE("unit indicator is the identity") {
  std::mt19937_64 rng(1);
  for (const auto& c : oracle::small_suite()) {
    INFO(c.name);
    GFunction f = oracle::random_function(c.g->arrow_count(), rng);
    GFunction one = unit_indicator(*c.g);
    CHECK(max_diff(convolve(*c.g, one, f, c.sigma), f) < 1e-15);
    CHECK(max_diff(convolve(*c.g, f, one, c.sigma), f) < 1e-15);
    CHECK(rep_matrix(*c.g, one, c.g->unit(0), c.sigma).matrix.isIdentity(0.0));
  }
}

TEST_CASE("convolution matches the defining sum") {
  std::mt19937_64 rng(2);
  for (const auto& c : oracle::small_suite()) {
    INFO(c.name);
    for (int trial = 0; trial < 20; ++trial) {
      GFunction f = oracle::random_function(c.g->arrow_count(), rng, 0.7);
      GFunction h = oracle::random_function(c.g->arrow_count(), rng, 0.7);
      CHECK(max_diff(convolve(*c.g, f, h, c.sigma), oracle::convolve(*c.g, f, h, c.sigma)) < 1e-12);
    }
  }
}

TEST_CASE("Z_2 delta squares to the identity") {
  Groupoid z2 = group_groupoid(cyclic_group_table(2));
  GFunction d = delta(2, 1);
  CHECK(max_diff(convolve(z2, d, d, TrivialCocycle{}), delta(2, 0)) == 0.0);
}

TEST_CASE("delta products pick up the cocycle") {
  auto g = share(group_groupoid(direct_product_table(cyclic_group_table(3), cyclic_group_table(3))));
  Cocycle s = bicharacter_cocycle(g, 3);
  for (ArrowId a = 0; a < 9; ++a)
    for (ArrowId b = 0; b < 9; ++b) {
      GFunction expect(9);
      expect[g->product(a, b)] = s(a, b);
      CHECK(max_diff(convolve(*g, delta(9, a), delta(9, b), s), expect) < 1e-15);
    }
}

TEST_CASE("convolution is associative") {
  std::mt19937_64 rng(3);
  for (const auto& c : oracle::small_suite()) {
    INFO(c.name);
    Cocycle sigma = oracle::random_twist(c.g, c.sigma, rng);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = c.g->arrow_count();
      GFunction f = oracle::random_function(n, rng), g = oracle::random_function(n, rng),
                h = oracle::random_function(n, rng);
      GFunction left = convolve(*c.g, convolve(*c.g, f, g, sigma), h, sigma);
      GFunction right = convolve(*c.g, f, convolve(*c.g, g, h, sigma), sigma);
      CHECK(max_diff(left, right) <= 1e-10 * scale(left));
    }
  }
}

TEST_CASE("involution") {
  std::mt19937_64 rng(4);
  Groupoid z6 = group_groupoid(cyclic_group_table(6));
  GFunction f = oracle::random_function(6, rng);
  GFunction fs = involution(z6, f, TrivialCocycle{});
  for (ArrowId a = 0; a < 6; ++a) CHECK(fs[a] == std::conj(f[z6.inv(a)]));

  auto g = klein();
  Cocycle s = heisenberg_cocycle(g);
  for (int trial = 0; trial < 100; ++trial) {
    GFunction h = oracle::random_function(4, rng);
    CHECK(max_diff(involution(*g, involution(*g, h, s), s), h) < 1e-15);
  }
}

TEST_CASE("representation matrices agree with the brute-force assembly") {
  std::mt19937_64 rng(5);
  for (const auto& c : oracle::small_suite()) {
    INFO(c.name);
    Cocycle sigma = oracle::random_twist(c.g, c.sigma, rng);
    GFunction f = oracle::random_function(c.g->arrow_count(), rng);
    for (ArrowId x : c.g->units()) {
      Eigen::MatrixXcd m = rep_matrix(*c.g, f, x, sigma).matrix;
      CHECK((m - oracle::rep_matrix(*c.g, f, x, sigma)).cwiseAbs().maxCoeff() < 1e-15);
    }
  }
}

TEST_CASE("representation is multiplicative and respects adjoints") {
  std::mt19937_64 rng(6);
  for (const auto& c : oracle::small_suite()) {
    INFO(c.name);
    Cocycle sigma = oracle::random_twist(c.g, c.sigma, rng);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = c.g->arrow_count();
      GFunction f = oracle::random_function(n, rng), h = oracle::random_function(n, rng);
      GFunction fh = convolve(*c.g, f, h, sigma), fs = involution(*c.g, f, sigma);
      for (ArrowId x : c.g->units()) {
        auto M = [&](const GFunction& k) { return rep_matrix(*c.g, k, x, sigma).matrix; };
        const Eigen::MatrixXcd prod = M(f) * M(h);
        CHECK((M(fh) - prod).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, prod.cwiseAbs().maxCoeff()));
        CHECK((M(fs) - M(f).adjoint()).cwiseAbs().maxCoeff() <= 1e-14 * std::max(1.0, scale(f)));
      }
    }
  }
}

TEST_CASE("pair groupoid all-ones matrix") {
  Groupoid p3 = pair_groupoid(3);
  Eigen::MatrixXcd m = rep_matrix(p3, ones(9), p3.unit(1), TrivialCocycle{}).matrix;
  CHECK(m == Eigen::MatrixXcd::Ones(3, 3));
}

TEST_CASE("Heisenberg generators anticommute") {
  auto g = klein();
  Cocycle s = heisenberg_cocycle(g);
  // (1,0) has index 2, (0,1) has index 1.
  Eigen::MatrixXcd X = rep_matrix(*g, delta(4, 2), 0, s).matrix;
  Eigen::MatrixXcd Y = rep_matrix(*g, delta(4, 1), 0, s).matrix;
  CHECK((X * Y + Y * X).cwiseAbs().maxCoeff() == 0.0);
  CHECK((X * X - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
  Eigen::MatrixXcd Xu = rep_matrix(*g, delta(4, 2), 0, TrivialCocycle{}).matrix;
  Eigen::MatrixXcd Yu = rep_matrix(*g, delta(4, 1), 0, TrivialCocycle{}).matrix;
  CHECK((Xu * Yu - Yu * Xu).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("mismatched groupoids and non-units are rejected") {
  Groupoid p2 = pair_groupoid(2);
  try {
    convolve(p2, ones(4), ones(5), TrivialCocycle{});
    FAIL("sizes differ");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::groupoid_mismatch);
  }
  try {
    rep_matrix(p2, ones(4), 1, TrivialCocycle{});
    FAIL("1 is not a unit");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_a_unit);
  }
}
