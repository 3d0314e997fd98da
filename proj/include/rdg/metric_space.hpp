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

// Finite metric spaces and the length they induce on the pair groupoid.

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "rdg/error.hpp"
#include "rdg/groupoid.hpp"

namespace rdg {

template <class M>
concept MetricLike = requires(const M& m, std::size_t i, std::size_t j) {
  { m.size() } -> std::convertible_to<std::size_t>;
  { m.distance(i, j) } -> std::convertible_to<double>;
};

inline constexpr double kMetricTolerance = 1e-12;

/// Dense distance matrix over points 0..n-1. `labels` keeps the ids used in
/// input files.
class FiniteMetricSpace {
 public:
  struct Edge {
    std::size_t a, b;
    std::uint64_t w;
  };

  FiniteMetricSpace() = default;

  /// Throws VALIDATION_ERROR listing the metric-axiom violations.
  static FiniteMetricSpace from_matrix(std::vector<std::vector<double>> d,
                                       std::vector<std::int64_t> labels = {}) {
    FiniteMetricSpace s;
    s.n_ = d.size();
    s.labels_ = default_labels(std::move(labels), s.n_);
    s.dist_.resize(s.n_ * s.n_);
    for (std::size_t i = 0; i < s.n_; ++i) {
      require(d[i].size() == s.n_, Errc::schema_error, "distance matrix is not square", {i});
      for (std::size_t j = 0; j < s.n_; ++j) s.dist_[i * s.n_ + j] = d[i][j];
    }
    Violations v = s.check_axioms();
    if (!v.empty()) throw Error(Errc::validation_error, "not a metric", std::move(v));
    return s;
  }

  /// Shortest-path metric of a connected graph with positive integer
  /// weights. Distances are exact integers.
  static FiniteMetricSpace from_edges(std::size_t n, const std::vector<Edge>& edges,
                                      std::vector<std::int64_t> labels = {}) {
    require(n >= 1, Errc::validation_error, "metric space needs at least one point");
    std::vector<std::vector<std::pair<std::size_t, std::uint64_t>>> adj(n);
    for (const Edge& e : edges) {
      require(e.a < n && e.b < n, Errc::schema_error, "edge endpoint out of range", {e.a, e.b});
      require(e.w > 0, Errc::validation_error, "edge weights must be positive", {e.a, e.b});
      adj[e.a].push_back({e.b, e.w});
      adj[e.b].push_back({e.a, e.w});
    }
    FiniteMetricSpace s;
    s.n_ = n;
    s.labels_ = default_labels(std::move(labels), n);
    s.dist_.resize(n * n);
    constexpr std::uint64_t inf = std::numeric_limits<std::uint64_t>::max();
    std::vector<std::uint64_t> d(n);
    using Item = std::pair<std::uint64_t, std::size_t>;
    for (std::size_t src = 0; src < n; ++src) {
      std::fill(d.begin(), d.end(), inf);
      std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
      d[src] = 0;
      pq.push({0, src});
      while (!pq.empty()) {
        auto [du, u] = pq.top();
        pq.pop();
        if (du != d[u]) continue;
        for (auto [v, w] : adj[u])
          if (du + w < d[v]) {
            d[v] = du + w;
            pq.push({d[v], v});
          }
      }
      for (std::size_t j = 0; j < n; ++j) {
        require(d[j] != inf, Errc::validation_error, "graph is disconnected", {src, j});
        s.dist_[src * n + j] = static_cast<double>(d[j]);
      }
    }
    return s;
  }

  std::size_t size() const { return n_; }
  double distance(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
  const std::vector<std::int64_t>& labels() const { return labels_; }

  Violations check_axioms(std::size_t max_violations = 64) const {
    Violations out;
    auto add = [&](const char* kind, std::vector<std::size_t> w) {
      if (out.size() < max_violations) out.push_back({kind, std::move(w), ""});
    };
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        const double d = distance(i, j);
        if (!std::isfinite(d) || d < 0) add("NEGATIVE_OR_NAN", {i, j});
        if (i == j && d != 0) add("DIAGONAL", {i});
        if (i != j && d == 0) add("ZERO_DISTANCE", {i, j});
        if (std::abs(d - distance(j, i)) > kMetricTolerance) add("ASYMMETRY", {i, j});
      }
    if (!out.empty()) return out;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t k = 0; k < n_; ++k)
          if (distance(i, k) > distance(i, j) + distance(j, k) + kMetricTolerance)
            add("TRIANGLE", {i, j, k});
    return out;
  }

 private:
  static std::vector<std::int64_t> default_labels(std::vector<std::int64_t> labels, std::size_t n) {
    if (labels.empty())
      for (std::size_t i = 0; i < n; ++i) labels.push_back(static_cast<std::int64_t>(i));
    require(labels.size() == n, Errc::schema_error, "label count does not match point count");
    return labels;
  }

  std::size_t n_ = 0;
  std::vector<double> dist_;
  std::vector<std::int64_t> labels_;
};

inline FiniteMetricSpace path_space(std::size_t n) {
  std::vector<FiniteMetricSpace::Edge> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.push_back({i, i + 1, 1});
  return FiniteMetricSpace::from_edges(n, e);
}

/// w x h grid graph, point (i, j) at index j*w + i.
inline FiniteMetricSpace grid_space(std::size_t w, std::size_t h) {
  std::vector<FiniteMetricSpace::Edge> e;
  for (std::size_t j = 0; j < h; ++j)
    for (std::size_t i = 0; i < w; ++i) {
      if (i + 1 < w) e.push_back({j * w + i, j * w + i + 1, 1});
      if (j + 1 < h) e.push_back({j * w + i, (j + 1) * w + i, 1});
    }
  return FiniteMetricSpace::from_edges(w * h, e);
}

/// Complete binary tree in heap order: root 0, children 2i+1 and 2i+2.
inline FiniteMetricSpace binary_tree_space(std::size_t depth) {
  const std::size_t n = (std::size_t{2} << depth) - 1;
  std::vector<FiniteMetricSpace::Edge> e;
  for (std::size_t i = 1; i < n; ++i) e.push_back({(i - 1) / 2, i, 1});
  return FiniteMetricSpace::from_edges(n, e);
}

/// The same tree metric without the n^2 table, for depths where the table
/// would not fit in memory.
class HeapTreeMetric {
 public:
  explicit HeapTreeMetric(std::size_t depth) : depth_(depth), n_((std::size_t{2} << depth) - 1) {}
  std::size_t size() const { return n_; }
  std::size_t depth() const { return depth_; }
  double distance(std::size_t i, std::size_t j) const {
    // 1-based heap indices: the depth is the bit width minus one, and the
    // common ancestor is the common binary prefix.
    std::uint64_t a = i + 1, b = j + 1;
    const int da = std::bit_width(a), db = std::bit_width(b);
    if (da > db) a >>= da - db;
    else b >>= db - da;
    const int up = std::bit_width(a ^ b);
    return static_cast<double>(std::abs(da - db) + 2 * up);
  }

 private:
  std::size_t depth_, n_;
};

/// l(y, x) = d(y, x) on the pair groupoid of the space. Holds a pointer; the
/// metric must outlive the length.
template <MetricLike M>
class PairMetricLength {
 public:
  explicit PairMetricLength(const M& m) : m_(&m), n_(m.size()) {}
  double operator()(ArrowId a) const {
    const std::size_t y = a / n_;
    return m_->distance(y, a - y * n_);
  }
  std::size_t size() const { return n_ * n_; }

 private:
  const M* m_;
  std::size_t n_;
};

}  // namespace rdg
