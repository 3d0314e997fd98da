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

// Spectral norms of complex matrices: dense Hermitian eigensolve of M^*M for
// small dimensions, power iteration on M^*M otherwise.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace rdg {

struct SpectralOptions {
  std::size_t dense_limit = 512;
  double rel_tol = 1e-10;
  std::size_t max_iterations = 10000;
  std::uint64_t seed = 0x5eedULL;
};

struct SpectralNorm {
  double value = 0.0;     // sqrt of the top eigenvalue of M^*M (a lower bound if !converged)
  double residual = 0.0;  // ||Av - lambda v|| / lambda for the returned vector
  std::size_t iterations = 0;
  bool converged = true;
  bool dense = true;
};

inline SpectralNorm dense_spectral_norm(const Eigen::MatrixXcd& m) {
  SpectralNorm out;
  if (m.size() == 0) return out;
  Eigen::MatrixXcd a = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  const Eigen::Index top = a.rows() - 1;
  const double lambda = std::max(0.0, es.eigenvalues()(top));
  out.value = std::sqrt(lambda);
  if (lambda > 0.0) {
    Eigen::VectorXcd v = es.eigenvectors().col(top);
    out.residual = (a * v - lambda * v).norm() / lambda;
  }
  return out;
}

/// Power iteration on A = M^*M with a fixed-seed complex Gaussian start.
/// Stops when successive Rayleigh quotients agree to rel_tol or the
/// iterate is an eigenvector to within rel_tol. Every
/// iterate's sqrt(<v, A v>) is a lower bound on ||M||; the best one is kept.
template <class Apply, class ApplyAdjoint>
SpectralNorm power_iteration_norm(Eigen::Index dim, Apply&& apply, ApplyAdjoint&& apply_adjoint,
                                  const SpectralOptions& opts) {
  SpectralNorm out;
  out.dense = false;
  out.converged = false;
  if (dim == 0) {
    out.converged = true;
    return out;
  }
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXcd v(dim), w, u;
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = {normal(rng), normal(rng)};
  v.normalize();
  double prev = -1.0, best = 0.0;
  for (std::size_t k = 1; k <= opts.max_iterations; ++k) {
    w = apply(v);
    u = apply_adjoint(w);
    const double lambda = w.squaredNorm();
    out.iterations = k;
    if (lambda == 0.0) {
      out.converged = true;
      out.residual = 0.0;
      best = 0.0;
      break;
    }
    out.residual = (u - lambda * v).norm() / lambda;
    if (lambda >= best) best = lambda;
    if (out.residual <= opts.rel_tol || (prev >= 0.0 && std::abs(lambda - prev) <= opts.rel_tol * lambda)) {
      out.converged = true;
      break;
    }
    prev = lambda;
    v = u / u.norm();
  }
  out.value = std::sqrt(best);
  return out;
}

}  // namespace rdg
