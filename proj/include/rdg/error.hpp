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

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rdg {

using ArrowId = std::size_t;
inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

enum class Errc {
  dangling_id,
  not_a_group,
  not_an_action,
  not_surjective,
  not_regular,
  not_generating,
  degenerate_fit,
  groupoid_mismatch,
  not_a_unit,
  no_convergence,
  negative_t,
  zero_function,
  empty_family,
  range_not_injective,
  empty_ball,
  support_leak,
  bad_constants,
  parse_error,
  schema_error,
  validation_error,
  invalid_argument,
};

constexpr std::string_view errc_name(Errc e) {
  switch (e) {
    case Errc::dangling_id: return "DANGLING_ID";
    case Errc::not_a_group: return "NOT_A_GROUP";
    case Errc::not_an_action: return "NOT_AN_ACTION";
    case Errc::not_surjective: return "NOT_SURJECTIVE";
    case Errc::not_regular: return "NOT_REGULAR";
    case Errc::not_generating: return "NOT_GENERATING";
    case Errc::degenerate_fit: return "DEGENERATE_FIT";
    case Errc::groupoid_mismatch: return "GROUPOID_MISMATCH";
    case Errc::not_a_unit: return "NOT_A_UNIT";
    case Errc::no_convergence: return "NO_CONVERGENCE";
    case Errc::negative_t: return "NEGATIVE_T";
    case Errc::zero_function: return "ZERO_FUNCTION";
    case Errc::empty_family: return "EMPTY_FAMILY";
    case Errc::range_not_injective: return "RANGE_NOT_INJECTIVE";
    case Errc::empty_ball: return "EMPTY_BALL";
    case Errc::support_leak: return "SUPPORT_LEAK";
    case Errc::bad_constants: return "BAD_CONSTANTS";
    case Errc::parse_error: return "PARSE_ERROR";
    case Errc::schema_error: return "SCHEMA_ERROR";
    case Errc::validation_error: return "VALIDATION_ERROR";
    case Errc::invalid_argument: return "INVALID_ARGUMENT";
  }
  return "UNKNOWN";
}

/// One failed axiom, with the arrows (or points) that witness the failure.
struct Violation {
  std::string kind;
  std::vector<std::size_t> witness;
  std::string detail;
};

using Violations = std::vector<Violation>;

inline std::string to_string(const Violation& v) {
  std::string s = v.kind + " (";
  for (std::size_t i = 0; i < v.witness.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v.witness[i]);
  }
  s += ")";
  if (!v.detail.empty()) s += ": " + v.detail;
  return s;
}

/// Library error. `code()` carries the error name used in reports and by the
/// CLI; `witness()` lists the offending ids when there are any.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, std::vector<std::size_t> witness = {})
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code),
        witness_(std::move(witness)) {}

  Error(Errc code, const std::string& what, Violations violations)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what + describe(violations)),
        code_(code),
        violations_(std::move(violations)) {
    if (!violations_.empty()) witness_ = violations_.front().witness;
  }

  Errc code() const noexcept { return code_; }
  const std::vector<std::size_t>& witness() const noexcept { return witness_; }
  const Violations& violations() const noexcept { return violations_; }

 private:
  static std::string describe(const Violations& vs) {
    std::string s;
    for (std::size_t i = 0; i < vs.size() && i < 8; ++i) s += "\n  " + to_string(vs[i]);
    if (vs.size() > 8) s += "\n  ... (" + std::to_string(vs.size() - 8) + " more)";
    return s;
  }

  Errc code_;
  std::vector<std::size_t> witness_;
  Violations violations_;
};

/// Power iteration ran out of budget. The best bound is a valid lower bound
/// on the spectral norm.
class NoConvergence : public Error {
 public:
  NoConvergence(double best_bound, double residual, std::size_t iterations)
      : Error(Errc::no_convergence,
              "power iteration stopped after " + std::to_string(iterations) +
                  " iterations (best bound " + std::to_string(best_bound) + ", residual " +
                  std::to_string(residual) + ")"),
        best_bound_(best_bound),
        residual_(residual) {}

  double best_bound() const noexcept { return best_bound_; }
  double residual() const noexcept { return residual_; }

 private:
  double best_bound_;
  double residual_;
};

inline void require(bool cond, Errc code, const std::string& what,
                    std::vector<std::size_t> witness = {}) {
  if (!cond) throw Error(code, what, std::move(witness));
}

}  // namespace rdg
