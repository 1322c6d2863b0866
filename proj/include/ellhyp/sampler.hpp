// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ellhyp/ispec.hpp"

namespace ellhyp {

// Counter-based generator: every draw is a pure function of (key, counter).
class CounterRng {
 public:
  CounterRng(const std::string& entry, std::int64_t n, std::int64_t m, std::uint64_t seed);
  std::uint64_t bits(std::uint64_t counter) const;
  // Uniform in [0, 1).
  double uniform(std::uint64_t counter) const;

 private:
  std::uint64_t key_;
};

// One free parameter: log|x| is uniform in log(center) +- spread, the phase
// uniform on the circle or in +-phase_halfwidth around the real axis. The
// center is |center_monomial|^(1/root) * scale, evaluated against the values
// drawn so far, so windows can follow t.
struct WindowParam {
  std::string name;
  Monomial center;
  Rational root = Rational(1);
  double scale = 1.0;
  double spread = 0.1;
  std::optional<double> phase_halfwidth;
};

struct SampleWindow {
  std::vector<WindowParam> params;
  double lo = 0.05;    // smallest admissible modulus
  double hi = 0.95;    // largest admissible modulus for unit-contour params
  double delta = 0.05; // margin kept from every contour bound
  void validate(bool unit_contour) const;
};

// A margin check on a full assignment; accepted samples need margin >= delta.
using MarginCheck = std::function<double(const Assignment&)>;

struct SamplingProblem {
  std::string entry;
  std::int64_t n = 1;
  std::int64_t m = 0;
  Base base;
  SampleWindow window;
  RelationSet relations;
  std::map<std::string, Monomial, std::less<>> derived;
  // Specs that must admit the unit circle (contour_ok with margin delta).
  std::vector<const IntegralSpec*> unit_specs;
  // Extra checks for deformed-contour entries.
  std::vector<MarginCheck> checks;
  int max_attempts = 400;
};

struct SampleResult {
  Assignment values;  // free, eliminated and derived parameters (no p, q)
  int attempts = 0;
  double margin = 0.0;
};

// Completes an assignment of the free parameters: eliminated generators from
// the relations, then derived ones.
Assignment complete_assignment(const Assignment& free, const RelationSet& relations,
                               const std::map<std::string, Monomial, std::less<>>& derived, const Base& base);

// Interval bound on the log-moduli reachable inside the window. Throws
// ErrorCode::infeasible when some unit-contour coefficient is forced to
// modulus >= 1 - delta for every point of the window.
void check_window_feasible(const SamplingProblem& problem);

SampleResult sample_params(const SamplingProblem& problem, std::uint64_t seed);

}  // namespace ellhyp
