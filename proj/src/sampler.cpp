// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#include "ellhyp/sampler.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "ellhyp/error.hpp"

namespace ellhyp {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct Interval {
  double lo = 0.0, hi = 0.0;
};

}  // namespace

CounterRng::CounterRng(const std::string& entry, std::int64_t n, std::int64_t m, std::uint64_t seed) {
  std::uint64_t k = fnv1a(entry);
  k = splitmix(k ^ static_cast<std::uint64_t>(n));
  k = splitmix(k ^ static_cast<std::uint64_t>(m));
  key_ = splitmix(k ^ seed);
}

std::uint64_t CounterRng::bits(std::uint64_t counter) const { return splitmix(key_ ^ splitmix(counter)); }

double CounterRng::uniform(std::uint64_t counter) const {
  return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

void SampleWindow::validate(bool unit_contour) const {
  if (!(lo >= 0.05)) fail(ErrorCode::invalid_argument, "window lower modulus must be >= 0.05");
  if (!(delta >= 0.05)) fail(ErrorCode::invalid_argument, "window margin must be >= 0.05");
  if (unit_contour && !(hi <= 1.0 - delta)) fail(ErrorCode::invalid_argument, "window upper modulus must be <= 1 - delta");
  for (const auto& w : params)
    if (!(w.spread >= 0.0) || !(w.scale > 0.0)) fail(ErrorCode::invalid_argument, "bad window for " + w.name);
}

Assignment complete_assignment(const Assignment& free, const RelationSet& relations,
                               const std::map<std::string, Monomial, std::less<>>& derived, const Base& base) {
  Assignment all = free;
  all["p"] = base.p;
  all["q"] = base.q;
  for (const auto& [g, expr] : relations.solved()) all[g] = mono_eval(expr, all);
  for (const auto& [g, expr] : derived) all[g] = mono_eval(relations_reduce(expr, relations), all);
  all.erase("p");
  all.erase("q");
  return all;
}

void check_window_feasible(const SamplingProblem& pr) {
  // log-modulus interval per generator
  std::map<std::string, Interval, std::less<>> box;
  box["p"] = {std::log(std::abs(pr.base.p)), std::log(std::abs(pr.base.p))};
  box["q"] = {std::log(std::abs(pr.base.q)), std::log(std::abs(pr.base.q))};
  auto eval = [&](const Monomial& m) -> std::optional<Interval> {
    Interval r;
    for (const auto& [g, e8] : m.eighths()) {
      auto it = box.find(g);
      if (it == box.end()) return std::nullopt;
      const double e = e8 / 8.0;
      r.lo += e > 0 ? e * it->second.lo : e * it->second.hi;
      r.hi += e > 0 ? e * it->second.hi : e * it->second.lo;
    }
    return r;
  };
  for (const auto& w : pr.window.params) {
    auto c = eval(w.center);
    if (!c) fail(ErrorCode::invalid_argument, "window center for " + w.name + " uses an unknown generator");
    const double inv = 1.0 / w.root.to_double();
    box[w.name] = {c->lo * inv + std::log(w.scale) - w.spread, c->hi * inv + std::log(w.scale) + w.spread};
  }
  for (const IntegralSpec* spec : pr.unit_specs)
    for (const auto& f : spec->factors) {
      if (f.slots.empty()) continue;
      bool empty = false;
      for (const Slot& s : f.slots) empty = empty || spec->group(s.group).dim() == 0;
      if (empty) continue;
      const Monomial reduced = relations_reduce(substitute(f.coefficient, pr.derived), pr.relations);
      auto iv = eval(reduced);
      if (!iv) continue;
      if (iv->lo >= std::log1p(-pr.window.delta))
        fail(ErrorCode::infeasible,
             "window infeasible at this base: |" + f.describe() + "| >= " + std::to_string(1.0 - pr.window.delta) +
                 " everywhere in the window (smallest reachable modulus " + std::to_string(std::exp(iv->lo)) +
                 "); this identity needs a deformed contour");
    }
}

SampleResult sample_params(const SamplingProblem& pr, std::uint64_t seed) {
  pr.base.validate();
  pr.window.validate(!pr.unit_specs.empty());
  check_window_feasible(pr);
  const CounterRng rng(pr.entry, pr.n, pr.m, seed);
  std::uint64_t counter = 0;
  double best_margin = -std::numeric_limits<double>::infinity();
  for (int attempt = 1; attempt <= pr.max_attempts; ++attempt) {
    Assignment free;
    Assignment ctx{{"p", pr.base.p}, {"q", pr.base.q}};
    for (const auto& w : pr.window.params) {
      const double c = std::pow(std::abs(mono_eval(w.center, ctx)), 1.0 / w.root.to_double()) * w.scale;
      const double u1 = rng.uniform(counter++), u2 = rng.uniform(counter++);
      const double modulus = c * std::exp(w.spread * (2.0 * u1 - 1.0));
      const double phase = w.phase_halfwidth ? *w.phase_halfwidth * (2.0 * u2 - 1.0) : 2.0 * std::numbers::pi * u2;
      const cplx x = std::polar(modulus, phase);
      free[w.name] = x;
      ctx[w.name] = x;
    }
    const Assignment all = complete_assignment(free, pr.relations, pr.derived, pr.base);
    double margin = std::numeric_limits<double>::infinity();
    for (const IntegralSpec* spec : pr.unit_specs) {
      const BalanceReport bal = validate_balancing(*spec, all, pr.base, 1e-14);
      if (!bal.ok) margin = -1.0;
      margin = std::min(margin, contour_ok(*spec, all, pr.base).min_margin);
    }
    for (const auto& check : pr.checks) margin = std::min(margin, check(all));
    best_margin = std::max(best_margin, margin);
    if (margin >= pr.window.delta) return {all, attempt, margin};
  }
  fail(ErrorCode::infeasible, "no admissible sample for " + pr.entry + " after " + std::to_string(pr.max_attempts) +
                                  " attempts (best contour margin " + std::to_string(best_margin) + ")");
}

}  // namespace ellhyp
