// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cstring>

#include "ellhyp/catalog.hpp"
#include "ellhyp/error.hpp"
#include "ellhyp/sampler.hpp"
#include "ellhyp/templates.hpp"

namespace ellhyp {
namespace {

const Catalog& catalog() {
  static const Catalog c = Catalog::load(Catalog::default_dir());
  return c;
}

TEST(CounterRng, PureFunctionOfKeyAndCounter) {
  const CounterRng a("elliptic_beta", 1, 0, 42), b("elliptic_beta", 1, 0, 42), c("elliptic_beta", 1, 0, 43),
      d("elliptic_beta", 2, 0, 42);
  for (std::uint64_t k = 0; k < 100; ++k) {
    EXPECT_EQ(a.bits(k), b.bits(k));
    const double u = a.uniform(k);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  EXPECT_NE(a.bits(0), c.bits(0));
  EXPECT_NE(a.bits(0), d.bits(0));
}

TEST(CounterRng, RoughlyUniform) {
  const CounterRng r("x", 1, 0, 1);
  double sum = 0;
  int low = 0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    const double u = r.uniform(k);
    sum += u;
    low += u < 0.25;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.01);
  EXPECT_NEAR(low / double(n), 0.25, 0.01);
}

TEST(SampleParams, EllipticBetaSatisfiesBalancing) {
  InstanceRequest req;
  req.identity = "elliptic_beta";
  req.seed = 42;
  req.base = Base{0.2, 0.2};
  const Instance inst = instantiate(catalog(), req);
  int count = 0;
  cplx prod = 1.0;
  for (const auto& [name, v] : inst.params)
    if (name.size() == 2 && name[0] == 't') {
      prod *= v;
      ++count;
    }
  EXPECT_EQ(count, 6);
  EXPECT_LE(std::abs(prod - 0.04), 1e-14);
}

TEST(SampleParams, SameSeedSameBytes) {
  InstanceRequest req;
  req.identity = "dixon_eval";
  req.n = 2;
  req.seed = 9;
  const Instance a = instantiate(catalog(), req), b = instantiate(catalog(), req);
  ASSERT_EQ(a.params.size(), b.params.size());
  for (const auto& [name, v] : a.params) EXPECT_EQ(std::memcmp(&v, &b.params.at(name), sizeof v), 0) << name;
  req.seed = 10;
  const Instance c = instantiate(catalog(), req);
  EXPECT_NE(c.params.at("t1"), a.params.at("t1"));
}

TEST(SampleParams, VanishingWindowOnTheUnitCircleIsInfeasible) {
  const IntegralSpec spec = tmpl::build_integral(Json::parse(R"({"groups": [{"name": "y", "dim": "1", "kernel": "I"}],
      "factors": [{"each": ["t{1..4}"], "slots": ["y"]}]})"),
                                                 {});
  SamplingProblem prob;
  prob.entry = "vanishing_4param";
  prob.base = {0.2, 0.2};
  prob.relations.add({Monomial::parse("t1*t2*t3*t4"), Monomial::parse("1"), "t4"});
  for (const char* name : {"t1", "t2", "t3"}) prob.window.params.push_back({name, Monomial(), Rational(1), 0.6, 0.3, {}});
  prob.unit_specs = {&spec};
  try {
    check_window_feasible(prob);
    FAIL() << "expected an infeasible window";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::infeasible);
  }
  EXPECT_THROW(sample_params(prob, 1), Error);
}

TEST(SampleParams, CompleteAssignmentSolvesEliminatedAndDerived) {
  RelationSet rel;
  rel.add({Monomial::parse("t^2*a*b"), Monomial::parse("p*q"), "b"});
  const std::map<std::string, Monomial, std::less<>> derived{{"s", Monomial::parse("p^1/2*t^-1")}};
  const Base base{0.25, 0.16};
  const Assignment full = complete_assignment({{"t", 0.5}, {"a", cplx(0.3, 0.4)}}, rel, derived, base);
  EXPECT_LE(std::abs(full.at("b") - 0.04 / (0.25 * cplx(0.3, 0.4))), 1e-15);
  EXPECT_LE(std::abs(full.at("s") - 1.0), 1e-15);
}

// Every entry at every suite case: accepted samples keep the contour margin
// and the sampler accepts at least half of its draws.
TEST(SampleParams, AcceptanceRateAndMarginAcrossTheCatalog) {
  for (const auto& e : catalog().entries()) {
    std::set<std::tuple<int, int, std::string>> cases;
    for (const auto& [suite, list] : e.suites)
      for (const auto& c : list) cases.insert({c.n, c.m, c.form});
    for (const auto& [n, m, form] : cases) {
      long attempts = 0;
      const int seeds = 20;
      for (int seed = 1; seed <= seeds; ++seed) {
        InstanceRequest req;
        req.identity = e.name;
        req.n = n;
        req.m = m;
        req.form = form;
        req.seed = seed;
        const Instance inst = instantiate(catalog(), req);
        attempts += inst.sample_attempts;
        if (e.kind == EntryKind::transform) {
          EXPECT_TRUE(inst.lhs_contour.ok);
          EXPECT_TRUE(inst.rhs_contour.ok);
          EXPECT_GE(inst.lhs_contour.min_margin, e.margin - 1e-12) << e.name << " seed " << seed;
          EXPECT_GE(inst.rhs_contour.min_margin, e.margin - 1e-12) << e.name << " seed " << seed;
        }
      }
      EXPECT_GE(double(seeds) / attempts, 0.5) << e.name << " n=" << n << " m=" << m;
    }
  }
}

}  // namespace
}  // namespace ellhyp
