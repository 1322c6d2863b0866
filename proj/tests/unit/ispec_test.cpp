// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "ellhyp/error.hpp"
#include "ellhyp/ispec.hpp"
#include "ellhyp/json_io.hpp"
#include "ellhyp/templates.hpp"

namespace ellhyp {
namespace {

const Base kBase{0.2, 0.2};

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

IntegralSpec spec_from(const char* text, VarBindings vars = {}) {
  return tmpl::build_integral(Json::parse(text), vars);
}

const char* kBeta = R"({"groups": [{"name": "z", "dim": "1", "kernel": "I"}],
                        "factors": [{"each": ["t{1..6}"], "slots": ["z"]}]})";

RelationSet beta_relation() {
  RelationSet rel;
  rel.add({Monomial::parse("t1*t2*t3*t4*t5*t6"), Monomial::parse("p*q"), "t6"});
  return rel;
}

Assignment beta_params() {
  Assignment a{{"t1", cplx(0.6, 0.2)}, {"t2", cplx(-0.5, 0.4)}, {"t3", 0.65}, {"t4", cplx(0.1, -0.6)}, {"t5", 0.62}};
  cplx prod = 1.0;
  for (const auto& [k, v] : a) prod *= v;
  a["t6"] = kBase.p * kBase.q / prod;
  return a;
}

cplx beta_closed_form(const Assignment& a) {
  cplx r = 1.0;
  for (int i = 1; i <= 6; ++i)
    for (int j = i + 1; j <= 6; ++j) r *= egamma(a.at("t" + std::to_string(i)) * a.at("t" + std::to_string(j)), kBase);
  return r;
}

TEST(Balancing, EllipticBetaHolds) {
  IntegralSpec s = spec_from(kBeta);
  s.balancing = beta_relation();
  const BalanceReport r = validate_balancing(s, beta_params(), kBase);
  EXPECT_TRUE(r.ok);
  EXPECT_LE(r.max_residual, 1e-14);
}

TEST(Balancing, PerturbationIsReported) {
  IntegralSpec s = spec_from(kBeta);
  s.balancing = beta_relation();
  Assignment a = beta_params();
  a["t6"] *= 1.0 + 1e-6;
  const BalanceReport r = validate_balancing(s, a, kBase);
  EXPECT_FALSE(r.ok);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_NEAR(r.violations[0].residual, 1e-6, 1e-8);
}

TEST(Balancing, SelbergTwoVariablesSolvedForTheLastParameter) {
  IntegralSpec s = spec_from(R"({"groups": [{"name": "z", "dim": "2", "kernel": "II", "t": "t"}],
                                 "factors": [{"each": ["t{1..8}"], "slots": ["z"]}]})");
  s.balancing = RelationSet(tmpl::build_relations(
      Json::parse(R"([{"lhs": ["t^2", "t{1..8}"], "rhs": "p^2*q^2", "eliminate": "t8"}])"), {}));
  Assignment a{{"t", 0.3}};
  cplx prod = 0.09;
  for (int r = 1; r <= 7; ++r) {
    a["t" + std::to_string(r)] = std::polar(0.7, 0.4 * r);
    prod *= a["t" + std::to_string(r)];
  }
  a["t8"] = std::pow(kBase.p * kBase.q, 2) / prod;
  EXPECT_TRUE(validate_balancing(s, a, kBase).ok);
}

TEST(ContourOk, SmallCoefficientsPass) {
  const IntegralSpec s = spec_from(kBeta);
  Assignment a;
  for (int r = 1; r <= 6; ++r) a["t" + std::to_string(r)] = std::polar(0.8, r * 1.0);
  EXPECT_TRUE(contour_ok(s, a, kBase).ok);
}

TEST(ContourOk, LargeCoefficientIsNamed) {
  const IntegralSpec s = spec_from(kBeta);
  Assignment a;
  for (int r = 1; r <= 6; ++r) a["t" + std::to_string(r)] = 0.5;
  a["t3"] = 1.05;
  const ContourReport r = contour_ok(s, a, kBase);
  EXPECT_FALSE(r.ok);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_NE(r.violations[0].item.find("t3"), std::string::npos);
  EXPECT_NEAR(r.violations[0].modulus, 1.05, 1e-15);
}

TEST(ContourOk, TypeTwoKernelNeedsSmallT) {
  const IntegralSpec s = spec_from(R"({"groups": [{"name": "z", "dim": "2", "kernel": "II", "t": "t"}], "factors": []})");
  EXPECT_FALSE(contour_ok(s, {{"t", 1.2}}, kBase).ok);
  EXPECT_TRUE(contour_ok(s, {{"t", 0.5}}, kBase).ok);
}

TEST(BuildDensity, OnlyEmptyGroupsGiveAConstant) {
  const IntegralSpec s = spec_from(R"({"groups": [{"name": "z", "dim": "n-1", "kernel": "II", "t": "t"}],
                                       "factors": [{"coef": "t^2"}]})",
                                   {{"n", 1}});
  const Assignment a{{"t", 0.3}};
  const Integrand f = build_density(s, a, kBase);
  EXPECT_EQ(f.dim(), 0);
  EXPECT_LE(rel(f.constant(), egamma(0.09, kBase)), 1e-15);
  const QuadResult q = eval_integral(s, a, kBase);
  EXPECT_EQ(q.value, f.constant());
}

TEST(BuildDensity, EllipticBetaVanishesAtOne) {
  IntegralSpec s = spec_from(kBeta);
  s.balancing = beta_relation();
  const Integrand f = build_density(s, beta_params(), kBase);
  const std::vector<cplx> one{1.0};
  EXPECT_EQ(f(one), cplx(0.0));
}

TEST(BuildDensity, MixedBaseIntegrandIsFinite) {
  const IntegralSpec s = spec_from(R"({"groups": [{"name": "z", "dim": "2", "kernel": "II", "t": "t"}],
      "factors": [{"each": ["t{1..4}"], "slots": ["z"]},
                  {"coef": "p^1/2*q^1/2*t^-1/2", "each": ["v", "v^-1"], "slots": ["z"]},
                  {"variant": "pq2", "coef": "t", "slots": ["z^2"]}]})");
  const Assignment a{{"t", 0.5}, {"t1", 0.4}, {"t2", cplx(0.1, 0.3)}, {"t3", -0.5}, {"t4", 0.6}, {"v", cplx(0.8, 0.3)}};
  const Integrand f = build_density(s, a, {0.3, 0.25});
  const std::vector<cplx> z{std::polar(1.0, 0.7), std::polar(1.0, -2.2)};
  const cplx v = f(z);
  EXPECT_TRUE(std::isfinite(v.real()) && std::isfinite(v.imag()));
  EXPECT_GT(std::abs(v), 0.0);
  // The grid tables agree with direct evaluation.
  const IndexDensity g = f.on_grid(16);
  const std::vector<int> k{3, 11};
  const std::vector<cplx> zk{std::polar(1.0, 2 * 3.14159265358979323846 * 3 / 16),
                             std::polar(1.0, 2 * 3.14159265358979323846 * 11 / 16)};
  EXPECT_LE(rel(g(k), f(zk)), 1e-12);
}

TEST(BuildDensity, RejectsUnbalancedOrOutsideParameters) {
  IntegralSpec s = spec_from(kBeta);
  s.balancing = beta_relation();
  Assignment a = beta_params();
  a["t6"] *= 1.01;
  EXPECT_THROW(build_density(s, a, kBase), Error);
}

TEST(EvalIntegral, EllipticBetaMatchesClosedForm) {
  IntegralSpec s = spec_from(kBeta);
  s.balancing = beta_relation();
  const Assignment a = beta_params();
  const QuadResult q = eval_integral(s, a, kBase);
  EXPECT_TRUE(q.converged);
  EXPECT_LE(q.grids_used.back().sizes[0], 256);
  EXPECT_LE(rel(q.value, beta_closed_form(a)), 1e-10);
}

TEST(EvalIntegral, DixonIsSymmetricInItsParameters) {
  const VarBindings n2{{"n", 2}};
  IntegralSpec s = spec_from(R"({"groups": [{"name": "z", "dim": "n", "kernel": "I"}],
                                 "factors": [{"each": ["t{1..2*n+4}"], "slots": ["z"]}]})",
                             n2);
  Assignment a;
  cplx prod = 1.0;
  for (int r = 1; r <= 7; ++r) {
    a["t" + std::to_string(r)] = std::polar(0.55 + 0.03 * r, 0.9 * r);
    prod *= a["t" + std::to_string(r)];
  }
  a["t8"] = kBase.p * kBase.q / prod;
  const cplx v = eval_integral(s, a, kBase).value;
  Assignment b = a;
  std::swap(b["t1"], b["t5"]);
  std::swap(b["t2"], b["t8"]);
  EXPECT_LE(rel(eval_integral(s, b, kBase).value, v), 1e-11);
}

TEST(EvalIntegral, IteratedEqualsJointOnUnitCircles) {
  const IntegralSpec s = spec_from(R"({"groups": [{"name": "y", "dim": "1", "kernel": "I"}, {"name": "z", "dim": "1", "kernel": "I"}],
      "factors": [{"coef": "a", "slots": ["y", "z"]}, {"each": ["b1", "b2", "b3"], "slots": ["y"]},
                  {"each": ["c1", "c2"], "slots": ["z"]}]})");
  const Assignment a{{"a", 0.4}, {"b1", cplx(0.3, 0.2)}, {"b2", -0.5}, {"b3", 0.35}, {"c1", cplx(0.1, 0.6)}, {"c2", 0.5}};
  const Base b{0.15, 0.25};
  const cplx joint = torus_average(build_density(s, a, b).on_grid(64), 2, 64);
  const cplx yz = eval_integral_iterated(s, a, b, {"y", "z"}, 64);
  const cplx zy = eval_integral_iterated(s, a, b, {"z", "y"}, 64);
  EXPECT_LE(rel(yz, joint), 1e-12);
  EXPECT_LE(rel(zy, joint), 1e-12);
}

TEST(EvalIntegral, EmptyGroupComposes) {
  const VarBindings n1{{"n", 1}};
  IntegralSpec with = spec_from(R"({"groups": [{"name": "w", "dim": "n-1", "kernel": "II", "t": "t"},
                                                {"name": "z", "dim": "1", "kernel": "I"}],
                                    "factors": [{"each": ["t{1..6}"], "slots": ["z"]}]})",
                                n1);
  IntegralSpec without = spec_from(kBeta);
  with.balancing = beta_relation();
  without.balancing = beta_relation();
  Assignment a = beta_params();
  a["t"] = 0.3;
  EXPECT_EQ(eval_integral(with, a, kBase).value, eval_integral(without, a, kBase).value);
}

TEST(Prefactor, Examples) {
  const Assignment a{{"t", 0.3}, {"t1", 0.5}, {"t2", cplx(0.2, 0.4)}, {"t3", 0.6}, {"t4", -0.3}};
  EXPECT_EQ(eval_prefactor(PrefactorSpec{}, a, kBase, 1), cplx(1.0));
  const PrefactorSpec one = tmpl::build_prefactor(
      Json::parse(R"j([{"coef": "t^(2*i)", "pairs": ["t1", "t2"], "index": {"var": "i", "from": "0", "to": "0"}}])j"), {});
  EXPECT_LE(rel(eval_prefactor(one, a, kBase, 1), egamma(a.at("t1") * a.at("t2"), kBase)), 1e-15);
  const PrefactorSpec thm = tmpl::build_prefactor(
      Json::parse(R"j([{"coef": "t^(2*i)", "pairs": ["t{1..4}"], "index": {"var": "i", "from": "0", "to": "n-1"}}])j"),
      {{"n", 2}});
  EXPECT_EQ(prefactor_factor_count(thm, {{"n", 2}}), 12u);
}

TEST(SpecJson, RoundTrips) {
  IntegralSpec s = spec_from(R"({"groups": [{"name": "z", "dim": "2", "kernel": "II", "t": "t^2", "variant": "pq2"}],
      "factors": [{"variant": "half", "coef": "-p^1/4*t^-1/2", "each": ["v", "v^-1"], "slots": ["z"]},
                  {"coef": "t", "slots": ["z^2"]}]})");
  s.balancing = RelationSet({{Monomial::parse("t*v"), Monomial::parse("p"), "v"}});
  const Json j = integral_to_json(s);
  const IntegralSpec back = integral_from_json(j);
  EXPECT_EQ(integral_to_json(back), j);
  EXPECT_EQ(back.factors, s.factors);
  EXPECT_THROW(integral_from_json(Json::parse(R"({"groups": 3})")), Error);
}

TEST(SpecValidate, Rejections) {
  const char* duplicate = R"({"groups": [{"name": "z", "dim": "1", "kernel": "I"}, {"name": "z", "dim": "1", "kernel": "I"}],
                              "factors": []})";
  const char* unknown = R"({"groups": [{"name": "z", "dim": "1", "kernel": "I"}],
                            "factors": [{"coef": "a", "slots": ["w"]}]})";
  EXPECT_THROW(spec_from(duplicate).validate(), Error);
  EXPECT_THROW(spec_from(unknown).validate(), Error);
}

}  // namespace
}  // namespace ellhyp
