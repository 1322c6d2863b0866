// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "ellhyp/catalog.hpp"
#include "ellhyp/error.hpp"

namespace ellhyp {
namespace {

const Catalog& catalog() {
  static const Catalog c = Catalog::load(Catalog::default_dir());
  return c;
}

InstanceRequest request(const char* name, int n = 1, int m = 0, std::uint64_t seed = 1) {
  InstanceRequest r;
  r.identity = name;
  r.n = n;
  r.m = m;
  r.seed = seed;
  return r;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::invalid_argument;
}

TEST(Catalog, ListsTheRegistry) {
  const auto list = catalog().list_identities();
  auto has = [&](const char* n) {
    return std::any_of(list.begin(), list.end(), [&](const IdentityInfo& i) { return i.name == n; });
  };
  EXPECT_TRUE(has("elliptic_beta"));
  EXPECT_TRUE(has("quad_half"));
  for (const char* n : {"dixon_eval", "dixon_transform", "selberg_e7", "dim_change", "induction_enabler",
                        "almost_selberg", "as_extended", "quad_q2", "corollary_q1", "vanishing_4param"})
    EXPECT_TRUE(has(n)) << n;
  EXPECT_GE(list.size(), 13u);
  for (const auto& i : list) EXPECT_FALSE(i.anchor.empty()) << i.name;
}

TEST(Catalog, LookupErrors) {
  EXPECT_EQ(code_of([] { catalog().find("nope"); }), ErrorCode::not_found);
  EXPECT_EQ(code_of([] { instantiate(catalog(), request("elliptic_beta", 2)); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] { instantiate(catalog(), request("dixon_transform", 2, 2)); }), ErrorCode::invalid_argument);
  InstanceRequest r = request("quad_q2");
  r.base = Base{cplx(0.1, 0.05), 0.3};
  EXPECT_EQ(code_of([&] { instantiate(catalog(), r); }), ErrorCode::invalid_argument);
  InstanceRequest s = request("selberg_e7");
  s.signs = {{"s", 2}};
  EXPECT_EQ(code_of([&] { instantiate(catalog(), s); }), ErrorCode::invalid_argument);
  InstanceRequest f = request("almost_selberg");
  f.form = "fourth";
  EXPECT_EQ(code_of([&] { instantiate(catalog(), f); }), ErrorCode::not_found);
}

TEST(Catalog, DuplicateEntriesAreRejected) {
  Catalog c;
  c.add(catalog().find("elliptic_beta"));
  EXPECT_THROW(c.add(catalog().find("elliptic_beta")), Error);
}

TEST(Catalog, MalformedEntryFile) {
  const auto dir = std::filesystem::temp_directory_path() / "ellhyp_catalog_test_bad";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "bad.json") << "{\"name\": \"x\", \"kind\": \"transform\"";
  EXPECT_EQ(code_of([&] { Catalog::load(dir.string()); }), ErrorCode::parse);
  std::filesystem::remove_all(dir);
}

TEST(Instantiate, GivenParametersSolveTheBalancing) {
  InstanceRequest r = request("elliptic_beta");
  r.base = Base{0.2, 0.2};
  r.params = Assignment{{"t1", 0.55}, {"t2", 0.55}, {"t3", 0.55}, {"t4", 0.55}, {"t5", 0.55}};
  const Instance inst = instantiate(catalog(), r);
  EXPECT_FALSE(inst.sampled);
  const cplx t6 = inst.params.at("t6");
  EXPECT_NEAR(t6.real(), 0.04 / std::pow(0.55, 5), 1e-14);
  EXPECT_LT(std::abs(t6), 1.0);
  r.params->erase("t5");
  EXPECT_THROW(instantiate(catalog(), r), Error);
}

TEST(Instantiate, CorollaryDelegatesToQuadHalf) {
  const Instance inst = instantiate(catalog(), request("corollary_q1", 1));
  ASSERT_TRUE(inst.delegate);
  EXPECT_EQ(inst.delegate->entry.name, "quad_half");
  const Assignment& a = inst.params;
  const Assignment& d = inst.delegate_params;
  const cplx p = inst.base.p, q = inst.base.q, t = a.at("t");
  for (const char* r : {"t1", "t2", "t3"}) EXPECT_LE(std::abs(d.at(r) - a.at(r) * a.at(r)), 1e-15);
  // The delegate solves its own balancing for t4, which lands on t t4^2.
  EXPECT_LE(std::abs(inst.delegate->params.at("t4") - t * a.at("t4") * a.at("t4")), 1e-14);
  const cplx v = cplx(0, 1) * a.at("t4") * std::pow(t / (p * q), 0.25);
  EXPECT_LE(std::abs(d.at("v") - v), 1e-14);
}

TEST(Instantiate, QuadQ2FollowsItsWindowHint) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance inst = instantiate(catalog(), request("quad_q2", 1, 0, seed));
    const double p = inst.base.p.real(), q = inst.base.q.real(), t = std::abs(inst.params.at("t"));
    const double hint = std::pow(p, 0.25) * std::sqrt(q) * std::pow(t, -0.25);
    for (const char* r : {"t1", "t2", "t3"}) {
      const double ratio = std::abs(inst.params.at(r)) / hint;
      EXPECT_GE(ratio, std::exp(-0.1) - 1e-12);
      EXPECT_LE(ratio, std::exp(0.1) + 1e-12);
    }
  }
}

TEST(Verify, EllipticBeta) {
  InstanceRequest r = request("elliptic_beta");
  r.base = Base{0.2, 0.2};
  const VerificationReport rep = verify(instantiate(catalog(), r));
  EXPECT_EQ(rep.verdict, Verdict::pass);
  EXPECT_LE(rep.rel_err, 1e-10);
  EXPECT_LE(rep.lhs.grids.back(), 256);
  EXPECT_FALSE(rep.seconds.has_value());
}

TEST(Verify, DixonTransformOneOne) {
  const VerificationReport rep = verify(instantiate(catalog(), request("dixon_transform", 1, 1)));
  EXPECT_EQ(rep.verdict, Verdict::pass);
  EXPECT_LE(rep.rel_err, 1e-8);
}

TEST(Verify, SelbergBothSigns) {
  for (int sign : {1, -1}) {
    InstanceRequest r = request("selberg_e7");
    r.signs = {{"s", sign}};
    const VerificationReport rep = verify(instantiate(catalog(), r));
    EXPECT_EQ(rep.verdict, Verdict::pass) << sign;
    EXPECT_LE(rep.rel_err, 1e-8) << sign;
  }
}

TEST(Verify, VanishingIsMeasuredAgainstScale) {
  const VerificationReport rep = verify(instantiate(catalog(), request("vanishing_4param")));
  EXPECT_EQ(rep.verdict, Verdict::pass);
  EXPECT_LE(rep.rel_err, 1e-8);
  EXPECT_GT(rep.extras.at("scale").get<double>(), 0.0);
}

TEST(Verify, PermutingParametersLeavesTheSidesUnchanged) {
  InstanceRequest r = request("dixon_eval");
  r.params = Assignment{{"t1", cplx(0.5, 0.3)}, {"t2", cplx(-0.6, 0.1)}, {"t3", 0.62}, {"t4", cplx(0.2, -0.55)},
                        {"t5", 0.58}};
  const VerificationReport a = verify(instantiate(catalog(), r));
  std::swap((*r.params)["t1"], (*r.params)["t4"]);
  std::swap((*r.params)["t2"], (*r.params)["t3"]);
  const VerificationReport b = verify(instantiate(catalog(), r));
  EXPECT_LE(std::abs(a.lhs.value - b.lhs.value), 1e-11 * std::abs(a.lhs.value));
  EXPECT_LE(std::abs(a.rhs_total - b.rhs_total), 1e-11 * std::abs(a.rhs_total));
}

TEST(Verify, CorollaryAgreesWithItsDelegate) {
  const VerificationReport rep = verify(instantiate(catalog(), request("corollary_q1", 1)));
  EXPECT_EQ(rep.verdict, Verdict::pass);
  const Json& d = rep.extras.at("delegate");
  EXPECT_EQ(d.at("identity"), "quad_half");
  EXPECT_EQ(d.at("verdict"), "pass");
  EXPECT_LE(d.at("lhs_agreement").get<double>(), 1e-10);
}

TEST(Verify, ReportsAreByteStable) {
  const Instance inst = instantiate(catalog(), request("dim_change", 1, 1, 3));
  VerifyPolicy one, many;
  one.par.threads = 1;
  many.par.threads = 4;
  EXPECT_EQ(verify(inst, one).to_json().dump(), verify(inst, many).to_json().dump());
  VerifyPolicy timed;
  timed.timing = true;
  EXPECT_TRUE(verify(inst, timed).to_json().contains("seconds"));
}

TEST(Verify, ReportFields) {
  const Json j = verify(instantiate(catalog(), request("dixon_transform", 1, 1, 5))).to_json();
  for (const char* k : {"identity", "form", "n", "m", "base", "seed", "params", "lhs", "rhs", "prefactor", "rhs_total",
                        "abs_err", "rel_err", "tolerance", "verdict"})
    EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j.at("seed"), 5);
  EXPECT_TRUE(j.at("lhs").contains("grids"));
  EXPECT_TRUE(j.at("lhs").contains("deltas"));
  EXPECT_EQ(j.at("verdict"), "pass");
}

TEST(Verify, TightPolicyReportsNoConvergence) {
  VerifyPolicy pol;
  pol.grid = ConvergencePolicy{8, 16, 1e-14};
  const VerificationReport rep = verify(instantiate(catalog(), request("dixon_eval", 1)), pol);
  EXPECT_EQ(rep.verdict, Verdict::no_converge);
}

}  // namespace
}  // namespace ellhyp
