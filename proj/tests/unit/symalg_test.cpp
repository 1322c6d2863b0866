// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "ellhyp/error.hpp"
#include "ellhyp/rational.hpp"
#include "ellhyp/symalg.hpp"

namespace ellhyp {
namespace {

Monomial M(const char* s) { return Monomial::parse(s); }

TEST(Rational, NormalizesAndParses) {
  EXPECT_EQ(Rational(4, -8), Rational(-1, 2));
  EXPECT_EQ(Rational::parse("+4/8"), Rational(1, 2));
  EXPECT_EQ(Rational::parse("-3"), Rational(-3));
  EXPECT_EQ((Rational(1, 3) + Rational(1, 6)).str(), "1/2");
  EXPECT_THROW(Rational(1, 0), Error);
  EXPECT_THROW(Rational::parse("1/x"), Error);
}

TEST(AffineExpr, EvaluatesTemplates) {
  const AffineExpr e = AffineExpr::parse("2*n+4");
  EXPECT_EQ(e.evaluate_int({{"n", 3}}), 10);
  EXPECT_EQ(AffineExpr::parse("n/2-1").evaluate({{"n", 3}}), Rational(1, 2));
  EXPECT_THROW(AffineExpr::parse("n/2").evaluate_int({{"n", 3}}), Error);
}

TEST(MonoMul, InversePairCancels) {
  const Monomial r = M("t") * M("t^-1");
  EXPECT_TRUE(r.is_one());
  EXPECT_EQ(r.phase_eighths(), 0);
}

TEST(MonoMul, SignSquaresAway) {
  const Monomial r = M("-t4") * M("-t4");
  EXPECT_EQ(r, M("t4^2"));
  EXPECT_EQ(r.phase_eighths(), 0);
}

TEST(MonoMul, HalfPowersCombine) { EXPECT_EQ(M("p^1/2*q^1/2") * M("p^1/2*q^1/2"), M("p*q")); }

TEST(MonoRoot, Examples) {
  EXPECT_EQ(mono_root(M("p*q*t^-1"), 2), M("p^1/2*q^1/2*t^-1/2"));
  EXPECT_EQ(mono_root(M("t"), 4), M("t^1/4"));
  const Monomial r = mono_root(M("-t"), 2);
  EXPECT_EQ(r.phase(), Rational(1, 4));
  EXPECT_EQ(r, M("i*t^1/2"));
}

TEST(MonoRoot, LeavingTheGridThrows) { EXPECT_THROW(mono_root(M("t^1/8"), 2), Error); }

TEST(MonoEval, Examples) {
  const Assignment a{{"t", 0.5}, {"p", 0.25}};
  EXPECT_DOUBLE_EQ(mono_eval(M("t^2"), a).real(), 0.25);
  EXPECT_DOUBLE_EQ(mono_eval(M("-t"), a).real(), -0.5);
  EXPECT_DOUBLE_EQ(mono_eval(M("p^1/2"), a).real(), 0.5);
  EXPECT_THROW(mono_eval(M("u"), a), Error);
}

TEST(MonoEval, PrincipalPowerOfNegativeReal) {
  const cplx v = mono_eval(M("t^1/2"), {{"t", -4.0}});
  EXPECT_NEAR(v.real(), 0.0, 1e-15);
  EXPECT_NEAR(v.imag(), 2.0, 1e-15);
}

TEST(MonoEval, IsAHomomorphism) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> e8(-32, 32), ph(0, 7);
  std::uniform_real_distribution<double> mod(0.3, 1.7), arg(-3.1, 3.1);
  const char* gens[] = {"t", "u", "p", "q"};
  for (int trial = 0; trial < 500; ++trial) {
    Assignment vals;
    for (const char* g : gens) vals[g] = std::polar(mod(rng), arg(rng));
    auto random_mono = [&] {
      Monomial m = Monomial::phase_turns(Rational(ph(rng), 8));
      for (const char* g : gens) m = m * Monomial::generator(g, Rational(e8(rng), 8));
      return m;
    };
    const Monomial a = random_mono(), b = random_mono();
    // Fractional powers use principal logs, so the homomorphism holds up to
    // the branch factor; integer exponents must agree exactly.
    Monomial ai = Monomial::phase_turns(a.phase()), bi = Monomial::phase_turns(b.phase());
    for (const auto& [g, e] : a.eighths()) ai = ai * Monomial::generator(g, Rational(e / 8 * 8, 8));
    for (const auto& [g, e] : b.eighths()) bi = bi * Monomial::generator(g, Rational(e / 8 * 8, 8));
    const cplx lhs = mono_eval(ai * bi, vals), rhs = mono_eval(ai, vals) * mono_eval(bi, vals);
    EXPECT_LE(std::abs(lhs - rhs), 1e-14 * std::abs(rhs));
    // With positive real generators every rational power is branch free.
    Assignment pos;
    for (const char* g : gens) pos[g] = mod(rng);
    const cplx l2 = mono_eval(a * b, pos), r2 = mono_eval(a, pos) * mono_eval(b, pos);
    EXPECT_LE(std::abs(l2 - r2), 1e-14 * std::abs(r2));
  }
}

TEST(MonomialGrammar, RoundTrips) {
  for (const char* s : {"1", "-1", "i", "-i", "e(3/8)", "t", "t^2", "t^-1", "t^1/2", "p^-3/4", "-t^2", "i*t",
                        "e(1/8)*p^1/2*q", "p^1/2*q^1/2*t^-1/2"}) {
    const Monomial m = M(s);
    EXPECT_EQ(Monomial::parse(m.str()), m) << s;
  }
  EXPECT_EQ(M("-t^2").str(), "-t^2");
  EXPECT_EQ(M("q*p").str(), M("p*q").str());
  EXPECT_THROW(M("t^"), Error);
  EXPECT_THROW(M("t^1/16"), Error);
}

RelationSet quad_q2_balancing(int n) {
  RelationSet rel;
  rel.add({M("t1*t2*t3*t4") * Monomial::generator("t", Rational(2 * n - 1)), M("p*q^2"), "t4"});
  return rel;
}

TEST(RelationsReduce, EliminatesTheDesignatedGenerator) {
  const RelationSet rel = quad_q2_balancing(1);
  EXPECT_EQ(relations_reduce(M("t4"), rel), M("p*q^2*t^-1*t1^-1*t2^-1*t3^-1"));
  EXPECT_EQ(relations_reduce(M("t1"), rel), M("t1"));
  EXPECT_EQ(relations_reduce(M("t4^2"), rel), M("p^2*q^4*t^-2*t1^-2*t2^-2*t3^-2"));
}

TEST(RelationsReduce, IdempotentAndMultiplicative) {
  RelationSet rel = quad_q2_balancing(2);
  rel.add({M("u1*u2*t^2"), M("p*q"), "u2"});
  const Monomial a = M("t4^3*u2*t^1/2"), b = M("-t4^-1*u1*p");
  const Monomial ra = relations_reduce(a, rel);
  EXPECT_EQ(relations_reduce(ra, rel), ra);
  EXPECT_EQ(relations_reduce(a * b, rel), ra * relations_reduce(b, rel));
}

TEST(RelationSet, RejectsBadRelations) {
  RelationSet rel;
  EXPECT_THROW(rel.add({M("t1*t2"), M("p"), "t3"}), Error);
  rel.add({M("t1*t2"), M("p"), "t2"});
  EXPECT_THROW(rel.add({M("t2*t3"), M("q"), "t2"}), Error);
}

TEST(LatticeMembership, Examples) {
  EXPECT_EQ(lattice_membership(M("1")), LatticeVerdict::inside);
  EXPECT_EQ(lattice_membership(M("p^-2")), LatticeVerdict::inside);
  EXPECT_EQ(lattice_membership(M("p^-1*q^-3")), LatticeVerdict::inside);
  EXPECT_EQ(lattice_membership(M("p*q*t^3")), LatticeVerdict::outside);
  EXPECT_EQ(lattice_membership(M("p")), LatticeVerdict::outside);
  EXPECT_EQ(lattice_membership(M("p^-1/2")), LatticeVerdict::outside);
  EXPECT_EQ(lattice_membership(M("-p^-1")), LatticeVerdict::outside);
}

TEST(LatticeMembership, InsideMeansExactLatticeValue) {
  const Assignment v{{"p", 0.3}, {"q", 0.2}, {"t", 0.7}};
  for (const char* s : {"p^-2*q^-1", "q^-3", "1"}) {
    const Monomial m = M(s);
    ASSERT_EQ(lattice_membership(m), LatticeVerdict::inside);
    const double expect = std::pow(0.3, m.exponent("p").to_double()) * std::pow(0.2, m.exponent("q").to_double());
    const cplx got = mono_eval(m, v);
    // No phase and no other generator can leak in: the value is a real lattice point.
    EXPECT_EQ(got.imag(), 0.0);
    EXPECT_NEAR(got.real(), expect, 4e-16 * expect);
  }
}

TEST(MonomialTemplate, EvaluatesAffineExponents) {
  const MonomialTemplate t = MonomialTemplate::parse("-p^1/2*t^(1-n/2)");
  EXPECT_EQ(t.evaluate({{"n", 4}}), M("-p^1/2*t^-1"));
  EXPECT_EQ(t.evaluate({{"n", 3}}), M("-p^1/2*t^-1/2"));
  EXPECT_FALSE(t.is_constant());
}

}  // namespace
}  // namespace ellhyp
