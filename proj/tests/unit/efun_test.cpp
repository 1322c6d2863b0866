// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "ellhyp/efun.hpp"
#include "ellhyp/error.hpp"

namespace ellhyp {
namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

TEST(Qpoch1, TrivialValues) {
  EXPECT_EQ(qpoch1(0.0, 0.5), cplx(1.0));
  EXPECT_EQ(qpoch1(1.0, 0.5), cplx(0.0));
}

TEST(Qpoch1, MatchesReversedHighCutoffProduct) {
  cplx oracle = 1.0;
  for (int k = 120; k >= 0; --k) oracle *= 1.0 - std::pow(0.5, k) * 0.5;
  TruncationPolicy tight;
  tight.cutoff = 1e-20;
  EXPECT_LE(rel(qpoch1(0.5, 0.5), oracle), 1e-15);
  EXPECT_LE(rel(qpoch1(0.5, 0.5, tight), oracle), 1e-15);
}

TEST(Poch2, TrivialValues) {
  const Base b{0.3, 0.2};
  EXPECT_EQ(poch2(0.0, b), cplx(1.0));
  EXPECT_EQ(poch2(1.0, b), cplx(0.0));
}

TEST(Poch2, MatchesLogSpaceSum) {
  const cplx x(0.3, 0.1);
  const double p = 0.3, q = 0.2;
  cplx log_sum = 0.0;
  for (int r = 0; r < 60; ++r)
    for (int s = 0; s < 60; ++s) log_sum += std::log(1.0 - std::pow(p, r) * std::pow(q, s) * x);
  ProductStats stats;
  const cplx v = poch2(x, {p, q}, {}, &stats);
  EXPECT_LE(rel(v, std::exp(log_sum)), 1e-14);
  EXPECT_GT(stats.terms, 0u);
  EXPECT_LE(stats.tail_bound, 1e-17);
}

TEST(Egamma, ReflectionFixedPoint) {
  EXPECT_NEAR(std::abs(egamma(0.2, {0.25, 0.16}) - 1.0), 0.0, 1e-15);
}

TEST(Egamma, ReflectionAtAPoint) {
  const Base b{0.3, 0.2};
  const cplx x(0.3, 0.1);
  EXPECT_LE(std::abs(egamma(x, b) * egamma(b.p * b.q / x, b) - 1.0), 1e-14);
}

TEST(Egamma, PoleIsAnError) {
  try {
    egamma(1.0, {0.3, 0.2});
    FAIL() << "expected a pole error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::pole);
  }
  EXPECT_THROW(egamma(1.0 / 0.3, {0.3, 0.2}), Error);
  EXPECT_NO_THROW(egamma(1.0 + 1e-9, {0.3, 0.2}));
}

TEST(Egamma, ReciprocalIsFiniteAtPoles) {
  const Base b{0.3, 0.2};
  EXPECT_EQ(egamma_reciprocal(1.0, b), cplx(0.0));
  const cplx x(0.4, -0.2);
  EXPECT_LE(rel(egamma_reciprocal(x, b), 1.0 / egamma(x, b)), 1e-15);
}

TEST(Egamma, ReflectionOverRandomPoints) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mod(0.1, 0.9), arg(-3.14159, 3.14159), bmod(0.05, 0.35);
  for (int k = 0; k < 200; ++k) {
    const Base b{std::polar(bmod(rng), arg(rng)), std::polar(bmod(rng), arg(rng))};
    const cplx x = std::polar(mod(rng), arg(rng));
    EXPECT_LE(std::abs(egamma(x, b) * egamma(b.p * b.q / x, b) - 1.0), 1e-12) << x;
  }
}

TEST(EgammaVariant, BaseQSquaredSplit) {
  const Base b{0.3, 0.25};
  const cplx x = 0.4;
  const cplx lhs = egamma(x, b);
  const cplx rhs = egamma_variant(x, b, GammaVariant::PQ2) * egamma_variant(b.q * x, b, GammaVariant::PQ2);
  EXPECT_LE(rel(lhs, rhs), 1e-12);
}

TEST(EgammaVariant, HalfBaseProduct) {
  const Base b{0.3, 0.25};
  const cplx x = 0.35, sp = std::sqrt(b.p), sq = std::sqrt(b.q);
  const cplx lhs = egamma_variant(x, b, GammaVariant::HALF);
  const cplx rhs = egamma(x, b) * egamma(sq * x, b) * egamma(sp * x, b) * egamma(sp * sq * x, b);
  EXPECT_LE(rel(lhs, rhs), 1e-12);
}

TEST(EgammaVariant, SquareRootSplit) {
  const Base b{0.3, 0.25};
  const cplx x = 0.5, r = std::sqrt(x);
  const cplx rhs = egamma_variant(r, b, GammaVariant::HALF) * egamma_variant(-r, b, GammaVariant::HALF);
  EXPECT_LE(rel(egamma(x, b), rhs), 1e-12);
}

TEST(EgammaVariant, HalfRejectsComplexBaseUnlessAsked) {
  const Base b{cplx(0.2, 0.1), 0.25};
  EXPECT_THROW(egamma_variant(0.3, b, GammaVariant::HALF), Error);
  EXPECT_NO_THROW(egamma_variant(0.3, b, GammaVariant::HALF, {}, true));
  EXPECT_NO_THROW(egamma_variant(0.3, b, GammaVariant::PQ2));
}

TEST(EgammaVariant, Names) {
  for (auto v : {GammaVariant::PQ, GammaVariant::PQ2, GammaVariant::HALF}) EXPECT_EQ(parse_variant(variant_name(v)), v);
  EXPECT_THROW(parse_variant("pq3"), Error);
}

TEST(Truncation, HalvingTheCutoffBarelyMoves) {
  const Base b{0.3, 0.2};
  for (const cplx x : {cplx(0.4, 0.2), cplx(-0.7, 0.1), cplx(0.05, -0.3)}) {
    TruncationPolicy a, h;
    a.cutoff = 1e-8;
    h.cutoff = 0.5e-8;
    EXPECT_LE(rel(egamma(x, b, a), egamma(x, b, h)), 20 * a.cutoff);
  }
}

TEST(Truncation, PolicyAndBaseValidation) {
  TruncationPolicy bad;
  bad.cutoff = 1e-6;
  EXPECT_THROW(bad.validate(), Error);
  EXPECT_THROW(egamma(0.3, {1.0, 0.2}), Error);
  EXPECT_THROW(egamma(0.3, {0.2, 0.0}), Error);
  TruncationPolicy capped;
  capped.max_terms = 3;
  EXPECT_THROW(poch2(0.5, {0.9, 0.9}, capped), Error);
}

}  // namespace
}  // namespace ellhyp
