// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "ellhyp/error.hpp"
#include "ellhyp/kernels.hpp"

namespace ellhyp {
namespace {

constexpr double kPi = 3.14159265358979323846;

cplx unit(double theta) { return std::polar(1.0, theta); }

KernelSpec kernel(KernelFamily f, int n, GammaVariant v = GammaVariant::PQ) {
  KernelSpec k;
  k.family = f;
  k.n = n;
  if (f == KernelFamily::II) k.t = Monomial::generator("t");
  k.variant = v;
  return k;
}

const Base kBase{0.2, 0.3};
const Assignment kParams{{"t", cplx(0.4, 0.1)}};

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

TEST(Kernels, TypeOneVanishesAtOne) {
  const std::vector<cplx> z{1.0};
  EXPECT_EQ(delta_density(kernel(KernelFamily::I, 1), z, kParams, kBase), cplx(0.0));
  const std::vector<cplx> w{-1.0};
  EXPECT_EQ(delta_density(kernel(KernelFamily::I, 1), w, kParams, kBase), cplx(0.0));
}

TEST(Kernels, TypeTwoInOneVariableIsGammaTTimesTypeOne) {
  const Assignment params{{"t", 0.4}};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> th(-kPi, kPi);
  for (int k = 0; k < 20; ++k) {
    const std::vector<cplx> z{unit(th(rng))};
    const cplx two = delta_density(kernel(KernelFamily::II, 1), z, params, kBase);
    const cplx one = delta_density(kernel(KernelFamily::I, 1), z, params, kBase);
    EXPECT_LE(rel(two, egamma(0.4, kBase) * one), 1e-13);
  }
}

TEST(Kernels, EmptyGroupIsOne) {
  EXPECT_EQ(n_zero_kernel(), cplx(1.0));
  const std::vector<cplx> none;
  EXPECT_EQ(delta_density(kernel(KernelFamily::I, 0), none, kParams, kBase), cplx(1.0));
  EXPECT_EQ(delta_density(kernel(KernelFamily::II, 0), none, kParams, kBase), cplx(1.0));
}

TEST(Kernels, HyperoctahedralSymmetry) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> th(-kPi, kPi);
  for (auto fam : {KernelFamily::I, KernelFamily::II}) {
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<cplx> z{unit(th(rng)), unit(th(rng)), unit(th(rng))};
      const KernelSpec k = kernel(fam, 3);
      const cplx ref = delta_density(k, z, kParams, kBase);
      std::vector<cplx> swapped{z[2], z[0], z[1]};
      std::vector<cplx> inverted{1.0 / z[0], z[1], 1.0 / z[2]};
      EXPECT_LE(rel(delta_density(k, swapped, kParams, kBase), ref), 1e-12);
      EXPECT_LE(rel(delta_density(k, inverted, kParams, kBase), ref), 1e-12);
    }
  }
}

TEST(Kernels, TwoVariableSymmetry) {
  const std::vector<cplx> z{unit(0.3), unit(1.9)};
  const KernelSpec k = kernel(KernelFamily::I, 2);
  const cplx ref = delta_density(k, z, kParams, kBase);
  const std::vector<cplx> s{z[1], z[0]}, inv{1.0 / z[0], 1.0 / z[1]};
  EXPECT_LE(rel(delta_density(k, s, kParams, kBase), ref), 1e-12);
  EXPECT_LE(rel(delta_density(k, inv, kParams, kBase), ref), 1e-12);
}

TEST(Kernels, BaseConsistencyForTheSquaredBase) {
  const Base squared{kBase.p, kBase.q * kBase.q};
  const std::vector<cplx> z{unit(0.7), unit(-2.1)};
  for (auto fam : {KernelFamily::I, KernelFamily::II}) {
    const cplx direct = delta_density(kernel(fam, 2, GammaVariant::PQ), z, kParams, squared);
    const cplx variant = delta_density(kernel(fam, 2, GammaVariant::PQ2), z, kParams, kBase);
    EXPECT_LE(rel(variant, direct), 1e-13);
  }
}

TEST(Kernels, ConstantCarriesTheNormalization) {
  // (p;p)(q;q)/2 for one variable of type I.
  const cplx c = kernel_constant(kernel(KernelFamily::I, 1), kParams, kBase);
  const cplx expect = qpoch1(kBase.p, kBase.p) * qpoch1(kBase.q, kBase.q) / 2.0;
  EXPECT_LE(rel(c, expect), 1e-15);
}

TEST(Kernels, RejectsPointsOffTheCircle) {
  const std::vector<cplx> z{1.1};
  EXPECT_THROW(delta_density(kernel(KernelFamily::I, 1), z, kParams, kBase), Error);
  EXPECT_NO_THROW(delta_value(kernel(KernelFamily::I, 1), z, kParams, kBase));
  const std::vector<cplx> two{unit(0.1)};
  EXPECT_THROW(delta_density(kernel(KernelFamily::I, 2), two, kParams, kBase), Error);
}

}  // namespace
}  // namespace ellhyp
