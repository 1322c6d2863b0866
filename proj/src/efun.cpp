// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#include "ellhyp/efun.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ellhyp/error.hpp"

namespace ellhyp {

namespace {

std::string show(cplx z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
  return os.str();
}

// Tail of sum_{d >= D} (d+1) rho^d.
double diagonal_tail(double rho, std::size_t D) {
  const double one_minus = 1.0 - rho;
  return std::pow(rho, static_cast<double>(D)) *
         ((static_cast<double>(D) + 1.0) / one_minus + rho / (one_minus * one_minus));
}

}  // namespace

void Base::validate() const {
  const double ap = std::abs(p), aq = std::abs(q);
  if (!(ap > 0.0 && ap < 1.0 && aq > 0.0 && aq < 1.0))
    fail(ErrorCode::invalid_argument, "base requires 0 < |p|, |q| < 1, got p=" + show(p) + " q=" + show(q));
}

void TruncationPolicy::validate() const {
  if (!(cutoff > 0.0 && cutoff < 1e-10)) fail(ErrorCode::invalid_argument, "truncation cutoff must lie in (0, 1e-10)");
  if (max_terms == 0) fail(ErrorCode::invalid_argument, "truncation term cap must be positive");
}

const char* variant_name(GammaVariant v) {
  switch (v) {
    case GammaVariant::PQ: return "pq";
    case GammaVariant::PQ2: return "pq2";
    case GammaVariant::HALF: return "half";
  }
  return "?";
}

GammaVariant parse_variant(std::string_view name) {
  if (name == "pq") return GammaVariant::PQ;
  if (name == "pq2") return GammaVariant::PQ2;
  if (name == "half") return GammaVariant::HALF;
  fail(ErrorCode::parse, "unknown gamma variant '" + std::string(name) + "' (expected pq, pq2 or half)");
}

cplx qpoch1(cplx x, cplx b, const TruncationPolicy& policy, ProductStats* stats) {
  const double ab = std::abs(b);
  if (!(ab < 1.0)) fail(ErrorCode::invalid_argument, "qpoch1 needs |b| < 1");
  cplx r(1.0, 0.0);
  cplx term = x;
  std::size_t k = 0;
  const double ax = std::abs(x);
  // Dropped tail from index k on is at most |x| |b|^k / (1 - |b|).
  double bound = ax / (1.0 - ab);
  while (bound > policy.cutoff) {
    if (k >= policy.max_terms) fail(ErrorCode::overflow, "qpoch1 exceeded the term cap");
    r *= cplx(1.0, 0.0) - term;
    term *= b;
    ++k;
    bound *= ab;
  }
  if (stats) *stats = {k, bound};
  return r;
}

cplx poch2(cplx x, const Base& base, const TruncationPolicy& policy, ProductStats* stats) {
  base.validate();
  const double rho = std::max(std::abs(base.p), std::abs(base.q));
  const double ax = std::abs(x);
  cplx r(1.0, 0.0);
  std::size_t terms = 0;
  std::size_t d = 0;
  cplx pd = x;  // x p^d
  for (;; ++d) {
    const double tail = ax * diagonal_tail(rho, d);
    if (tail <= policy.cutoff) {
      if (stats) *stats = {terms, tail};
      return r;
    }
    if (terms + d + 1 > policy.max_terms) fail(ErrorCode::overflow, "poch2 exceeded the term cap");
    // Diagonal r + s = d, walked from x p^d towards x q^d.
    cplx term = pd;
    const cplx ratio = base.q / base.p;
    for (std::size_t s = 0; s <= d; ++s) {
      r *= cplx(1.0, 0.0) - term;
      term *= ratio;
    }
    terms += d + 1;
    pd *= base.p;
  }
}

void check_not_pole(cplx x, const Base& base, double radius) {
  // Poles sit at p^-a q^-b, a, b >= 0; only those with modulus up to about
  // |x| + radius can be within reach.
  const double ap = std::abs(base.p);
  const double reach = std::abs(x) + radius;
  cplx pa(1.0, 0.0);
  for (int a = 0; std::pow(ap, -a) <= reach * (1.0 + 1e-9); ++a) {
    cplx pole = pa;
    for (int b = 0; std::abs(pole) <= reach * (1.0 + 1e-9); ++b) {
      if (std::abs(x - pole) < radius)
        fail(ErrorCode::pole, "elliptic gamma pole at x=" + show(x) + " (p^-" + std::to_string(a) + " q^-" +
                                  std::to_string(b) + ")");
      pole /= base.q;
    }
    pa /= base.p;
  }
}

cplx egamma(cplx x, const Base& base, const TruncationPolicy& policy) {
  base.validate();
  if (x == cplx(0.0, 0.0)) fail(ErrorCode::invalid_argument, "egamma at x = 0");
  check_not_pole(x, base, policy.pole_radius);
  return poch2(base.p * base.q / x, base, policy) / poch2(x, base, policy);
}

cplx egamma_reciprocal(cplx x, const Base& base, const TruncationPolicy& policy) {
  base.validate();
  if (x == cplx(0.0, 0.0)) fail(ErrorCode::invalid_argument, "egamma at x = 0");
  const cplx num = poch2(x, base, policy);
  const cplx den = poch2(base.p * base.q / x, base, policy);
  if (std::abs(den) == 0.0) fail(ErrorCode::pole, "reciprocal elliptic gamma has a pole at x=" + show(x));
  return num / den;
}

Base variant_base(const Base& base, GammaVariant v, bool allow_complex_half) {
  base.validate();
  switch (v) {
    case GammaVariant::PQ: return base;
    case GammaVariant::PQ2: return Base{base.p, base.q * base.q};
    case GammaVariant::HALF: {
      const bool real_base = base.p.imag() == 0.0 && base.q.imag() == 0.0 && base.p.real() > 0.0 &&
                             base.q.real() > 0.0;
      if (!real_base && !allow_complex_half)
        fail(ErrorCode::invalid_argument,
             "half-base gamma needs real p, q in (0,1); pass allow_complex_half to use principal roots");
      return Base{std::sqrt(base.p), std::sqrt(base.q)};
    }
  }
  fail(ErrorCode::invalid_argument, "bad variant");
}

cplx egamma_variant(cplx x, const Base& base, GammaVariant v, const TruncationPolicy& policy,
                    bool allow_complex_half) {
  return egamma(x, variant_base(base, v, allow_complex_half), policy);
}

}  // namespace ellhyp
