// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>

namespace ellhyp {

using cplx = std::complex<double>;

struct Base {
  cplx p;
  cplx q;
  // Throws unless 0 < |p|, |q| < 1.
  void validate() const;
};

// Which elliptic gamma a factor uses: Gamma_{p,q}, Gamma_{p,q^2} or
// Gamma_{sqrt p, sqrt q}.
enum class GammaVariant { PQ, PQ2, HALF };

const char* variant_name(GammaVariant v);
GammaVariant parse_variant(std::string_view name);

struct TruncationPolicy {
  // Products stop once the bound on the dropped tail, relative to the
  // leading factor, falls below this.
  double cutoff = 1e-17;
  std::size_t max_terms = 200000;
  // Pole proximity for egamma.
  double pole_radius = 1e-12;
  void validate() const;
};

struct ProductStats {
  std::size_t terms = 0;
  double tail_bound = 0.0;
};

// (x; b)_inf
cplx qpoch1(cplx x, cplx b, const TruncationPolicy& policy = {}, ProductStats* stats = nullptr);
// (x; p, q)_inf, diagonal-major order.
cplx poch2(cplx x, const Base& base, const TruncationPolicy& policy = {}, ProductStats* stats = nullptr);

// Gamma_{p,q}(x). Throws ErrorCode::pole within policy.pole_radius of p^-a q^-b.
cplx egamma(cplx x, const Base& base, const TruncationPolicy& policy = {});
// 1 / Gamma_{p,q}(x) = (x;p,q) / (pq/x;p,q); finite at the poles of Gamma.
cplx egamma_reciprocal(cplx x, const Base& base, const TruncationPolicy& policy = {});

// The (p,q) pair that a variant actually uses.
Base variant_base(const Base& base, GammaVariant v, bool allow_complex_half = false);

cplx egamma_variant(cplx x, const Base& base, GammaVariant v, const TruncationPolicy& policy = {},
                    bool allow_complex_half = false);

// Throws if x is a pole of Gamma_{p,q}.
void check_not_pole(cplx x, const Base& base, double radius);

}  // namespace ellhyp
