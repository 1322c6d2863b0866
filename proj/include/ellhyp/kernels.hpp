// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "ellhyp/efun.hpp"
#include "ellhyp/symalg.hpp"

namespace ellhyp {

enum class KernelFamily { I, II };

struct KernelSpec {
  KernelFamily family = KernelFamily::I;
  int n = 0;
  Monomial t;  // unused for family I
  GammaVariant variant = GammaVariant::PQ;
  void validate() const;
};

// (p;p)^n (q;q)^n / (2^n n!) in the variant base, times Gamma(t)^n for II.
cplx kernel_constant(const KernelSpec& spec, const Assignment& params, const Base& base,
                     const TruncationPolicy& policy = {});

// Density against prod dtheta_j / 2pi; z must lie on the unit circle.
cplx delta_density(const KernelSpec& spec, std::span<const cplx> z, const Assignment& params, const Base& base,
                   const TruncationPolicy& policy = {});

// Same expression without the unit-modulus check, for evaluation on deformed
// contours and residue circles.
cplx delta_value(const KernelSpec& spec, std::span<const cplx> z, const Assignment& params, const Base& base,
                 const TruncationPolicy& policy = {});

inline cplx n_zero_kernel() { return {1.0, 0.0}; }

}  // namespace ellhyp
