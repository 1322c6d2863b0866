// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#include "ellhyp/kernels.hpp"

#include <cmath>

#include "ellhyp/error.hpp"

namespace ellhyp {

void KernelSpec::validate() const {
  if (n < 0) fail(ErrorCode::invalid_argument, "kernel dimension must be non-negative");
  if (family == KernelFamily::I && !t.is_one())
    fail(ErrorCode::invalid_argument, "type I kernel carries no t");
}

cplx kernel_constant(const KernelSpec& spec, const Assignment& params, const Base& base,
                     const TruncationPolicy& policy) {
  spec.validate();
  if (spec.n == 0) return n_zero_kernel();
  const Base b = variant_base(base, spec.variant, true);
  cplx c = qpoch1(b.p, b.p, policy) * qpoch1(b.q, b.q, policy);
  double fact = 1.0;
  for (int k = 1; k <= spec.n; ++k) fact *= k;
  cplx r = std::pow(c, spec.n) / (std::ldexp(1.0, spec.n) * fact);
  if (spec.family == KernelFamily::II) r *= std::pow(egamma(mono_eval(spec.t, params), b, policy), spec.n);
  return r;
}

cplx delta_value(const KernelSpec& spec, std::span<const cplx> z, const Assignment& params, const Base& base,
                 const TruncationPolicy& policy) {
  if (static_cast<int>(z.size()) != spec.n)
    fail(ErrorCode::invalid_argument, "kernel expects " + std::to_string(spec.n) + " variables");
  if (spec.n == 0) return n_zero_kernel();
  const Base b = variant_base(base, spec.variant, true);
  cplx r = kernel_constant(spec, params, base, policy);
  const cplx t = spec.family == KernelFamily::II ? mono_eval(spec.t, params) : cplx(1.0, 0.0);
  for (std::size_t j = 0; j < z.size(); ++j) {
    const cplx z2 = z[j] * z[j];
    r *= egamma_reciprocal(z2, b, policy) * egamma_reciprocal(1.0 / z2, b, policy);
    for (std::size_t k = j + 1; k < z.size(); ++k) {
      const cplx args[4] = {z[j] * z[k], z[j] / z[k], z[k] / z[j], 1.0 / (z[j] * z[k])};
      for (const cplx& a : args) {
        r *= egamma_reciprocal(a, b, policy);
        if (spec.family == KernelFamily::II) r *= egamma(t * a, b, policy);
      }
    }
  }
  return r;
}

cplx delta_density(const KernelSpec& spec, std::span<const cplx> z, const Assignment& params, const Base& base,
                   const TruncationPolicy& policy) {
  for (const cplx& zj : z)
    if (std::abs(std::abs(zj) - 1.0) > 1e-12)
      fail(ErrorCode::invalid_argument, "kernel density needs unit-modulus variables");
  return delta_value(spec, z, params, base, policy);
}

}  // namespace ellhyp
