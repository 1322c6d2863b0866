// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ellhyp/efun.hpp"

namespace ellhyp {

using cplx = std::complex<double>;

struct Grid {
  std::vector<int> sizes;  // powers of two, each >= 8
  static Grid uniform(int dim, int N);
  std::size_t points() const;
  void validate() const;
};

struct ParallelOptions {
  // 0 picks ELLHYP_THREADS or the hardware concurrency.
  unsigned threads = 0;
  unsigned resolved() const;
};

struct ConvergencePolicy {
  int n0 = 32;
  int n_max = 512;
  double rtol = 1e-9;
  // rtol 1e-9 up to two dimensions, 1e-5 beyond; N_max 512 / 256 / 128.
  static ConvergencePolicy for_dimension(int dim);
};

struct QuadResult {
  cplx value;
  double last_refinement_delta = 0.0;
  std::vector<Grid> grids_used;
  std::vector<cplx> values;      // one per grid
  std::vector<double> deltas;    // one per refinement
  bool converged = true;
};

using TorusDensity = std::function<cplx(std::span<const cplx>)>;
// Density addressed by grid indices k_j on a uniform N^dim grid.
using IndexDensity = std::function<cplx(std::span<const int>)>;

// Fixed-shape pairwise summation.
cplx pairwise_sum(std::span<const cplx> values);

// Average of the density over the uniform N^dim grid. Points are processed in
// fixed chunks whose sums are combined by a pairwise tree, so the result does
// not depend on the thread count.
cplx torus_average(const IndexDensity& density, int dim, int N, const ParallelOptions& par = {});

cplx integrate_torus(const TorusDensity& density, const Grid& grid, const ParallelOptions& par = {});

QuadResult integrate_converged(const TorusDensity& density, int dim, const ConvergencePolicy& policy,
                               const ParallelOptions& par = {});

// Same loop for densities that prepare per-N state (gamma tables).
QuadResult integrate_converged_indexed(const std::function<IndexDensity(int N)>& factory, int dim,
                                       const ConvergencePolicy& policy, const ParallelOptions& par = {});

cplx residue_numeric(const std::function<cplx(cplx)>& f, cplx center, double radius, int N = 64);

struct PolePoint {
  cplx location;
  std::string origin;
};

struct PoleRegistry {
  // Points the contour must enclose (all strictly outside the unit circle).
  std::vector<PolePoint> enclosed;
  // Other singularities of the integrand that bound the residue radii.
  std::vector<cplx> guards;

  // For an integrand with factors Gamma(c z^{+-1}) the poles in z are at
  // c p^a q^b and their reciprocals. The contour has to enclose every
  // c p^a q^b; those outside the unit circle are registered, the rest are
  // already inside. Every lattice point near the region of interest becomes a
  // guard.
  static PoleRegistry from_coefficients(std::span<const cplx> coefs, const Base& base, double reach = 64.0);
  void validate() const;
};

struct DeformedResult {
  cplx value;
  QuadResult circle;                // on |z| = circle_radius
  double circle_radius = 1.0;
  std::vector<cplx> residue_terms;  // annulus terms (signed), then enclosed poles (factor 2 included)
  std::vector<double> radii;
  // Largest magnitude among the unit-circle part and the residue terms.
  double scale = 0.0;
};

// Unit-circle integral plus 2 Res_{z=P} f(z)/z for every registered P. The
// factor 2 is the contribution of the mirrored point 1/P: the density is
// symmetric under z -> 1/z, and excluding 1/P adds the same residue again.
DeformedResult integrate_deformed_1d(const std::function<cplx(cplx)>& density, const PoleRegistry& registry,
                                     const ConvergencePolicy& policy, const ParallelOptions& par = {});

}  // namespace ellhyp
