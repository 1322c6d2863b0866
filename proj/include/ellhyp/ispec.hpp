// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ellhyp/efun.hpp"
#include "ellhyp/kernels.hpp"
#include "ellhyp/quad.hpp"
#include "ellhyp/symalg.hpp"

namespace ellhyp {

// One variable slot of a gamma factor. orbit 1 means z^{+-1}, orbit 2 means
// z^{+-2}. index < 0 applies the slot to every variable of the group.
struct Slot {
  std::string group;
  int orbit = 1;
  int index = -1;
  friend bool operator==(const Slot&, const Slot&) = default;
};

// Gamma_variant(c * prod_slots z^{+-orbit})^power, orbit-expanded over the
// group variables. No slots means a constant factor.
struct FactorSpec {
  GammaVariant variant = GammaVariant::PQ;
  Monomial coefficient;
  std::vector<Slot> slots;
  int power = 1;
  std::string describe() const;
  friend bool operator==(const FactorSpec&, const FactorSpec&) = default;
};

struct VarGroup {
  std::string name;
  KernelSpec kernel;  // kernel.n is the group dimension
  int dim() const { return kernel.n; }
};

// prod_{i=0}^{count-1} Gamma_variant(base * step^i)^power
struct IndexedFamily {
  GammaVariant variant = GammaVariant::PQ;
  Monomial base;
  Monomial step;
  AffineExpr count;
  int power = 1;
};

struct PrefactorSpec {
  std::vector<FactorSpec> factors;  // slot-free
  std::vector<IndexedFamily> families;
};

struct IntegralSpec {
  std::vector<VarGroup> groups;  // outermost first
  std::vector<FactorSpec> factors;
  RelationSet balancing;
  std::vector<std::string> free_params;
  std::vector<std::string> derived_params;

  int total_dim() const;
  const VarGroup& group(const std::string& name) const;
  // Throws on duplicate group names, unknown slot groups, more than two slots.
  void validate() const;
};

struct BalanceViolation {
  std::string relation;
  double residual = 0.0;
};

struct BalanceReport {
  bool ok = true;
  double max_residual = 0.0;
  std::vector<BalanceViolation> violations;
};

BalanceReport validate_balancing(const IntegralSpec& spec, const Assignment& params, const Base& base,
                                 double rtol = 1e-13);

struct ContourCheck {
  std::string item;
  double modulus = 0.0;
  double margin() const { return 1.0 - modulus; }
};

struct ContourReport {
  bool ok = true;
  double min_margin = 1.0;
  std::vector<ContourCheck> checks;
  std::vector<ContourCheck> violations;
};

// |c| < 1 for every factor with variable slots, |t| < 1 for type II kernels.
ContourReport contour_ok(const IntegralSpec& spec, const Assignment& params, const Base& base);

// Adds p and q to an assignment.
Assignment with_base(const Assignment& params, const Base& base);

class Integrand {
 public:
  Integrand(const IntegralSpec& spec, const Assignment& params, const Base& base, const TruncationPolicy& trunc = {});

  int dim() const { return static_cast<int>(vars_.size()); }
  const std::vector<std::string>& variable_names() const { return names_; }
  // Which group each variable belongs to, by position in spec.groups.
  const std::vector<int>& variable_groups() const { return var_group_; }

  // Direct evaluation at arbitrary nonzero points.
  cplx operator()(std::span<const cplx> z) const;
  // Table-driven density on the uniform N^dim grid of roots of unity.
  IndexDensity on_grid(int N) const;
  cplx constant() const { return constant_; }

 private:
  struct Single {
    int var;
    Base base;
    cplx c;
    int orbit;
  };
  struct Pair {
    int u, v;
    Base base;
    cplx c;
    int eu, ev;
  };
  struct KernelPair {
    int u, v;
    Base base;
    bool type_two;
    cplx t;
  };

  std::vector<int> vars_;
  std::vector<int> var_group_;
  std::vector<std::string> names_;
  std::vector<Base> diag_base_;  // per variable, base of its kernel
  std::vector<Single> singles_;
  std::vector<Pair> pairs_;
  std::vector<KernelPair> kernel_pairs_;
  cplx constant_{1.0, 0.0};
  TruncationPolicy trunc_;
};

// Validates balancing and the unit-circle contour before assembling.
Integrand build_density(const IntegralSpec& spec, const Assignment& params, const Base& base,
                        const TruncationPolicy& trunc = {});

QuadResult eval_integral(const IntegralSpec& spec, const Assignment& params, const Base& base,
                         const ConvergencePolicy& policy, const ParallelOptions& par = {});
QuadResult eval_integral(const IntegralSpec& spec, const Assignment& params, const Base& base);

// Nested averages on a fixed N grid, groups visited in the given order
// (outermost first).
cplx eval_integral_iterated(const IntegralSpec& spec, const Assignment& params, const Base& base,
                            const std::vector<std::string>& order, int N);

cplx eval_prefactor(const PrefactorSpec& pre, const Assignment& params, const Base& base, const VarBindings& vars);
cplx eval_prefactor(const PrefactorSpec& pre, const Assignment& params, const Base& base, int n);
std::size_t prefactor_factor_count(const PrefactorSpec& pre, const VarBindings& vars);

// Every argument a prefactor evaluates, in order.
std::vector<std::pair<GammaVariant, Monomial>> prefactor_arguments_expanded(const PrefactorSpec& pre,
                                                                           const VarBindings& vars);

// 1-D type I integral of prod_j Gamma(c_j y^{+-1}) on the contour that
// encloses every c_j p^a q^b and excludes the reciprocals.
DeformedResult univariate_deformed(std::span<const cplx> coefs, const Base& base, const ConvergencePolicy& policy,
                                   const ParallelOptions& par = {});

// Deformed evaluation of a one-variable type I spec whose factors are all
// single-slot, orbit 1, Gamma_{p,q}.
DeformedResult eval_integral_deformed_1d(const IntegralSpec& spec, const Assignment& params, const Base& base,
                                         const ConvergencePolicy& policy, const ParallelOptions& par = {});

}  // namespace ellhyp
