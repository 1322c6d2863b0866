// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#include "ellhyp/ispec.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <tuple>

#include "ellhyp/error.hpp"

namespace ellhyp {

namespace {

std::vector<cplx> unit_roots(int N) {
  std::vector<cplx> w(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) {
    const double th = 2.0 * std::numbers::pi * k / N;
    w[static_cast<std::size_t>(k)] = cplx(std::cos(th), std::sin(th));
  }
  return w;
}

inline std::size_t wrap(long long x, int N) {
  const long long r = x % N;
  return static_cast<std::size_t>(r < 0 ? r + N : r);
}

cplx gamma_pm(cplx c, cplx z, const Base& b, const TruncationPolicy& tr) {
  return egamma(c * z, b, tr) * egamma(c / z, b, tr);
}

}  // namespace

std::string FactorSpec::describe() const {
  std::string s = std::string("G_") + variant_name(variant) + "(" + coefficient.str();
  for (const Slot& sl : slots) {
    s += " " + sl.group;
    if (sl.index >= 0) s += "[" + std::to_string(sl.index + 1) + "]";
    s += "^{+-" + std::to_string(sl.orbit) + "}";
  }
  s += ")";
  if (power != 1) s += "^" + std::to_string(power);
  return s;
}

int IntegralSpec::total_dim() const {
  int d = 0;
  for (const auto& g : groups) d += g.dim();
  return d;
}

const VarGroup& IntegralSpec::group(const std::string& name) const {
  for (const auto& g : groups)
    if (g.name == name) return g;
  fail(ErrorCode::not_found, "no variable group '" + name + "'");
}

void IntegralSpec::validate() const {
  std::set<std::string> names;
  for (const auto& g : groups) {
    if (g.name.empty()) fail(ErrorCode::invalid_argument, "variable group without a name");
    if (!names.insert(g.name).second) fail(ErrorCode::invalid_argument, "duplicate variable group '" + g.name + "'");
    g.kernel.validate();
  }
  for (const auto& f : factors) {
    if (f.slots.size() > 2) fail(ErrorCode::invalid_argument, "factor " + f.describe() + " has more than two slots");
    if (!f.slots.empty() && f.power != 1)
      fail(ErrorCode::unsupported, "factor " + f.describe() + ": only power 1 is supported for variable factors");
    for (const Slot& s : f.slots) {
      const VarGroup& g = group(s.group);
      if (s.orbit != 1 && s.orbit != 2) fail(ErrorCode::invalid_argument, "slot orbit must be 1 or 2");
      if (s.index >= g.dim() && g.dim() > 0)
        fail(ErrorCode::invalid_argument, "slot index out of range in " + f.describe());
    }
    if (f.slots.size() == 2 && f.slots[0].group == f.slots[1].group)
      fail(ErrorCode::unsupported, "cross factor " + f.describe() + " within a single group");
  }
}

Assignment with_base(const Assignment& params, const Base& base) {
  Assignment a = params;
  a["p"] = base.p;
  a["q"] = base.q;
  return a;
}

BalanceReport validate_balancing(const IntegralSpec& spec, const Assignment& params, const Base& base, double rtol) {
  const Assignment P = with_base(params, base);
  BalanceReport rep;
  for (const Relation& r : spec.balancing.relations()) {
    const cplx l = mono_eval(r.lhs, P), rv = mono_eval(r.rhs, P);
    const double res = std::abs(l - rv) / std::abs(rv);
    rep.max_residual = std::max(rep.max_residual, res);
    if (!(res <= rtol)) {
      rep.ok = false;
      rep.violations.push_back({r.lhs.str() + " = " + r.rhs.str(), res});
    }
  }
  return rep;
}

ContourReport contour_ok(const IntegralSpec& spec, const Assignment& params, const Base& base) {
  const Assignment P = with_base(params, base);
  ContourReport rep;
  auto add = [&](const std::string& item, double modulus) {
    ContourCheck c{item, modulus};
    rep.checks.push_back(c);
    rep.min_margin = std::min(rep.min_margin, c.margin());
    if (!(modulus < 1.0)) {
      rep.ok = false;
      rep.violations.push_back(c);
    }
  };
  for (const auto& g : spec.groups)
    if (g.kernel.family == KernelFamily::II && g.dim() >= 2)
      add("kernel " + g.name + " t=" + g.kernel.t.str(), std::abs(mono_eval(g.kernel.t, P)));
  for (const auto& f : spec.factors) {
    if (f.slots.empty()) continue;
    bool empty = false;
    for (const Slot& s : f.slots) empty = empty || spec.group(s.group).dim() == 0;
    if (empty) continue;
    add(f.describe(), std::abs(mono_eval(f.coefficient, P)));
  }
  return rep;
}

// ---------------------------------------------------------------------------

Integrand::Integrand(const IntegralSpec& spec, const Assignment& params, const Base& base,
                     const TruncationPolicy& trunc)
    : trunc_(trunc) {
  spec.validate();
  base.validate();
  const Assignment P = with_base(params, base);
  std::map<std::string, std::vector<int>> group_vars;
  for (std::size_t gi = 0; gi < spec.groups.size(); ++gi) {
    const VarGroup& g = spec.groups[gi];
    constant_ *= kernel_constant(g.kernel, P, base, trunc);
    std::vector<int>& ids = group_vars[g.name];
    const Base kb = variant_base(base, g.kernel.variant, true);
    for (int j = 0; j < g.dim(); ++j) {
      ids.push_back(dim());
      var_group_.push_back(static_cast<int>(gi));
      names_.push_back(g.dim() == 1 ? g.name : g.name + std::to_string(j + 1));
      diag_base_.push_back(kb);
      vars_.push_back(j);
    }
    if (g.dim() >= 2) {
      const bool two = g.kernel.family == KernelFamily::II;
      const cplx t = two ? mono_eval(g.kernel.t, P) : cplx(1.0, 0.0);
      for (std::size_t a = 0; a < ids.size(); ++a)
        for (std::size_t b = a + 1; b < ids.size(); ++b) kernel_pairs_.push_back({ids[a], ids[b], kb, two, t});
    }
  }
  for (const auto& f : spec.factors) {
    const Base fb = variant_base(base, f.variant, true);
    const cplx c = mono_eval(f.coefficient, P);
    if (f.slots.empty()) {
      constant_ *= std::pow(egamma(c, fb, trunc), f.power);
      continue;
    }
    auto vars_of = [&](const Slot& s) {
      const std::vector<int>& all = group_vars[s.group];
      if (s.index < 0 || all.empty()) return all;
      return std::vector<int>{all[static_cast<std::size_t>(s.index)]};
    };
    if (f.slots.size() == 1) {
      for (int v : vars_of(f.slots[0])) singles_.push_back({v, fb, c, f.slots[0].orbit});
    } else {
      for (int u : vars_of(f.slots[0]))
        for (int v : vars_of(f.slots[1])) {
          if (u < v) pairs_.push_back({u, v, fb, c, f.slots[0].orbit, f.slots[1].orbit});
          else pairs_.push_back({v, u, fb, c, f.slots[1].orbit, f.slots[0].orbit});
        }
    }
  }
}

cplx Integrand::operator()(std::span<const cplx> z) const {
  if (static_cast<int>(z.size()) != dim()) fail(ErrorCode::invalid_argument, "integrand dimension mismatch");
  cplx r = constant_;
  for (int v = 0; v < dim(); ++v) {
    const cplx z2 = z[v] * z[v];
    r *= egamma_reciprocal(z2, diag_base_[v], trunc_) * egamma_reciprocal(1.0 / z2, diag_base_[v], trunc_);
  }
  for (const auto& kp : kernel_pairs_) {
    const cplx args[4] = {z[kp.u] * z[kp.v], z[kp.u] / z[kp.v], z[kp.v] / z[kp.u], 1.0 / (z[kp.u] * z[kp.v])};
    for (const cplx& a : args) {
      r *= egamma_reciprocal(a, kp.base, trunc_);
      if (kp.type_two) r *= egamma(kp.t * a, kp.base, trunc_);
    }
  }
  for (const auto& s : singles_) r *= gamma_pm(s.c, s.orbit == 1 ? z[s.var] : z[s.var] * z[s.var], s.base, trunc_);
  for (const auto& p : pairs_) {
    const cplx zu = p.eu == 1 ? z[p.u] : z[p.u] * z[p.u];
    const cplx zv = p.ev == 1 ? z[p.v] : z[p.v] * z[p.v];
    r *= gamma_pm(p.c, zu * zv, p.base, trunc_) * gamma_pm(p.c, zu / zv, p.base, trunc_);
  }
  return r;
}

IndexDensity Integrand::on_grid(int N) const {
  const auto w = unit_roots(N);
  const auto Ns = static_cast<std::size_t>(N);
  using Key = std::tuple<double, double, double, double, double, double>;
  std::map<Key, std::shared_ptr<std::vector<cplx>>> gamma_tables, recip_tables;

  auto gamma_table = [&](cplx c, const Base& b) {
    const Key k{c.real(), c.imag(), b.p.real(), b.p.imag(), b.q.real(), b.q.imag()};
    auto& slot = gamma_tables[k];
    if (!slot) {
      slot = std::make_shared<std::vector<cplx>>(Ns);
      for (std::size_t m = 0; m < Ns; ++m) (*slot)[m] = egamma(c * w[m], b, trunc_);
    }
    return slot;
  };
  auto recip_table = [&](const Base& b) {
    const Key k{0, 0, b.p.real(), b.p.imag(), b.q.real(), b.q.imag()};
    auto& slot = recip_tables[k];
    if (!slot) {
      slot = std::make_shared<std::vector<cplx>>(Ns);
      for (std::size_t m = 0; m < Ns; ++m) (*slot)[m] = egamma_reciprocal(w[m], b, trunc_);
    }
    return slot;
  };

  struct PairTable {
    int u, v, eu, ev;
    std::vector<cplx> U;
  };
  struct State {
    cplx c0;
    int N;
    std::vector<std::vector<cplx>> S;
    std::vector<PairTable> pairs;
  };
  auto st = std::make_shared<State>();
  st->c0 = constant_;
  st->N = N;
  st->S.assign(vars_.size(), std::vector<cplx>(Ns, cplx(1.0, 0.0)));
  for (int v = 0; v < dim(); ++v) {
    const auto R = recip_table(diag_base_[v]);
    for (std::size_t m = 0; m < Ns; ++m) st->S[v][m] *= (*R)[wrap(2 * (long long)m, N)] * (*R)[wrap(-2 * (long long)m, N)];
  }
  for (const auto& s : singles_) {
    const auto T = gamma_table(s.c, s.base);
    for (std::size_t m = 0; m < Ns; ++m)
      st->S[s.var][m] *= (*T)[wrap(s.orbit * (long long)m, N)] * (*T)[wrap(-s.orbit * (long long)m, N)];
  }
  std::map<std::tuple<int, int, int, int>, std::size_t> pair_index;
  auto pair_table = [&](int u, int v, int eu, int ev) -> std::vector<cplx>& {
    auto [it, fresh] = pair_index.emplace(std::make_tuple(u, v, eu, ev), st->pairs.size());
    if (fresh) st->pairs.push_back({u, v, eu, ev, std::vector<cplx>(Ns, cplx(1.0, 0.0))});
    return st->pairs[it->second].U;
  };
  for (const auto& kp : kernel_pairs_) {
    auto& U = pair_table(kp.u, kp.v, 1, 1);
    const auto R = recip_table(kp.base);
    for (std::size_t m = 0; m < Ns; ++m) U[m] *= (*R)[m] * (*R)[wrap(-(long long)m, N)];
    if (kp.type_two) {
      const auto T = gamma_table(kp.t, kp.base);
      for (std::size_t m = 0; m < Ns; ++m) U[m] *= (*T)[m] * (*T)[wrap(-(long long)m, N)];
    }
  }
  for (const auto& p : pairs_) {
    auto& U = pair_table(p.u, p.v, p.eu, p.ev);
    const auto T = gamma_table(p.c, p.base);
    for (std::size_t m = 0; m < Ns; ++m) U[m] *= (*T)[m] * (*T)[wrap(-(long long)m, N)];
  }

  return [st](std::span<const int> idx) {
    cplx r = st->c0;
    for (std::size_t v = 0; v < idx.size(); ++v) r *= st->S[v][static_cast<std::size_t>(idx[v])];
    for (const auto& pt : st->pairs) {
      const long long a = idx[static_cast<std::size_t>(pt.u)], b = idx[static_cast<std::size_t>(pt.v)];
      r *= pt.U[wrap(pt.eu * a + pt.ev * b, st->N)] * pt.U[wrap(pt.eu * a - pt.ev * b, st->N)];
    }
    return r;
  };
}

Integrand build_density(const IntegralSpec& spec, const Assignment& params, const Base& base,
                        const TruncationPolicy& trunc) {
  const BalanceReport bal = validate_balancing(spec, params, base);
  if (!bal.ok)
    fail(ErrorCode::invalid_argument, "balancing violated: " + bal.violations.front().relation + " (residual " +
                                          std::to_string(bal.violations.front().residual) + ")");
  const ContourReport cr = contour_ok(spec, params, base);
  if (!cr.ok)
    fail(ErrorCode::invalid_argument, "unit-circle contour not admissible: |" + cr.violations.front().item +
                                          "| = " + std::to_string(cr.violations.front().modulus));
  return Integrand(spec, params, base, trunc);
}

QuadResult eval_integral(const IntegralSpec& spec, const Assignment& params, const Base& base,
                         const ConvergencePolicy& policy, const ParallelOptions& par) {
  const Integrand f = build_density(spec, params, base);
  return integrate_converged_indexed([&](int N) { return f.on_grid(N); }, f.dim(), policy, par);
}

QuadResult eval_integral(const IntegralSpec& spec, const Assignment& params, const Base& base) {
  return eval_integral(spec, params, base, ConvergencePolicy::for_dimension(spec.total_dim()));
}

cplx eval_integral_iterated(const IntegralSpec& spec, const Assignment& params, const Base& base,
                            const std::vector<std::string>& order, int N) {
  const Integrand f = build_density(spec, params, base);
  if (f.dim() == 0) return f.constant();
  std::vector<int> ord;
  for (const std::string& name : order) {
    int gi = -1;
    for (std::size_t i = 0; i < spec.groups.size(); ++i)
      if (spec.groups[i].name == name) gi = static_cast<int>(i);
    if (gi < 0) fail(ErrorCode::not_found, "no variable group '" + name + "'");
    for (int v = 0; v < f.dim(); ++v)
      if (f.variable_groups()[static_cast<std::size_t>(v)] == gi) ord.push_back(v);
  }
  if (static_cast<int>(ord.size()) != f.dim()) fail(ErrorCode::invalid_argument, "iteration order must list every group");
  const IndexDensity d = f.on_grid(N);
  std::vector<int> idx(static_cast<std::size_t>(f.dim()), 0);
  std::function<cplx(std::size_t)> level = [&](std::size_t L) -> cplx {
    if (L == ord.size()) return d(idx);
    std::vector<cplx> vals(static_cast<std::size_t>(N));
    for (int m = 0; m < N; ++m) {
      idx[static_cast<std::size_t>(ord[L])] = m;
      vals[static_cast<std::size_t>(m)] = level(L + 1);
    }
    return pairwise_sum(vals) / static_cast<double>(N);
  };
  return level(0);
}

std::vector<std::pair<GammaVariant, Monomial>> prefactor_arguments_expanded(const PrefactorSpec& pre,
                                                                           const VarBindings& vars) {
  std::vector<std::pair<GammaVariant, Monomial>> out;
  for (const auto& f : pre.factors) {
    if (!f.slots.empty()) fail(ErrorCode::invalid_argument, "prefactor factor " + f.describe() + " has variable slots");
    for (int k = 0; k < std::abs(f.power); ++k) out.emplace_back(f.variant, f.coefficient);
  }
  for (const auto& fam : pre.families) {
    const std::int64_t count = fam.count.evaluate_int(vars);
    if (count < 0) fail(ErrorCode::invalid_argument, "negative family count " + fam.count.str());
    Monomial x = fam.base;
    for (std::int64_t i = 0; i < count; ++i, x = x * fam.step)
      for (int k = 0; k < std::abs(fam.power); ++k) out.emplace_back(fam.variant, x);
  }
  return out;
}

std::size_t prefactor_factor_count(const PrefactorSpec& pre, const VarBindings& vars) {
  return prefactor_arguments_expanded(pre, vars).size();
}

cplx eval_prefactor(const PrefactorSpec& pre, const Assignment& params, const Base& base, const VarBindings& vars) {
  const Assignment P = with_base(params, base);
  cplx r(1.0, 0.0);
  auto apply = [&](GammaVariant v, const Monomial& m, int power) {
    const cplx g = egamma_variant(mono_eval(m, P), base, v, {}, true);
    r *= power > 0 ? std::pow(g, power) : std::pow(1.0 / g, -power);
  };
  for (const auto& f : pre.factors) {
    if (!f.slots.empty()) fail(ErrorCode::invalid_argument, "prefactor factor " + f.describe() + " has variable slots");
    apply(f.variant, f.coefficient, f.power);
  }
  for (const auto& fam : pre.families) {
    const std::int64_t count = fam.count.evaluate_int(vars);
    if (count < 0) fail(ErrorCode::invalid_argument, "negative family count " + fam.count.str());
    Monomial x = fam.base;
    for (std::int64_t i = 0; i < count; ++i, x = x * fam.step) apply(fam.variant, x, fam.power);
  }
  return r;
}

cplx eval_prefactor(const PrefactorSpec& pre, const Assignment& params, const Base& base, int n) {
  return eval_prefactor(pre, params, base, VarBindings{{"n", n}});
}

DeformedResult univariate_deformed(std::span<const cplx> coefs, const Base& base, const ConvergencePolicy& policy,
                                   const ParallelOptions& par) {
  const std::vector<cplx> cs(coefs.begin(), coefs.end());
  const KernelSpec k{KernelFamily::I, 1, Monomial(), GammaVariant::PQ};
  const cplx c0 = kernel_constant(k, {}, base);
  auto density = [&](cplx y) {
    const cplx y2 = y * y;
    cplx r = c0 * egamma_reciprocal(y2, base) * egamma_reciprocal(1.0 / y2, base);
    for (const cplx c : cs) r *= gamma_pm(c, y, base, TruncationPolicy{});
    return r;
  };
  return integrate_deformed_1d(density, PoleRegistry::from_coefficients(cs, base), policy, par);
}

DeformedResult eval_integral_deformed_1d(const IntegralSpec& spec, const Assignment& params, const Base& base,
                                         const ConvergencePolicy& policy, const ParallelOptions& par) {
  spec.validate();
  const BalanceReport bal = validate_balancing(spec, params, base);
  if (!bal.ok) fail(ErrorCode::invalid_argument, "balancing violated: " + bal.violations.front().relation);
  if (spec.total_dim() != 1) fail(ErrorCode::unsupported, "contour deformation is only available in one variable");
  for (const auto& g : spec.groups)
    if (g.dim() == 1 && (g.kernel.family != KernelFamily::I || g.kernel.variant != GammaVariant::PQ))
      fail(ErrorCode::unsupported, "deformed contour needs a type I kernel in base (p,q)");
  const Assignment P = with_base(params, base);
  std::vector<cplx> coefs;
  cplx constant(1.0, 0.0);
  for (const auto& f : spec.factors) {
    if (f.slots.empty()) {
      constant *= std::pow(egamma_variant(mono_eval(f.coefficient, P), base, f.variant, {}, true), f.power);
      continue;
    }
    if (f.slots.size() != 1 || f.slots[0].orbit != 1 || f.variant != GammaVariant::PQ)
      fail(ErrorCode::unsupported, "deformed contour handles only Gamma(c y^{+-1}) factors, got " + f.describe());
    coefs.push_back(mono_eval(f.coefficient, P));
  }
  DeformedResult r = univariate_deformed(coefs, base, policy, par);
  r.value *= constant;
  r.circle.value *= constant;
  for (auto& t : r.residue_terms) t *= constant;
  r.scale *= std::abs(constant);
  return r;
}

}  // namespace ellhyp
