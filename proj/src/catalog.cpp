// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#include "ellhyp/catalog.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>

#include "ellhyp/error.hpp"
#include "ellhyp/fubini.hpp"
#include "ellhyp/templates.hpp"

#ifndef ELLHYP_DEFAULT_CATALOG_DIR
#define ELLHYP_DEFAULT_CATALOG_DIR "catalog"
#endif

namespace ellhyp {

namespace {

std::string text_of(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  fail(ErrorCode::parse, "expected a string or integer, got " + j.dump());
}

EntryKind parse_kind(const std::string& s) {
  if (s == "transform") return EntryKind::transform;
  if (s == "vanishing") return EntryKind::vanishing;
  if (s == "fubini_pair") return EntryKind::fubini_pair;
  fail(ErrorCode::parse, "unknown entry kind '" + s + "'");
}

SuiteCase suite_case_from_json(const Json& j) {
  SuiteCase c;
  c.n = j.value("n", 1);
  c.m = j.value("m", 0);
  c.form = j.value("form", std::string());
  if (j.contains("signs"))
    for (const auto& [k, v] : j.at("signs").items()) c.signs[k] = v.get<int>();
  return c;
}

Monomial minus_one() { return Monomial::phase_turns(Rational(1, 2)); }

// Smallest distance | |c p^a q^b| - 1 | over the pole lattice of c and its
// reciprocal, which is what a deformed contour must keep clear of.
double lattice_margin(cplx c, const Base& base) {
  const double lp = std::log(std::abs(base.p)), lq = std::log(std::abs(base.q));
  const double lc = std::log(std::abs(c));
  double best = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 64; ++a)
    for (int b = 0; b < 64; ++b) {
      const double lm = lc + a * lp + b * lq;
      best = std::min(best, std::abs(std::exp(lm) - 1.0));
      if (lm < -1.0) break;
    }
  return best;
}

struct IteratedResult {
  cplx value;
  double scale = 0.0;
  bool converged = true;
  QuadResult outer_circle;
};

// Double integral of two one-variable type I groups, the inner one on the
// residue-corrected contour for every node of the outer contour, which is
// itself residue-corrected. The inner integral is the meromorphic
// continuation in the outer variable, so each order yields the value its
// nesting defines.
IteratedResult iterated_deformed(const IntegralSpec& spec, const Assignment& params, const Base& base,
                                 const std::string& inner_group, const ConvergencePolicy& policy,
                                 const ParallelOptions& par) {
  spec.validate();
  if (spec.groups.size() != 2) fail(ErrorCode::unsupported, "iterated deformed evaluation needs two groups");
  for (const auto& g : spec.groups)
    if (g.dim() != 1 || g.kernel.family != KernelFamily::I || g.kernel.variant != GammaVariant::PQ)
      fail(ErrorCode::unsupported, "iterated deformed evaluation needs one-variable type I groups in base (p,q)");
  spec.group(inner_group);
  const Assignment P = with_base(params, base);
  std::vector<cplx> inner_single, outer_single, cross;
  cplx constant(1.0, 0.0);
  for (const auto& f : spec.factors) {
    const cplx c = mono_eval(f.coefficient, P);
    if (f.slots.empty()) {
      constant *= std::pow(egamma_variant(c, base, f.variant, {}, true), f.power);
      continue;
    }
    if (f.variant != GammaVariant::PQ || f.power != 1)
      fail(ErrorCode::unsupported, "iterated deformed evaluation handles only Gamma_{p,q} factors, got " + f.describe());
    for (const Slot& s : f.slots)
      if (s.orbit != 1) fail(ErrorCode::unsupported, "iterated deformed evaluation needs +-1 orbits: " + f.describe());
    if (f.slots.size() == 2) {
      cross.push_back(c);
    } else if (f.slots[0].group == inner_group) {
      inner_single.push_back(c);
    } else {
      outer_single.push_back(c);
    }
  }
  const KernelSpec k1{KernelFamily::I, 1, Monomial(), GammaVariant::PQ};
  const ParallelOptions serial{1};
  std::mutex mu;
  IteratedResult out;
  auto density = [&](cplx w) {
    std::vector<cplx> coefs = inner_single;
    for (const cplx k : cross) {
      coefs.push_back(k * w);
      coefs.push_back(k / w);
    }
    const DeformedResult inner = univariate_deformed(coefs, base, policy, serial);
    const cplx wv[1] = {w};
    cplx weight = delta_value(k1, wv, {}, base);
    for (const cplx c : outer_single) weight *= egamma(c * w, base) * egamma(c / w, base);
    const std::lock_guard<std::mutex> lock(mu);
    out.scale = std::max(out.scale, std::abs(weight) * inner.scale);
    out.converged = out.converged && inner.circle.converged;
    return weight * inner.value;
  };
  std::vector<cplx> outer_coefs = outer_single;
  for (const cplx k : cross)
    for (const cplx c : inner_single) outer_coefs.push_back(k * c);
  const DeformedResult outer = integrate_deformed_1d(density, PoleRegistry::from_coefficients(outer_coefs, base), policy, par);
  out.value = constant * outer.value;
  out.scale = std::abs(constant) * std::max(out.scale, outer.scale);
  out.converged = out.converged && outer.circle.converged;
  out.outer_circle = outer.circle;
  return out;
}

SideResult side_from(const QuadResult& r, int dim) {
  SideResult s;
  s.value = r.value;
  s.dim = dim;
  for (const auto& g : r.grids_used) s.grids.push_back(g.sizes.empty() ? 1 : g.sizes.front());
  s.deltas = r.deltas;
  s.converged = r.converged;
  return s;
}

}  // namespace

const char* entry_kind_name(EntryKind k) {
  switch (k) {
    case EntryKind::transform: return "transform";
    case EntryKind::vanishing: return "vanishing";
    case EntryKind::fubini_pair: return "fubini_pair";
  }
  return "?";
}

double IdentityEntry::tolerance_for(int n) const {
  auto it = tolerance.upper_bound(n);
  if (it == tolerance.begin()) fail(ErrorCode::invalid_argument, "no tolerance for " + name + " at n=" + std::to_string(n));
  return std::prev(it)->second;
}

const IdentityForm& IdentityEntry::form(const std::string& f) const {
  if (forms.empty()) fail(ErrorCode::invalid_argument, name + " has no forms");
  if (f.empty()) return forms.front();
  for (const auto& x : forms)
    if (x.name == f) return x;
  std::string known;
  for (const auto& x : forms) known += (known.empty() ? "" : ", ") + x.name;
  fail(ErrorCode::not_found, "identity " + name + " has no form '" + f + "' (known: " + known + ")");
}

IdentityEntry entry_from_json(const Json& doc) {
  try {
    IdentityEntry e;
    e.name = doc.at("name").get<std::string>();
    e.anchor = doc.value("anchor", std::string());
    e.summary = doc.value("summary", std::string());
    e.kind = parse_kind(doc.value("kind", std::string("transform")));
    const Json& n = doc.at("n");
    e.n_min = n.at("min").get<int>();
    e.n_max = n.at("max").get<int>();
    if (e.n_min < 0 || e.n_max < e.n_min) fail(ErrorCode::parse, e.name + ": bad n range");
    if (doc.contains("m")) {
      e.uses_m = true;
      e.m_min = AffineExpr::parse(text_of(doc.at("m").at("min")));
      e.m_max = AffineExpr::parse(text_of(doc.at("m").at("max")));
    }
    e.real_base = doc.value("real_base", false);
    if (doc.contains("base"))
      e.default_base = {complex_from_json(doc.at("base").at("p")), complex_from_json(doc.at("base").at("q"))};
    for (const auto& [k, v] : doc.at("tolerance").items()) e.tolerance[std::stoi(k)] = v.get<double>();
    if (e.tolerance.empty()) fail(ErrorCode::parse, e.name + ": no tolerance");
    for (const auto& w : doc.at("windows")) {
      ParamWindowSpec p;
      p.names = w.at("names");
      p.center = w.value("center", std::string("1"));
      p.root = w.contains("root") ? text_of(w.at("root")) : std::string("1");
      p.scale = w.value("scale", 1.0);
      p.spread = w.value("spread", 0.1);
      if (w.contains("phase_halfwidth")) p.phase_halfwidth = w.at("phase_halfwidth").get<double>();
      e.windows.push_back(p);
    }
    e.margin = doc.value("margin", 0.05);
    e.balancing = doc.value("balancing", Json::array());
    e.derived = doc.value("derived", Json::object());
    e.sign_flags = doc.value("signs", std::vector<std::string>{});
    e.lhs = doc.at("lhs");
    for (const auto& f : doc.at("forms")) {
      IdentityForm form;
      form.name = f.at("name").get<std::string>();
      form.rhs = f.value("rhs", Json::object());
      form.prefactor = f.value("prefactor", Json::array());
      form.n_max = f.value("n_max", 0);
      e.forms.push_back(form);
    }
    if (e.forms.empty()) fail(ErrorCode::parse, e.name + ": no forms");
    e.delegate = doc.value("delegate", Json());
    e.lattice_guard = doc.value("lattice_guard", Json::array());
    if (doc.contains("suites"))
      for (const auto& [suite, cases] : doc.at("suites").items())
        for (const auto& c : cases) e.suites[suite].push_back(suite_case_from_json(c));
    return e;
  } catch (const Json::exception& ex) {
    fail(ErrorCode::parse, std::string("catalog entry: ") + ex.what());
  }
}

std::string Catalog::default_dir() {
  if (const char* env = std::getenv("ELLHYP_CATALOG_DIR"); env && *env) return env;
  return ELLHYP_DEFAULT_CATALOG_DIR;
}

Catalog Catalog::load(const std::string& dir) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (const auto& f : std::filesystem::directory_iterator(dir, ec))
    if (f.path().extension() == ".json") files.push_back(f.path());
  if (ec) fail(ErrorCode::io, "cannot read catalog directory " + dir + ": " + ec.message());
  std::sort(files.begin(), files.end());
  Catalog cat;
  for (const auto& path : files) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, "cannot open " + path.string());
    Json doc;
    try {
      doc = Json::parse(in);
    } catch (const Json::exception& ex) {
      fail(ErrorCode::parse, path.string() + ": " + ex.what());
    }
    try {
      cat.add(entry_from_json(doc));
    } catch (const Error& ex) {
      fail(ex.code(), path.string() + ": " + ex.what());
    }
  }
  return cat;
}

void Catalog::add(IdentityEntry entry) {
  for (const auto& e : entries_)
    if (e.name == entry.name) fail(ErrorCode::invalid_argument, "duplicate identity " + entry.name);
  entries_.push_back(std::move(entry));
}

std::vector<IdentityInfo> Catalog::list_identities() const {
  std::vector<IdentityInfo> out;
  for (const auto& e : entries_) {
    IdentityInfo info{e.name, e.anchor, e.summary, e.n_min, e.n_max, e.uses_m, "", e.kind, {}};
    auto bound = [](const AffineExpr& a) { return a.is_constant() ? a.str() : "(" + a.str() + ")"; };
    if (e.uses_m) info.m_range = bound(e.m_min) + ".." + bound(e.m_max);
    for (const auto& f : e.forms) info.forms.push_back(f.name);
    out.push_back(std::move(info));
  }
  return out;
}

const IdentityEntry& Catalog::find(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return e;
  fail(ErrorCode::not_found, "unknown identity '" + name + "'");
}

Instance instantiate(const Catalog& catalog, const InstanceRequest& req) {
  const IdentityEntry& entry = catalog.find(req.identity);
  if (req.n < entry.n_min || req.n > entry.n_max)
    fail(ErrorCode::invalid_argument, entry.name + " supports n in [" + std::to_string(entry.n_min) + ", " +
                                          std::to_string(entry.n_max) + "], got " + std::to_string(req.n));
  VarBindings vars{{"n", req.n}, {"m", req.m}};
  if (entry.uses_m) {
    const std::int64_t lo = entry.m_min.evaluate_int(vars), hi = entry.m_max.evaluate_int(vars);
    if (req.m < lo || req.m > hi)
      fail(ErrorCode::invalid_argument, entry.name + " at n=" + std::to_string(req.n) + " supports m in [" +
                                            std::to_string(lo) + ", " + std::to_string(hi) + "], got " +
                                            std::to_string(req.m));
  } else if (req.m != 0) {
    fail(ErrorCode::invalid_argument, entry.name + " takes no m");
  }
  const IdentityForm& form = entry.form(req.form);
  if (form.n_max > 0 && req.n > form.n_max)
    fail(ErrorCode::invalid_argument, entry.name + " form " + form.name + " supports n <= " + std::to_string(form.n_max));

  Instance inst;
  inst.entry = entry;
  inst.n = req.n;
  inst.m = req.m;
  inst.form = form.name;
  inst.base = req.base.value_or(entry.default_base);
  inst.base.validate();
  inst.seed = req.seed;
  inst.vars = vars;
  if (entry.real_base) {
    const Base& b = inst.base;
    if (b.p.imag() != 0.0 || b.q.imag() != 0.0 || b.p.real() <= 0.0 || b.q.real() <= 0.0)
      fail(ErrorCode::invalid_argument, entry.name + " needs real p, q in (0, 1); complex bases are rejected to avoid "
                                                     "square-root branches");
  }

  for (const auto& [flag, sign] : req.signs) {
    if (std::find(entry.sign_flags.begin(), entry.sign_flags.end(), flag) == entry.sign_flags.end())
      fail(ErrorCode::invalid_argument, entry.name + " has no sign flag '" + flag + "'");
    if (sign != 1 && sign != -1) fail(ErrorCode::invalid_argument, "sign flags take +1 or -1");
  }
  for (const auto& flag : entry.sign_flags) inst.signs[flag] = req.signs.count(flag) ? req.signs.at(flag) : 1;

  for (const auto& r : tmpl::build_relations(entry.balancing, vars)) inst.relations.add(r);
  for (const auto& [name, expr] : entry.derived.items()) {
    Monomial m = tmpl::eval_monomial(expr.get<std::string>(), vars);
    if (inst.signs.count(name) && inst.signs.at(name) < 0) m = minus_one() * m;
    inst.derived[name] = m;
  }
  inst.lhs = tmpl::build_integral(entry.lhs, vars);
  inst.rhs = tmpl::build_integral(form.rhs, vars);
  inst.prefactor = tmpl::build_prefactor(form.prefactor, vars);
  for (IntegralSpec* s : {&inst.lhs, &inst.rhs}) s->balancing = inst.relations;

  SampleWindow window;
  window.delta = entry.margin;
  window.hi = 1.0 - entry.margin;
  for (const auto& w : entry.windows) {
    const Monomial center = tmpl::eval_monomial(w.center, vars);
    const Rational root = AffineExpr::parse(w.root).evaluate(vars);
    for (const auto& name : tmpl::expand_list(w.names, vars)) {
      window.params.push_back({name, center, root, w.scale, w.spread, w.phase_halfwidth});
      inst.free_params.push_back(name);
    }
  }
  for (IntegralSpec* s : {&inst.lhs, &inst.rhs}) {
    s->free_params = inst.free_params;
    for (const auto& [name, m] : inst.derived) s->derived_params.push_back(name);
  }

  std::vector<Monomial> guards;
  for (const auto& g : tmpl::expand_list(entry.lattice_guard, vars)) guards.push_back(tmpl::eval_monomial(g, vars));
  const double delta = window.delta;
  auto guard_margin = [guards, base = inst.base](const Assignment& a) {
    const Assignment P = with_base(a, base);
    double m = std::numeric_limits<double>::infinity();
    for (const auto& g : guards) m = std::min(m, lattice_margin(mono_eval(g, P), base));
    return m;
  };

  auto apply_free_signs = [&](Assignment& free) {
    for (const auto& [flag, sign] : inst.signs)
      if (sign < 0 && free.count(flag)) free[flag] = -free[flag];
  };

  if (req.params) {
    inst.sampled = false;
    Assignment free;
    for (const auto& name : inst.free_params) {
      auto it = req.params->find(name);
      if (it == req.params->end()) fail(ErrorCode::invalid_argument, "missing value for free parameter " + name);
      free[name] = it->second;
    }
    for (const auto& [name, v] : *req.params)
      if (std::find(inst.free_params.begin(), inst.free_params.end(), name) == inst.free_params.end())
        fail(ErrorCode::invalid_argument, name + " is not a free parameter of " + entry.name);
    apply_free_signs(free);
    inst.params = complete_assignment(free, inst.relations, inst.derived, inst.base);
    if (!guards.empty() && guard_margin(inst.params) < delta)
      fail(ErrorCode::infeasible, "a pole lattice of " + entry.name + " passes within " + std::to_string(delta) +
                                      " of the unit circle at these parameters");
  } else {
    SamplingProblem pr;
    pr.entry = entry.name + "/" + form.name;
    pr.n = req.n;
    pr.m = req.m;
    pr.base = inst.base;
    pr.window = window;
    pr.relations = inst.relations;
    pr.derived = inst.derived;
    if (entry.kind == EntryKind::transform) pr.unit_specs = {&inst.lhs, &inst.rhs};
    if (!guards.empty()) pr.checks.push_back(guard_margin);
    SampleResult s = sample_params(pr, req.seed);
    inst.sample_attempts = s.attempts;
    Assignment free;
    for (const auto& name : inst.free_params) free[name] = s.values.at(name);
    apply_free_signs(free);
    inst.params = complete_assignment(free, inst.relations, inst.derived, inst.base);
  }

  inst.lhs_contour = contour_ok(inst.lhs, inst.params, inst.base);
  inst.rhs_contour = contour_ok(inst.rhs, inst.params, inst.base);
  if (entry.kind == EntryKind::transform) {
    for (const auto* cr : {&inst.lhs_contour, &inst.rhs_contour})
      if (!cr->ok) {
        std::string msg = "unit-circle contour not admissible for " + entry.name + ":";
        for (const auto& v : cr->violations)
          msg += " |" + v.item + "| = " + std::to_string(v.modulus) + " (margin " + std::to_string(v.margin()) + ");";
        fail(ErrorCode::infeasible, msg);
      }
  }
  for (const IntegralSpec* s : {&inst.lhs, &inst.rhs}) {
    const BalanceReport bal = validate_balancing(*s, inst.params, inst.base);
    if (!bal.ok)
      fail(ErrorCode::invalid_argument, "balancing violated: " + bal.violations.front().relation + " (residual " +
                                            std::to_string(bal.violations.front().residual) + ")");
  }

  if (!entry.delegate.is_null()) {
    InstanceRequest dreq;
    dreq.identity = entry.delegate.at("identity").get<std::string>();
    dreq.n = req.n;
    dreq.base = inst.base;
    dreq.seed = req.seed;
    const Assignment P = with_base(inst.params, inst.base);
    Assignment dparams;
    for (const auto& [name, expr] : entry.delegate.at("params").items())
      dparams[name] = mono_eval(tmpl::eval_monomial(expr.get<std::string>(), vars), P);
    dreq.params = dparams;
    inst.delegate = std::make_shared<Instance>(instantiate(catalog, dreq));
    inst.delegate_params = dparams;
  }
  return inst;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::no_converge: return "no-converge";
  }
  return "?";
}

VerificationReport verify(const Instance& inst, const VerifyPolicy& policy) {
  const auto start = std::chrono::steady_clock::now();
  const IdentityEntry& e = inst.entry;
  VerificationReport rep;
  rep.identity = e.name;
  rep.form = inst.form;
  rep.n = inst.n;
  rep.m = inst.m;
  rep.uses_m = e.uses_m;
  rep.base = inst.base;
  rep.seed = inst.seed;
  rep.sampled = inst.sampled;
  rep.signs = inst.signs;
  rep.tolerance = e.tolerance_for(inst.n);
  for (const auto& name : inst.free_params)
    rep.params.emplace_back(name, inst.sampled ? "sampled" : "given", inst.params.at(name));
  for (const auto& [name, m] : inst.relations.solved()) rep.params.emplace_back(name, m.str(), inst.params.at(name));
  for (const auto& [name, m] : inst.derived)
    rep.params.emplace_back(name, relations_reduce(m, inst.relations).str(), inst.params.at(name));

  auto policy_for = [&](int dim) { return policy.grid.value_or(ConvergencePolicy::for_dimension(dim)); };
  const Assignment& P = inst.params;
  bool converged = true;

  switch (e.kind) {
    case EntryKind::transform: {
      const int dl = inst.lhs.total_dim(), dr = inst.rhs.total_dim();
      rep.lhs = side_from(eval_integral(inst.lhs, P, inst.base, policy_for(dl), policy.par), dl);
      rep.rhs = side_from(eval_integral(inst.rhs, P, inst.base, policy_for(dr), policy.par), dr);
      rep.prefactor = eval_prefactor(inst.prefactor, P, inst.base, inst.vars);
      rep.rhs_total = rep.prefactor * rep.rhs.value;
      rep.abs_err = std::abs(rep.lhs.value - rep.rhs_total);
      rep.rel_err = rep.abs_err / std::max(std::abs(rep.lhs.value), std::abs(rep.rhs_total));
      converged = rep.lhs.converged && rep.rhs.converged;
      if (inst.delegate) {
        VerifyPolicy sub = policy;
        sub.timing = false;
        const VerificationReport d = verify(*inst.delegate, sub);
        Json dj;
        dj["identity"] = d.identity;
        Json dp = Json::object();
        for (const auto& [k, v] : inst.delegate_params) dp[k] = complex_to_json(v);
        dj["params"] = dp;
        dj["lhs_agreement"] = std::abs(d.lhs.value - rep.lhs.value) / std::max(std::abs(d.lhs.value), std::abs(rep.lhs.value));
        dj["rel_err"] = d.rel_err;
        dj["verdict"] = verdict_name(d.verdict);
        rep.extras["delegate"] = dj;
      }
      break;
    }
    case EntryKind::vanishing: {
      const DeformedResult d = eval_integral_deformed_1d(inst.lhs, P, inst.base, policy_for(1), policy.par);
      rep.lhs = side_from(d.circle, 1);
      rep.lhs.value = d.value;
      rep.rhs.value = 0.0;
      rep.rhs_total = 0.0;
      rep.abs_err = std::abs(d.value);
      rep.rel_err = rep.abs_err / d.scale;
      converged = d.circle.converged;
      Json rj = Json::array();
      for (std::size_t i = 0; i < d.residue_terms.size(); ++i)
        rj.push_back({{"term", complex_to_json(d.residue_terms[i])}, {"radius", d.radii[i]}});
      rep.extras["scale"] = d.scale;
      rep.extras["circle"] = complex_to_json(d.circle.value);
      if (d.circle_radius != 1.0) rep.extras["circle_radius"] = d.circle_radius;
      rep.extras["residues"] = rj;
      break;
    }
    case EntryKind::fubini_pair: {
      if (inst.lhs.groups.size() != 2) fail(ErrorCode::unsupported, "a Fubini pair needs exactly two groups");
      const std::string outer_first = inst.lhs.groups[0].name, outer_second = inst.lhs.groups[1].name;
      // "<g>_first": integrate over g innermost.
      const ConvergencePolicy pol = policy_for(1);
      const IteratedResult a = iterated_deformed(inst.lhs, P, inst.base, outer_first, pol, policy.par);
      const IteratedResult b = iterated_deformed(inst.lhs, P, inst.base, outer_second, pol, policy.par);
      rep.lhs = side_from(b.outer_circle, 2);
      rep.lhs.value = b.value;
      rep.lhs.converged = b.converged;
      const int dr = inst.rhs.total_dim();
      rep.rhs = side_from(eval_integral(inst.rhs, P, inst.base, policy_for(dr), policy.par), dr);
      rep.prefactor = eval_prefactor(inst.prefactor, P, inst.base, inst.vars);
      rep.rhs_total = rep.prefactor * rep.rhs.value;
      rep.abs_err = std::abs(rep.lhs.value - rep.rhs_total);
      rep.rel_err = rep.abs_err / std::max(std::abs(rep.lhs.value), std::abs(rep.rhs_total));
      const double vanish = std::abs(a.value) / a.scale;
      const FubiniVerdict fv = check_admissibility(graph_from_spec(inst.lhs), inst.relations);
      Json oj;
      oj["inner"] = outer_first;
      oj["value"] = complex_to_json(a.value);
      oj["scale"] = a.scale;
      oj["relative_to_scale"] = vanish;
      oj["converged"] = a.converged;
      rep.extras[outer_first + "_first"] = oj;
      Json zj;
      zj["inner"] = outer_second;
      zj["value"] = complex_to_json(b.value);
      zj["scale"] = b.scale;
      rep.extras[outer_second + "_first"] = zj;
      rep.extras["orders_differ"] = std::abs(a.value - b.value) > rep.tolerance * std::abs(b.value);
      rep.extras["graph"] = verdict_to_json(fv);
      converged = a.converged && b.converged && rep.rhs.converged;
      if (converged && (vanish > rep.tolerance || fv.admissible)) {
        rep.verdict = Verdict::fail;
      }
      break;
    }
  }
  if (!converged) {
    rep.verdict = Verdict::no_converge;
  } else if (rep.verdict != Verdict::fail) {
    rep.verdict = rep.rel_err <= rep.tolerance ? Verdict::pass : Verdict::fail;
  }
  if (policy.timing)
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

Json VerificationReport::to_json() const {
  Json j;
  j["identity"] = identity;
  j["form"] = form;
  j["n"] = n;
  if (uses_m) j["m"] = m;
  j["base"] = {{"p", complex_to_json(base.p)}, {"q", complex_to_json(base.q)}};
  j["seed"] = seed;
  j["sampled"] = sampled;
  if (!signs.empty()) j["signs"] = signs;
  Json ps = Json::array();
  for (const auto& [name, expr, value] : params)
    ps.push_back({{"name", name}, {"expression", expr}, {"value", complex_to_json(value)}});
  j["params"] = ps;
  auto side = [](const SideResult& s) {
    return Json{{"value", complex_to_json(s.value)},
                {"dim", s.dim},
                {"grids", s.grids},
                {"deltas", s.deltas},
                {"converged", s.converged}};
  };
  j["lhs"] = side(lhs);
  j["rhs"] = side(rhs);
  j["prefactor"] = complex_to_json(prefactor);
  j["rhs_total"] = complex_to_json(rhs_total);
  j["abs_err"] = abs_err;
  j["rel_err"] = rel_err;
  j["tolerance"] = tolerance;
  if (seconds) j["seconds"] = *seconds;
  j["verdict"] = verdict_name(verdict);
  if (!extras.empty()) j["extras"] = extras;
  return j;
}

}  // namespace ellhyp
