// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#include "ellhyp/templates.hpp"

#include "ellhyp/error.hpp"

namespace ellhyp::tmpl {

namespace {

std::string json_string(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  fail(ErrorCode::parse, "expected a string or integer, got " + j.dump());
}

std::int64_t eval_int(const Json& j, const VarBindings& vars) {
  return AffineExpr::parse(json_string(j)).evaluate_int(vars);
}

void expand_one(const std::string& s, const VarBindings& vars, std::vector<std::string>& out) {
  const auto open = s.find('{');
  if (open == std::string::npos) {
    out.push_back(s);
    return;
  }
  const auto close = s.find('}', open);
  if (close == std::string::npos) fail(ErrorCode::parse, "bad range in '" + s + "'");
  auto dots = s.find("..", open);
  if (dots == std::string::npos || dots > close) {
    // {expr}: a single computed index
    const std::int64_t k = AffineExpr::parse(s.substr(open + 1, close - open - 1)).evaluate_int(vars);
    expand_one(s.substr(0, open) + std::to_string(k) + s.substr(close + 1), vars, out);
    return;
  }
  const std::int64_t a = AffineExpr::parse(s.substr(open + 1, dots - open - 1)).evaluate_int(vars);
  const std::int64_t b = AffineExpr::parse(s.substr(dots + 2, close - dots - 2)).evaluate_int(vars);
  for (std::int64_t k = a; k <= b; ++k)
    expand_one(s.substr(0, open) + std::to_string(k) + s.substr(close + 1), vars, out);
}

std::vector<Slot> parse_slots(const Json& j) {
  std::vector<Slot> slots;
  for (const auto& s : j) {
    if (s.is_string()) {
      std::string g = s.get<std::string>();
      int orbit = 1;
      if (const auto hat = g.find('^'); hat != std::string::npos) {
        orbit = std::stoi(g.substr(hat + 1));
        g = g.substr(0, hat);
      }
      slots.push_back({g, orbit, -1});
    } else {
      slots.push_back({s.at("group").get<std::string>(), s.value("orbit", 1), s.value("index", -1)});
    }
  }
  return slots;
}

// Multipliers contributed by each / pairs / cross (just "1" if none).
std::vector<Monomial> multipliers(const Json& f, const VarBindings& vars) {
  std::vector<Monomial> out;
  if (f.contains("each")) {
    for (const auto& s : expand_list(f.at("each"), vars)) out.push_back(eval_monomial(s, vars));
  } else if (f.contains("pairs")) {
    std::vector<Monomial> xs;
    for (const auto& s : expand_list(f.at("pairs"), vars)) xs.push_back(eval_monomial(s, vars));
    for (std::size_t a = 0; a < xs.size(); ++a)
      for (std::size_t b = a + 1; b < xs.size(); ++b) out.push_back(xs[a] * xs[b]);
  } else if (f.contains("cross")) {
    const Json& c = f.at("cross");
    if (!c.is_array() || c.size() != 2) fail(ErrorCode::parse, "cross needs two lists");
    std::vector<Monomial> A, B;
    for (const auto& s : expand_list(c[0], vars)) A.push_back(eval_monomial(s, vars));
    for (const auto& s : expand_list(c[1], vars)) B.push_back(eval_monomial(s, vars));
    for (const auto& a : A)
      for (const auto& b : B) out.push_back(a * b);
  } else {
    out.emplace_back();
  }
  return out;
}

struct IndexRange {
  std::string var;
  Json from, to;
};

std::optional<IndexRange> index_of(const Json& f) {
  if (!f.contains("index")) return std::nullopt;
  const Json& ix = f.at("index");
  return IndexRange{ix.value("var", std::string("i")), ix.at("from"), ix.at("to")};
}

}  // namespace

std::vector<std::string> expand_list(const Json& list, const VarBindings& vars) {
  std::vector<std::string> out;
  if (list.is_string()) {
    expand_one(list.get<std::string>(), vars, out);
    return out;
  }
  for (const auto& s : list) expand_one(json_string(s), vars, out);
  return out;
}

Monomial eval_monomial(const std::string& text, const VarBindings& vars) {
  return MonomialTemplate::parse(text).evaluate(vars);
}

IntegralSpec build_integral(const Json& side, const VarBindings& vars) {
  try {
    IntegralSpec spec;
    if (side.contains("groups"))
      for (const auto& g : side.at("groups")) {
        VarGroup vg;
        vg.name = g.at("name").get<std::string>();
        vg.kernel.n = static_cast<int>(eval_int(g.at("dim"), vars));
        if (vg.kernel.n < 0) fail(ErrorCode::invalid_argument, "negative dimension for group " + vg.name);
        const std::string fam = g.value("kernel", std::string("I"));
        vg.kernel.family = fam == "II" ? KernelFamily::II : KernelFamily::I;
        if (fam != "I" && fam != "II") fail(ErrorCode::parse, "kernel must be I or II");
        if (vg.kernel.family == KernelFamily::II) vg.kernel.t = eval_monomial(g.at("t").get<std::string>(), vars);
        vg.kernel.variant = parse_variant(g.value("variant", std::string("pq")));
        spec.groups.push_back(vg);
      }
    if (side.contains("factors"))
      for (const auto& f : side.at("factors")) {
        const GammaVariant variant = parse_variant(f.value("variant", std::string("pq")));
        const std::vector<Slot> slots = f.contains("slots") ? parse_slots(f.at("slots")) : std::vector<Slot>{};
        const int power = f.value("power", 1);
        const std::string coef = f.value("coef", std::string("1"));
        const auto mults = multipliers(f, vars);
        auto emit = [&](const VarBindings& vb) {
          const Monomial c = eval_monomial(coef, vb);
          for (const auto& m : mults) spec.factors.push_back({variant, c * m, slots, power});
        };
        if (auto ix = index_of(f)) {
          const std::int64_t from = eval_int(ix->from, vars), to = eval_int(ix->to, vars);
          for (std::int64_t i = from; i <= to; ++i) {
            VarBindings vb = vars;
            vb[ix->var] = i;
            emit(vb);
          }
        } else {
          emit(vars);
        }
      }
    spec.validate();
    return spec;
  } catch (const Json::exception& e) {
    fail(ErrorCode::parse, std::string("integral template: ") + e.what());
  }
}

PrefactorSpec build_prefactor(const Json& factors, const VarBindings& vars) {
  try {
    PrefactorSpec pre;
    for (const auto& f : factors) {
      if (f.contains("slots")) fail(ErrorCode::parse, "prefactor factors cannot have slots");
      const GammaVariant variant = parse_variant(f.value("variant", std::string("pq")));
      const int power = f.value("power", 1);
      const std::string coef = f.value("coef", std::string("1"));
      const auto mults = multipliers(f, vars);
      if (auto ix = index_of(f)) {
        const AffineExpr from = AffineExpr::parse(json_string(ix->from));
        const AffineExpr to = AffineExpr::parse(json_string(ix->to));
        VarBindings v0 = vars, v1 = vars;
        v0[ix->var] = from.evaluate_int(vars);
        v1[ix->var] = v0[ix->var] + 1;
        const Monomial c0 = eval_monomial(coef, v0);
        const Monomial step = eval_monomial(coef, v1) / c0;
        for (const auto& m : mults) pre.families.push_back({variant, c0 * m, step, to - from + AffineExpr(Rational(1)), power});
      } else {
        const Monomial c = eval_monomial(coef, vars);
        for (const auto& m : mults) pre.factors.push_back({variant, c * m, {}, power});
      }
    }
    return pre;
  } catch (const Json::exception& e) {
    fail(ErrorCode::parse, std::string("prefactor template: ") + e.what());
  }
}

std::vector<Relation> build_relations(const Json& balancing, const VarBindings& vars) {
  std::vector<Relation> out;
  auto side = [&](const Json& j) {
    Monomial m;
    if (j.is_string()) return eval_monomial(j.get<std::string>(), vars);
    for (const auto& s : expand_list(j, vars)) m = m * eval_monomial(s, vars);
    return m;
  };
  for (const auto& r : balancing) {
    const auto names = expand_list(r.at("eliminate"), vars);
    if (names.size() != 1) fail(ErrorCode::parse, "a relation eliminates exactly one generator");
    out.push_back({side(r.at("lhs")), side(r.at("rhs")), names.front()});
  }
  return out;
}

}  // namespace ellhyp::tmpl
