// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#include <cctype>
#include <cstdlib>

#include "ellhyp/error.hpp"
#include "ellhyp/json_io.hpp"

namespace ellhyp {

namespace {

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    fail(ErrorCode::parse, std::string(what) + ": " + e.what());
  }
}

Json factor_to_json(const FactorSpec& f) {
  Json j;
  j["variant"] = variant_name(f.variant);
  j["coef"] = f.coefficient.str();
  Json slots = Json::array();
  for (const Slot& s : f.slots) {
    Json sj{{"group", s.group}, {"orbit", s.orbit}};
    if (s.index >= 0) sj["index"] = s.index;
    slots.push_back(sj);
  }
  j["slots"] = slots;
  if (f.power != 1) j["power"] = f.power;
  return j;
}

FactorSpec factor_from_json(const Json& j) {
  FactorSpec f;
  f.variant = parse_variant(j.value("variant", std::string("pq")));
  f.coefficient = Monomial::parse(j.value("coef", std::string("1")));
  f.power = j.value("power", 1);
  if (j.contains("slots"))
    for (const auto& s : j.at("slots"))
      f.slots.push_back({s.at("group").get<std::string>(), s.value("orbit", 1), s.value("index", -1)});
  return f;
}

}  // namespace

Json integral_to_json(const IntegralSpec& spec) {
  Json doc;
  doc["schema"] = kIntegralSchema;
  Json groups = Json::array();
  for (const auto& g : spec.groups) {
    Json gj{{"name", g.name}, {"dim", g.dim()}, {"kernel", g.kernel.family == KernelFamily::I ? "I" : "II"}};
    if (g.kernel.family == KernelFamily::II) gj["t"] = g.kernel.t.str();
    gj["variant"] = variant_name(g.kernel.variant);
    groups.push_back(gj);
  }
  doc["groups"] = groups;
  Json factors = Json::array();
  for (const auto& f : spec.factors) factors.push_back(factor_to_json(f));
  doc["factors"] = factors;
  Json bal = Json::array();
  for (const auto& r : spec.balancing.relations())
    bal.push_back({{"lhs", r.lhs.str()}, {"rhs", r.rhs.str()}, {"eliminate", r.eliminate}});
  doc["balancing"] = bal;
  doc["free_params"] = spec.free_params;
  doc["derived_params"] = spec.derived_params;
  return doc;
}

IntegralSpec integral_from_json(const Json& doc) {
  return guarded("integral spec", [&] {
    const std::string schema = doc.value("schema", std::string(kIntegralSchema));
    if (schema != kIntegralSchema) fail(ErrorCode::parse, "unsupported integral schema '" + schema + "'");
    IntegralSpec spec;
    for (const auto& g : doc.at("groups")) {
      VarGroup vg;
      vg.name = g.at("name").get<std::string>();
      vg.kernel.n = g.at("dim").get<int>();
      const std::string fam = g.value("kernel", std::string("I"));
      if (fam == "I") vg.kernel.family = KernelFamily::I;
      else if (fam == "II") vg.kernel.family = KernelFamily::II;
      else fail(ErrorCode::parse, "kernel must be I or II");
      if (vg.kernel.family == KernelFamily::II) vg.kernel.t = Monomial::parse(g.at("t").get<std::string>());
      vg.kernel.variant = parse_variant(g.value("variant", std::string("pq")));
      spec.groups.push_back(vg);
    }
    for (const auto& f : doc.at("factors")) spec.factors.push_back(factor_from_json(f));
    if (doc.contains("balancing"))
      for (const auto& r : doc.at("balancing"))
        spec.balancing.add({Monomial::parse(r.at("lhs").get<std::string>()), Monomial::parse(r.at("rhs").get<std::string>()),
                            r.at("eliminate").get<std::string>()});
    if (doc.contains("free_params")) spec.free_params = doc.at("free_params").get<std::vector<std::string>>();
    if (doc.contains("derived_params")) spec.derived_params = doc.at("derived_params").get<std::vector<std::string>>();
    spec.validate();
    return spec;
  });
}

Json prefactor_to_json(const PrefactorSpec& pre) {
  Json doc;
  doc["schema"] = kPrefactorSchema;
  Json factors = Json::array();
  for (const auto& f : pre.factors) factors.push_back(factor_to_json(f));
  doc["factors"] = factors;
  Json fams = Json::array();
  for (const auto& fam : pre.families) {
    Json fj{{"variant", variant_name(fam.variant)}, {"base", fam.base.str()}, {"step", fam.step.str()},
            {"count", fam.count.str()}};
    if (fam.power != 1) fj["power"] = fam.power;
    fams.push_back(fj);
  }
  doc["families"] = fams;
  return doc;
}

PrefactorSpec prefactor_from_json(const Json& doc) {
  return guarded("prefactor spec", [&] {
    PrefactorSpec pre;
    if (doc.contains("factors"))
      for (const auto& f : doc.at("factors")) pre.factors.push_back(factor_from_json(f));
    if (doc.contains("families"))
      for (const auto& f : doc.at("families"))
        pre.families.push_back({parse_variant(f.value("variant", std::string("pq"))),
                                Monomial::parse(f.at("base").get<std::string>()),
                                Monomial::parse(f.at("step").get<std::string>()),
                                AffineExpr::parse(f.at("count").get<std::string>()), f.value("power", 1)});
    return pre;
  });
}

Json complex_to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

cplx complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_string()) return parse_complex(j.get<std::string>());
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  fail(ErrorCode::parse, "expected a complex number, got " + j.dump());
}

cplx parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) fail(ErrorCode::parse, "empty complex number");
  auto bad = [&]() -> cplx { fail(ErrorCode::parse, "bad complex number '" + text + "'"); };
  const char* p = s.c_str();
  char* end = nullptr;
  if (s.back() != 'i') {
    const double re = std::strtod(p, &end);
    if (end != p + s.size()) return bad();
    return {re, 0.0};
  }
  // Split "a+bi" at the last sign that is not part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size() - 1; k > 0; --k)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  const std::string re_part = split == std::string::npos ? "" : s.substr(0, split);
  std::string im_part = s.substr(split == std::string::npos ? 0 : split, s.size() - 1 - (split == std::string::npos ? 0 : split));
  double re = 0.0, im = 0.0;
  if (!re_part.empty()) {
    re = std::strtod(re_part.c_str(), &end);
    if (end != re_part.c_str() + re_part.size()) return bad();
  }
  if (im_part.empty() || im_part == "+") im = 1.0;
  else if (im_part == "-") im = -1.0;
  else {
    im = std::strtod(im_part.c_str(), &end);
    if (end != im_part.c_str() + im_part.size()) return bad();
  }
  return {re, im};
}

}  // namespace ellhyp
