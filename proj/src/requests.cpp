// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#include "ellhyp/requests.hpp"

#include <cstdlib>
#include <filesystem>
#include <set>

#include "ellhyp/error.hpp"

namespace ellhyp {

namespace {

const std::set<std::string> kVerifyKeys = {"identity", "n",    "m",    "form",    "p",     "q",
                                           "seed",     "params", "signs", "grid", "threads", "timing"};
const std::set<std::string> kSuiteKeys = {"suite", "seeds", "first_seed", "p",       "q",      "jobs",
                                          "only",  "cache_dir", "grid",   "threads", "timing"};

void check_keys(const Json& doc, const std::set<std::string>& keys) {
  if (!doc.is_object()) fail(ErrorCode::parse, "request must be a JSON object");
  for (const auto& [k, v] : doc.items())
    if (!keys.count(k)) fail(ErrorCode::invalid_argument, "unknown request key '" + k + "'");
}

std::optional<Base> base_from(const Json& doc) {
  const bool hp = doc.contains("p"), hq = doc.contains("q");
  if (hp != hq) fail(ErrorCode::invalid_argument, "p and q must be given together");
  if (!hp) return std::nullopt;
  return Base{complex_from_json(doc.at("p")), complex_from_json(doc.at("q"))};
}

template <class T>
T get(const Json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const Json::exception&) {
    fail(ErrorCode::parse, std::string("bad value for '") + key + "': " + doc.at(key).dump());
  }
}

}  // namespace

InstanceRequest instance_request_from_json(const Json& doc) {
  check_keys(doc, kVerifyKeys);
  InstanceRequest r;
  if (!doc.contains("identity")) fail(ErrorCode::invalid_argument, "request needs an identity");
  r.identity = get<std::string>(doc, "identity", "");
  r.n = get<int>(doc, "n", 1);
  r.m = get<int>(doc, "m", 0);
  r.form = get<std::string>(doc, "form", "");
  r.base = base_from(doc);
  r.seed = get<std::uint64_t>(doc, "seed", 1);
  if (doc.contains("params")) {
    if (!doc.at("params").is_object()) fail(ErrorCode::parse, "params must be an object");
    Assignment a;
    for (const auto& [k, v] : doc.at("params").items()) a[k] = complex_from_json(v);
    r.params = std::move(a);
  }
  if (doc.contains("signs")) r.signs = get<std::map<std::string, int>>(doc, "signs", {});
  return r;
}

VerifyPolicy verify_policy_from_json(const Json& doc) {
  if (!doc.is_object()) fail(ErrorCode::parse, "request must be a JSON object");
  VerifyPolicy pol;
  if (doc.contains("grid")) {
    const Json& g = doc.at("grid");
    ConvergencePolicy c;
    c.n0 = get<int>(g, "n0", c.n0);
    c.n_max = get<int>(g, "n_max", c.n_max);
    c.rtol = get<double>(g, "rtol", c.rtol);
    pol.grid = c;
  }
  pol.par.threads = get<unsigned>(doc, "threads", 0);
  pol.timing = get<bool>(doc, "timing", false);
  return pol;
}

SuiteOptions suite_options_from_json(const Json& doc) {
  check_keys(doc, kSuiteKeys);
  SuiteOptions o;
  o.policy = verify_policy_from_json(doc);
  o.suite = get<std::string>(doc, "suite", o.suite);
  o.seeds = get<int>(doc, "seeds", o.seeds);
  o.first_seed = get<std::uint64_t>(doc, "first_seed", o.first_seed);
  o.base = base_from(doc);
  o.jobs = get<unsigned>(doc, "jobs", 0);
  o.only = get<std::vector<std::string>>(doc, "only", {});
  if (doc.contains("cache_dir")) o.cache_dir = get<std::string>(doc, "cache_dir", "");
  return o;
}

Json gamma_report(GammaVariant v, cplx x, const Base& base) {
  base.validate();
  const TruncationPolicy policy;
  const Base b = variant_base(base, v);
  const cplx value = egamma_variant(x, base, v, policy);
  ProductStats num, den;
  poch2(b.p * b.q / x, b, policy, &num);
  poch2(x, b, policy, &den);
  Json j;
  j["variant"] = variant_name(v);
  j["x"] = complex_to_json(x);
  j["p"] = complex_to_json(base.p);
  j["q"] = complex_to_json(base.q);
  j["value"] = complex_to_json(value);
  j["abs"] = std::abs(value);
  j["truncation"] = {{"cutoff", policy.cutoff},
                     {"numerator", {{"terms", num.terms}, {"tail_bound", num.tail_bound}}},
                     {"denominator", {{"terms", den.terms}, {"tail_bound", den.tail_bound}}}};
  return j;
}

std::string default_corpus_dir() {
  if (const char* env = std::getenv("ELLHYP_CORPUS_DIR"); env && *env) return env;
#ifdef ELLHYP_DEFAULT_CORPUS_DIR
  return ELLHYP_DEFAULT_CORPUS_DIR;
#else
  return "corpus/fubini";
#endif
}

FubiniCase resolve_fubini_case(const std::string& name_or_path) {
  namespace fs = std::filesystem;
  if (fs::exists(name_or_path) && fs::is_regular_file(name_or_path)) return load_fubini_case(name_or_path);
  const fs::path candidate = fs::path(default_corpus_dir()) / (name_or_path + ".json");
  if (fs::exists(candidate)) return load_fubini_case(candidate.string());
  fail(ErrorCode::not_found, "no fubini case '" + name_or_path + "' in " + default_corpus_dir());
}

Json run_fubini_case(const FubiniCase& c, const EnumerationOptions& opts) {
  Json j;
  j["name"] = c.name;
  if (!c.description.empty()) j["description"] = c.description;
  if (!c.expected.empty()) j["expected"] = c.expected;
  std::string verdict;
  try {
    const FubiniGraph g = graph_from_spec(c.spec);
    const FubiniVerdict v = check_admissibility(g, c.spec.balancing, opts);
    const PrefactorArguments pa = prefactor_arguments(g, opts);
    std::uint64_t open_count = 0, closed_count = 0;
    for (const auto& [mono, k] : pa.open) open_count += k;
    for (const auto& [mono, k] : pa.closed) closed_count += k;
    verdict = v.admissible ? "admissible" : "inadmissible";
    j["graph"] = graph_to_json(g);
    j["result"] = verdict_to_json(v);
    j["prefactor_arguments"] = {{"open_distinct", pa.open.size()},
                                {"open_count", open_count},
                                {"closed_distinct", pa.closed.size()},
                                {"closed_count", closed_count}};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::unsupported) throw;
    verdict = "unsupported";
    j["reason"] = e.what();
  }
  j["verdict"] = verdict;
  if (!c.expected.empty()) j["matches_expected"] = verdict == c.expected;
  return j;
}

}  // namespace ellhyp
