// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#include "ellhyp/suite.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "ellhyp/error.hpp"
#include "ellhyp/version.hpp"

namespace ellhyp {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::optional<std::string> cache_dir_for(const SuiteOptions& o) {
  if (o.policy.timing) return std::nullopt;
  if (o.cache_dir) return o.cache_dir->empty() ? std::nullopt : o.cache_dir;
  if (const char* env = std::getenv("ELLHYP_CACHE_DIR"); env && *env) return std::string(env);
  return std::nullopt;
}

std::string cache_path(const std::string& dir, const Json& request) {
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.json",
                static_cast<unsigned long long>(fnv1a(std::string(kVersion) + request.dump())));
  return (std::filesystem::path(dir) / name).string();
}

std::optional<Json> cache_load(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    Json j = Json::parse(in);
    if (j.contains("report")) return j.at("report");
  } catch (const Json::exception&) {
  }
  return std::nullopt;
}

void cache_store(const std::string& path, const Json& request, const Json& report) {
  std::error_code ec;
  std::filesystem::create_directories(std::filesystem::path(path).parent_path(), ec);
  const std::string tmp = path + ".tmp" + std::to_string(fnv1a(report.dump()));
  {
    std::ofstream out(tmp);
    if (!out) return;  // the cache is best effort
    out << Json{{"version", kVersion}, {"request", request}, {"report", report}}.dump(1) << "\n";
  }
  std::filesystem::rename(tmp, path, ec);
}

Json error_row(const SuiteRow& row, const std::string& code, const std::string& message) {
  Json j;
  j["identity"] = row.identity;
  j["form"] = row.params.form;
  j["n"] = row.params.n;
  j["m"] = row.params.m;
  j["seed"] = row.seed;
  j["error"] = {{"code", code}, {"message", message}};
  return j;
}

void run_row(const Catalog& catalog, const SuiteOptions& o, const VerifyPolicy& policy, SuiteRow& row) {
  const Json request = row_request_json(row, o);
  const auto dir = cache_dir_for(o);
  if (dir) {
    if (auto cached = cache_load(cache_path(*dir, request))) {
      row.report = *cached;
      row.cached = true;
      const std::string v = row.report.value("verdict", std::string());
      if (v == "pass") row.verdict = Verdict::pass;
      if (v == "fail") row.verdict = Verdict::fail;
      if (v == "no-converge") row.verdict = Verdict::no_converge;
      return;
    }
  }
  try {
    InstanceRequest req;
    req.identity = row.identity;
    req.n = row.params.n;
    req.m = row.params.m;
    req.form = row.params.form;
    req.base = o.base;
    req.seed = row.seed;
    req.signs = row.params.signs;
    const VerificationReport rep = verify(instantiate(catalog, req), policy);
    row.report = rep.to_json();
    row.verdict = rep.verdict;
  } catch (const Error& e) {
    row.report = error_row(row, error_code_name(e.code()), e.what());
  } catch (const std::exception& e) {
    row.report = error_row(row, "internal", e.what());
  }
  if (dir && row.verdict) cache_store(cache_path(*dir, request), request, row.report);
}

}  // namespace

Json row_request_json(const SuiteRow& row, const SuiteOptions& o) {
  Json j;
  j["identity"] = row.identity;
  j["n"] = row.params.n;
  j["m"] = row.params.m;
  j["form"] = row.params.form;
  if (!row.params.signs.empty()) j["signs"] = row.params.signs;
  j["seed"] = row.seed;
  if (o.base) j["base"] = {{"p", complex_to_json(o.base->p)}, {"q", complex_to_json(o.base->q)}};
  if (o.policy.grid) j["grid"] = {{"n0", o.policy.grid->n0}, {"n_max", o.policy.grid->n_max}, {"rtol", o.policy.grid->rtol}};
  return j;
}

std::vector<SuiteRow> plan_suite(const Catalog& catalog, const SuiteOptions& o) {
  if (o.seeds < 1) fail(ErrorCode::invalid_argument, "a suite needs at least one seed");
  bool known = false;
  for (const auto& e : catalog.entries()) known = known || e.suites.count(o.suite);
  if (!known) fail(ErrorCode::not_found, "no catalog entry belongs to suite '" + o.suite + "'");
  for (const auto& name : o.only) catalog.find(name);
  std::vector<SuiteRow> rows;
  for (const auto& e : catalog.entries()) {
    if (!o.only.empty() && std::find(o.only.begin(), o.only.end(), e.name) == o.only.end()) continue;
    auto it = e.suites.find(o.suite);
    if (it == e.suites.end()) continue;
    std::vector<SuiteCase> cases = it->second;
    std::stable_sort(cases.begin(), cases.end(), [](const SuiteCase& a, const SuiteCase& b) {
      return std::tie(a.n, a.m, a.form, a.signs) < std::tie(b.n, b.m, b.form, b.signs);
    });
    for (const auto& c : cases)
      for (int k = 0; k < o.seeds; ++k) {
        SuiteRow row;
        row.identity = e.name;
        row.params = c;
        row.seed = o.first_seed + static_cast<std::uint64_t>(k);
        rows.push_back(std::move(row));
      }
  }
  return rows;
}

SuiteResult run_suite(const Catalog& catalog, const SuiteOptions& o) {
  SuiteResult res;
  res.suite = o.suite;
  res.rows = plan_suite(catalog, o);
  const unsigned jobs = std::max(1u, std::min<unsigned>(o.jobs ? o.jobs : ParallelOptions{}.resolved(),
                                                        static_cast<unsigned>(res.rows.size())));
  VerifyPolicy policy = o.policy;
  // Row-level fan-out replaces grid-level fan-out; results do not depend on it.
  if (jobs > 1) policy.par.threads = 1;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < res.rows.size(); i = next++) run_row(catalog, o, policy, res.rows[i]);
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < jobs; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& r : res.rows) {
    if (!r.verdict) {
      ++res.errors;
    } else if (*r.verdict == Verdict::pass) {
      ++res.passed;
    } else if (*r.verdict == Verdict::fail) {
      ++res.failed;
    } else {
      ++res.no_converge;
    }
  }
  return res;
}

int SuiteResult::exit_code() const {
  if (failed > 0 || errors > 0) return 2;
  if (no_converge > 0) return 3;
  return 0;
}

Json SuiteResult::to_json() const {
  Json j;
  j["suite"] = suite;
  j["version"] = kVersion;
  Json rs = Json::array();
  for (const auto& r : rows) rs.push_back(r.report);
  j["rows"] = rs;
  j["summary"] = {{"rows", rows.size()},
                  {"pass", passed},
                  {"fail", failed},
                  {"no_converge", no_converge},
                  {"error", errors}};
  return j;
}

}  // namespace ellhyp
