// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
// ellhyp command line: gamma, list, verify, suite and fubini subcommands.
// Exit codes: 0 pass, 1 usage or input error, 2 fail, 3 no convergence.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ellhyp/ellhyp.h"
#include "json.hpp"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitUsage = 1;
constexpr int kExitFail = 2;
constexpr int kExitNoConverge = 3;

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(ellhyp_status s) {
  if (s != ELLHYP_OK) throw Usage(std::string(ellhyp_status_name(s)) + ": " + ellhyp_last_error());
}

// Owns a string handed out by the library.
std::string take(char* s) {
  std::string out = s ? s : "";
  ellhyp_string_free(s);
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Usage("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Usage(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw Usage("cannot write " + path);
  out << text << "\n";
}

Json parse_complex_text(const std::string& text) {
  ellhyp_complex z;
  check(ellhyp_parse_complex(text.c_str(), &z));
  return Json::array({z.re, z.im});
}

// "n0,nmax" or "n0,nmax,rtol"
Json parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) parts.push_back(part);
  if (parts.size() < 2 || parts.size() > 3) throw Usage("--grid expects n0,nmax[,rtol]");
  try {
    Json g;
    g["n0"] = std::stoi(parts[0]);
    g["n_max"] = std::stoi(parts[1]);
    if (parts.size() == 3) g["rtol"] = std::stod(parts[2]);
    return g;
  } catch (const std::exception&) {
    throw Usage("--grid expects n0,nmax[,rtol], got '" + text + "'");
  }
}

// "name=+1" or "name=-1"
Json parse_signs(const std::vector<std::string>& items) {
  Json s = Json::object();
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Usage("--sign expects name=+1 or name=-1");
    const std::string v = item.substr(eq + 1);
    if (v != "1" && v != "+1" && v != "-1") throw Usage("--sign value must be +1 or -1");
    s[item.substr(0, eq)] = v == "-1" ? -1 : 1;
  }
  return s;
}

int exit_for_verdict(ellhyp_verdict v) {
  switch (v) {
    case ELLHYP_PASS: return 0;
    case ELLHYP_FAIL: return kExitFail;
    case ELLHYP_NO_CONVERGE: return kExitNoConverge;
  }
  return kExitFail;
}

struct CatalogHandle {
  ellhyp_catalog* ptr = nullptr;
  explicit CatalogHandle(const std::string& dir) { check(ellhyp_catalog_open(dir.empty() ? nullptr : dir.c_str(), &ptr)); }
  ~CatalogHandle() { ellhyp_catalog_close(ptr); }
  CatalogHandle(const CatalogHandle&) = delete;
  CatalogHandle& operator=(const CatalogHandle&) = delete;
};

// Flags shared by verify and suite.
struct CommonFlags {
  std::string p, q, grid, config, catalog;
  unsigned threads = 0;
  bool timing = false;
  std::string json_out;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--p", f.p, "base p (real or a+bi)");
  cmd->add_option("--q", f.q, "base q (real or a+bi)");
  cmd->add_option("--grid", f.grid, "convergence policy n0,nmax[,rtol]");
  cmd->add_option("--threads", f.threads, "worker threads (0: ELLHYP_THREADS or all cores)");
  cmd->add_flag("--timing", f.timing, "report wall seconds (reports stop being byte-stable)");
  cmd->add_option("--json", f.json_out, "write the JSON report here ('-' for stdout)");
  cmd->add_option("--config", f.config, "JSON file mirroring the flags; flags win");
  cmd->add_option("--catalog", f.catalog, "catalog directory");
}

void apply_common(const CLI::App* cmd, const CommonFlags& f, Json& req) {
  if (cmd->count("--p")) req["p"] = parse_complex_text(f.p);
  if (cmd->count("--q")) req["q"] = parse_complex_text(f.q);
  if (cmd->count("--grid")) req["grid"] = parse_grid(f.grid);
  if (cmd->count("--threads")) req["threads"] = f.threads;
  if (f.timing) req["timing"] = true;
}

Json load_config(const CommonFlags& f) {
  if (f.config.empty()) return Json::object();
  Json doc = read_json_file(f.config);
  if (!doc.is_object()) throw Usage(f.config + ": config must be a JSON object");
  return doc;
}

int cmd_gamma(const std::string& variant, const std::string& x, const std::string& p, const std::string& q) {
  ellhyp_variant v;
  if (variant == "pq") {
    v = ELLHYP_GAMMA_PQ;
  } else if (variant == "pq2") {
    v = ELLHYP_GAMMA_PQ2;
  } else if (variant == "half") {
    v = ELLHYP_GAMMA_HALF;
  } else {
    throw Usage("--variant must be pq, pq2 or half");
  }
  ellhyp_complex cx, cp, cq;
  check(ellhyp_parse_complex(x.c_str(), &cx));
  check(ellhyp_parse_complex(p.c_str(), &cp));
  check(ellhyp_parse_complex(q.c_str(), &cq));
  char* out = nullptr;
  check(ellhyp_gamma_json(v, cx, cp, cq, &out));
  std::cout << Json::parse(take(out)).dump(2) << "\n";
  return 0;
}

int cmd_list(const std::string& catalog_dir, bool as_json) {
  CatalogHandle cat(catalog_dir);
  char* out = nullptr;
  check(ellhyp_catalog_list_json(cat.ptr, &out));
  const Json list = Json::parse(take(out));
  if (as_json) {
    std::cout << list.dump(2) << "\n";
    return 0;
  }
  for (const auto& e : list) {
    std::string range = "n=" + std::to_string(e["n"]["min"].get<int>()) + ".." + std::to_string(e["n"]["max"].get<int>());
    if (e.contains("m")) range += " m=" + e["m"].get<std::string>();
    std::printf("%-22s %-12s %-16s %s\n", e["name"].get<std::string>().c_str(), e["kind"].get<std::string>().c_str(),
                range.c_str(), e["summary"].get<std::string>().c_str());
  }
  return 0;
}

int cmd_verify(const CLI::App* cmd, const CommonFlags& f, const std::string& identity, int n, int m,
               const std::string& form, std::uint64_t seed, const std::string& params_file,
               const std::vector<std::string>& signs) {
  Json req = load_config(f);
  if (cmd->count("--identity")) req["identity"] = identity;
  if (cmd->count("--n")) req["n"] = n;
  if (cmd->count("--m")) req["m"] = m;
  if (cmd->count("--form")) req["form"] = form;
  if (cmd->count("--seed")) req["seed"] = seed;
  if (!params_file.empty()) req["params"] = read_json_file(params_file);
  if (!signs.empty()) req["signs"] = parse_signs(signs);
  apply_common(cmd, f, req);
  if (!req.contains("identity")) throw Usage("verify needs --identity");

  CatalogHandle cat(f.catalog);
  ellhyp_report* rep = nullptr;
  check(ellhyp_verify_json(cat.ptr, req.dump().c_str(), &rep));
  char* out = nullptr;
  ellhyp_verdict verdict = ELLHYP_FAIL;
  const ellhyp_status s1 = ellhyp_report_json(rep, &out);
  const ellhyp_status s2 = ellhyp_report_verdict(rep, &verdict);
  ellhyp_report_free(rep);
  check(s1);
  check(s2);
  const std::string text = Json::parse(take(out)).dump(2);
  if (f.json_out.empty() || f.json_out == "-") {
    std::cout << text << "\n";
  } else {
    write_text(f.json_out, text);
    std::cerr << identity << ": " << (verdict == ELLHYP_PASS ? "pass" : verdict == ELLHYP_FAIL ? "fail" : "no-converge")
              << "\n";
  }
  return exit_for_verdict(verdict);
}

int cmd_suite(const CLI::App* cmd, const CommonFlags& f, const std::string& suite, int seeds,
              std::uint64_t first_seed, unsigned jobs, const std::vector<std::string>& only,
              const std::string& cache_dir) {
  Json req = load_config(f);
  if (cmd->count("--suite")) req["suite"] = suite;
  if (cmd->count("--seeds")) req["seeds"] = seeds;
  if (cmd->count("--first-seed")) req["first_seed"] = first_seed;
  if (cmd->count("--jobs")) req["jobs"] = jobs;
  if (!only.empty()) req["only"] = only;
  if (cmd->count("--cache-dir")) req["cache_dir"] = cache_dir;
  apply_common(cmd, f, req);

  CatalogHandle cat(f.catalog);
  char* out = nullptr;
  int code = 0;
  check(ellhyp_suite_json(cat.ptr, req.dump().c_str(), &out, &code));
  const Json result = Json::parse(take(out));
  for (const auto& row : result["rows"]) {
    std::string tag = row["identity"].get<std::string>() + " n=" + std::to_string(row["n"].get<int>());
    if (row.contains("m") && row["m"].is_number()) tag += " m=" + std::to_string(row["m"].get<int>());
    if (row.contains("form")) tag += " " + row["form"].get<std::string>();
    if (row.contains("signs") && !row["signs"].empty()) tag += " signs=" + row["signs"].dump();
    tag += " seed=" + std::to_string(row["seed"].get<std::uint64_t>());
    if (row.contains("error")) {
      std::fprintf(stderr, "%-60s error  %s\n", tag.c_str(), row["error"]["message"].get<std::string>().c_str());
    } else {
      std::fprintf(stderr, "%-60s %-11s rel_err=%.3e\n", tag.c_str(), row["verdict"].get<std::string>().c_str(),
                   row["rel_err"].get<double>());
    }
  }
  const auto& s = result["summary"];
  std::fprintf(stderr, "%s: %d rows, %d pass, %d fail, %d no-converge, %d error\n", result["suite"].get<std::string>().c_str(),
               s["rows"].get<int>(), s["pass"].get<int>(), s["fail"].get<int>(), s["no_converge"].get<int>(),
               s["error"].get<int>());
  write_text(f.json_out.empty() ? "-" : f.json_out, result.dump(2));
  return code;
}

int cmd_fubini(const std::string& which, bool corpus, const std::string& corpus_dir) {
  char* out = nullptr;
  if (corpus) {
    check(ellhyp_fubini_corpus_json(corpus_dir.empty() ? nullptr : corpus_dir.c_str(), &out));
    const Json all = Json::parse(take(out));
    bool ok = true;
    for (const auto& c : all) {
      const bool match = !c.contains("matches_expected") || c["matches_expected"].get<bool>();
      ok = ok && match;
      std::fprintf(stderr, "%-28s %-13s %s\n", c["name"].get<std::string>().c_str(),
                   c["verdict"].get<std::string>().c_str(), match ? "as expected" : "UNEXPECTED");
    }
    std::cout << all.dump(2) << "\n";
    return ok ? 0 : kExitFail;
  }
  if (which.empty()) throw Usage("fubini needs --case or --corpus");
  check(ellhyp_fubini_case_json(which.c_str(), &out));
  const Json c = Json::parse(take(out));
  std::cout << c.dump(2) << "\n";
  return c.value("matches_expected", true) ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of elliptic hypergeometric integral identities"};
  app.set_version_flag("--version", ellhyp_version());
  app.require_subcommand(1);

  std::string variant = "pq", gx, gp, gq;
  auto* gamma = app.add_subcommand("gamma", "evaluate an elliptic gamma function");
  gamma->add_option("--variant", variant, "pq, pq2 or half")->capture_default_str();
  gamma->add_option("--x", gx, "argument")->required();
  gamma->add_option("--p", gp, "base p")->required();
  gamma->add_option("--q", gq, "base q")->required();

  std::string list_catalog;
  bool list_json = false;
  auto* list = app.add_subcommand("list", "list catalog identities");
  list->add_option("--catalog", list_catalog, "catalog directory");
  list->add_flag("--json", list_json, "print JSON");

  CommonFlags vf;
  std::string identity, form, params_file;
  int vn = 1, vm = 0;
  std::uint64_t seed = 1;
  std::vector<std::string> signs;
  auto* ver = app.add_subcommand("verify", "verify one identity instance");
  ver->add_option("--identity", identity, "catalog identity");
  ver->add_option("--n", vn, "dimension parameter");
  ver->add_option("--m", vm, "second dimension parameter");
  ver->add_option("--form", form, "right-hand side form");
  auto* seed_opt = ver->add_option("--seed", seed, "sampling seed");
  ver->add_option("--params", params_file, "JSON file of free parameter values")->excludes(seed_opt);
  ver->add_option("--sign", signs, "sign flag, name=+1 or name=-1");
  add_common(ver, vf);

  CommonFlags sf;
  std::string suite = "smoke", cache_dir;
  int seeds = 1;
  std::uint64_t first_seed = 1;
  unsigned jobs = 0;
  std::vector<std::string> only;
  auto* sui = app.add_subcommand("suite", "run a verification suite");
  sui->add_option("--suite", suite, "smoke, full or slow")->capture_default_str();
  sui->add_option("--seeds", seeds, "seeds per case")->capture_default_str();
  sui->add_option("--first-seed", first_seed, "first seed")->capture_default_str();
  sui->add_option("--jobs", jobs, "concurrent rows (0: all cores)");
  sui->add_option("--only", only, "restrict to these identities");
  sui->add_option("--cache-dir", cache_dir, "report cache directory (default ELLHYP_CACHE_DIR)");
  add_common(sui, sf);

  std::string fcase, corpus_dir;
  bool corpus = false;
  auto* fub = app.add_subcommand("fubini", "check Fubini admissibility of an iterated integral");
  fub->add_option("--case", fcase, "corpus case name, case file, or inline JSON");
  fub->add_flag("--corpus", corpus, "run every corpus case");
  fub->add_option("--corpus-dir", corpus_dir, "corpus directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gamma) return cmd_gamma(variant, gx, gp, gq);
    if (*list) return cmd_list(list_catalog, list_json);
    if (*ver) return cmd_verify(ver, vf, identity, vn, vm, form, seed, params_file, signs);
    if (*sui) return cmd_suite(sui, sf, suite, seeds, first_seed, jobs, only, cache_dir);
    if (*fub) return cmd_fubini(fcase, corpus, corpus_dir);
  } catch (const Usage& e) {
    std::cerr << "ellhyp: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "ellhyp: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
