// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#include "ellhyp/ellhyp.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "ellhyp/catalog.hpp"
#include "ellhyp/error.hpp"
#include "ellhyp/requests.hpp"
#include "ellhyp/suite.hpp"
#include "ellhyp/version.hpp"

struct ellhyp_catalog {
  ellhyp::Catalog catalog;
};

struct ellhyp_report {
  ellhyp::VerificationReport report;
  std::string json;
};

namespace {

thread_local std::string last_error;

ellhyp_status set_error(ellhyp_status s, const std::string& message) {
  last_error = message;
  return s;
}

// Runs body, translating exceptions into status codes.
template <class F>
ellhyp_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return ELLHYP_OK;
  } catch (const ellhyp::Error& e) {
    return set_error(static_cast<ellhyp_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(ELLHYP_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(ELLHYP_E_INTERNAL, e.what());
  } catch (...) {
    return set_error(ELLHYP_E_INTERNAL, "unknown failure");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) ellhyp::fail(ellhyp::ErrorCode::invalid_argument, std::string(what) + " is null");
}

ellhyp::cplx from_c(ellhyp_complex z) { return {z.re, z.im}; }

ellhyp::GammaVariant variant_of(ellhyp_variant v) {
  switch (v) {
    case ELLHYP_GAMMA_PQ: return ellhyp::GammaVariant::PQ;
    case ELLHYP_GAMMA_PQ2: return ellhyp::GammaVariant::PQ2;
    case ELLHYP_GAMMA_HALF: return ellhyp::GammaVariant::HALF;
  }
  ellhyp::fail(ellhyp::ErrorCode::invalid_argument, "unknown gamma variant");
}

ellhyp::Json parse_json(const char* text) {
  try {
    return ellhyp::Json::parse(text);
  } catch (const ellhyp::Json::exception& e) {
    ellhyp::fail(ellhyp::ErrorCode::parse, e.what());
  }
}

}  // namespace

extern "C" {

const char* ellhyp_version(void) { return ellhyp::kVersion; }

const char* ellhyp_status_name(ellhyp_status status) {
  if (status == ELLHYP_OK) return "ok";
  if (status == ELLHYP_E_INTERNAL) return "internal";
  if (status > ELLHYP_OK && status < ELLHYP_E_INTERNAL)
    return ellhyp::error_code_name(static_cast<ellhyp::ErrorCode>(status));
  return "unknown";
}

const char* ellhyp_last_error(void) { return last_error.c_str(); }

void ellhyp_string_free(char* s) { std::free(s); }

ellhyp_status ellhyp_parse_complex(const char* text, ellhyp_complex* out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    const ellhyp::cplx z = ellhyp::parse_complex(text);
    *out = {z.real(), z.imag()};
  });
}

ellhyp_status ellhyp_gamma(ellhyp_variant variant, ellhyp_complex x, ellhyp_complex p, ellhyp_complex q,
                           ellhyp_complex* out) {
  return guarded([&] {
    require(out, "out");
    const ellhyp::Base base{from_c(p), from_c(q)};
    base.validate();
    const ellhyp::cplx v = ellhyp::egamma_variant(from_c(x), base, variant_of(variant));
    *out = {v.real(), v.imag()};
  });
}

ellhyp_status ellhyp_gamma_json(ellhyp_variant variant, ellhyp_complex x, ellhyp_complex p, ellhyp_complex q,
                                char** out_json) {
  return guarded([&] {
    require(out_json, "out_json");
    const ellhyp::Json j = ellhyp::gamma_report(variant_of(variant), from_c(x), {from_c(p), from_c(q)});
    *out_json = dup_string(j.dump());
  });
}

ellhyp_status ellhyp_catalog_open(const char* dir, ellhyp_catalog** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    auto* c = new ellhyp_catalog{ellhyp::Catalog::load(dir ? dir : ellhyp::Catalog::default_dir())};
    *out = c;
  });
}

void ellhyp_catalog_close(ellhyp_catalog* catalog) { delete catalog; }

ellhyp_status ellhyp_catalog_size(const ellhyp_catalog* catalog, size_t* out) {
  return guarded([&] {
    require(catalog, "catalog");
    require(out, "out");
    *out = catalog->catalog.entries().size();
  });
}

ellhyp_status ellhyp_catalog_list_json(const ellhyp_catalog* catalog, char** out_json) {
  return guarded([&] {
    require(catalog, "catalog");
    require(out_json, "out_json");
    ellhyp::Json arr = ellhyp::Json::array();
    for (const auto& info : catalog->catalog.list_identities()) {
      ellhyp::Json j;
      j["name"] = info.name;
      j["anchor"] = info.anchor;
      j["summary"] = info.summary;
      j["kind"] = ellhyp::entry_kind_name(info.kind);
      j["n"] = {{"min", info.n_min}, {"max", info.n_max}};
      if (info.uses_m) j["m"] = info.m_range;
      j["forms"] = info.forms;
      arr.push_back(j);
    }
    *out_json = dup_string(arr.dump());
  });
}

ellhyp_status ellhyp_verify_json(const ellhyp_catalog* catalog, const char* request, ellhyp_report** out) {
  return guarded([&] {
    require(catalog, "catalog");
    require(request, "request");
    require(out, "out");
    *out = nullptr;
    const ellhyp::Json doc = parse_json(request);
    const ellhyp::InstanceRequest req = ellhyp::instance_request_from_json(doc);
    const ellhyp::VerifyPolicy pol = ellhyp::verify_policy_from_json(doc);
    auto* r = new ellhyp_report{ellhyp::verify(ellhyp::instantiate(catalog->catalog, req), pol), {}};
    r->json = r->report.to_json().dump();
    *out = r;
  });
}

ellhyp_status ellhyp_report_verdict(const ellhyp_report* report, ellhyp_verdict* out) {
  return guarded([&] {
    require(report, "report");
    require(out, "out");
    switch (report->report.verdict) {
      case ellhyp::Verdict::pass: *out = ELLHYP_PASS; break;
      case ellhyp::Verdict::fail: *out = ELLHYP_FAIL; break;
      case ellhyp::Verdict::no_converge: *out = ELLHYP_NO_CONVERGE; break;
    }
  });
}

ellhyp_status ellhyp_report_rel_err(const ellhyp_report* report, double* out) {
  return guarded([&] {
    require(report, "report");
    require(out, "out");
    *out = report->report.rel_err;
  });
}

ellhyp_status ellhyp_report_json(const ellhyp_report* report, char** out_json) {
  return guarded([&] {
    require(report, "report");
    require(out_json, "out_json");
    *out_json = dup_string(report->json);
  });
}

void ellhyp_report_free(ellhyp_report* report) { delete report; }

ellhyp_status ellhyp_suite_json(const ellhyp_catalog* catalog, const char* options, char** out_json,
                                int* exit_code) {
  return guarded([&] {
    require(catalog, "catalog");
    require(out_json, "out_json");
    const ellhyp::SuiteOptions o = ellhyp::suite_options_from_json(options ? parse_json(options) : ellhyp::Json::object());
    const ellhyp::SuiteResult res = ellhyp::run_suite(catalog->catalog, o);
    *out_json = dup_string(res.to_json().dump());
    if (exit_code) *exit_code = res.exit_code();
  });
}

ellhyp_status ellhyp_fubini_case_json(const char* name_path_or_json, char** out_json) {
  return guarded([&] {
    require(name_path_or_json, "case");
    require(out_json, "out_json");
    const std::string arg = name_path_or_json;
    const bool inline_doc = arg.find_first_not_of(" \t\r\n") != std::string::npos &&
                            arg[arg.find_first_not_of(" \t\r\n")] == '{';
    const ellhyp::FubiniCase c = inline_doc ? ellhyp::fubini_case_from_json(parse_json(name_path_or_json))
                                            : ellhyp::resolve_fubini_case(arg);
    *out_json = dup_string(ellhyp::run_fubini_case(c).dump());
  });
}

ellhyp_status ellhyp_fubini_corpus_json(const char* dir, char** out_json) {
  return guarded([&] {
    require(out_json, "out_json");
    ellhyp::Json arr = ellhyp::Json::array();
    for (const auto& path : ellhyp::list_fubini_corpus(dir ? dir : ellhyp::default_corpus_dir()))
      arr.push_back(ellhyp::run_fubini_case(ellhyp::load_fubini_case(path)));
    *out_json = dup_string(arr.dump());
  });
}

}  // extern "C"
