// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ellhyp/catalog.hpp"

namespace ellhyp {

struct SuiteOptions {
  std::string suite = "smoke";
  int seeds = 1;
  std::uint64_t first_seed = 1;
  std::optional<Base> base;    // entry defaults otherwise
  VerifyPolicy policy;
  unsigned jobs = 0;           // concurrent rows; 0 picks ParallelOptions
  std::vector<std::string> only;  // restrict to these identities
  // Report cache; ELLHYP_CACHE_DIR when unset. Ignored with timing on.
  std::optional<std::string> cache_dir;
};

struct SuiteRow {
  std::string identity;
  SuiteCase params;
  std::uint64_t seed = 1;
  Json report;         // report JSON, or {identity, ..., error} on failure
  std::optional<Verdict> verdict;  // empty when the row raised an error
  bool cached = false;
};

struct SuiteResult {
  std::string suite;
  std::vector<SuiteRow> rows;  // ordered by (entry, n, m, form, signs, seed)
  int passed = 0, failed = 0, no_converge = 0, errors = 0;

  // 0 all rows pass, 3 some row did not converge (and none failed), 2 otherwise.
  int exit_code() const;
  Json to_json() const;
};

// The rows a suite would run, in report order.
std::vector<SuiteRow> plan_suite(const Catalog& catalog, const SuiteOptions& options);
SuiteResult run_suite(const Catalog& catalog, const SuiteOptions& options);

// Request JSON for one row; this is also the cache key material.
Json row_request_json(const SuiteRow& row, const SuiteOptions& options);

}  // namespace ellhyp
