// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// JSON request decoding shared by the C API and the command line. The keys
// mirror the command-line flags, so a config file is a request document.

#include <string>

#include "ellhyp/catalog.hpp"
#include "ellhyp/efun.hpp"
#include "ellhyp/fubini.hpp"
#include "ellhyp/suite.hpp"

namespace ellhyp {

// {identity, n, m, form, p, q, seed, params{name: value}, signs{name: +-1}}
InstanceRequest instance_request_from_json(const Json& doc);
// {grid{n0, n_max, rtol}, threads, timing}
VerifyPolicy verify_policy_from_json(const Json& doc);
// {suite, seeds, first_seed, p, q, jobs, only[], cache_dir} plus the policy keys
SuiteOptions suite_options_from_json(const Json& doc);

// Value of the chosen gamma variant with the truncation diagnostics of both
// Pochhammer products.
Json gamma_report(GammaVariant v, cplx x, const Base& base);

// ELLHYP_CORPUS_DIR or the corpus shipped with the build.
std::string default_corpus_dir();
// A corpus case by name, or a case file by path.
FubiniCase resolve_fubini_case(const std::string& name_or_path);
// Verdict, witnesses and prefactor argument counts. Unsupported graphs give
// verdict "unsupported" rather than an error.
Json run_fubini_case(const FubiniCase& c, const EnumerationOptions& opts = {});

}  // namespace ellhyp
