// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include "ellhyp/ispec.hpp"

namespace ellhyp {

using Json = nlohmann::ordered_json;

inline constexpr const char* kIntegralSchema = "ellhyp.integral/1";
inline constexpr const char* kPrefactorSchema = "ellhyp.prefactor/1";

Json integral_to_json(const IntegralSpec& spec);
IntegralSpec integral_from_json(const Json& doc);
Json prefactor_to_json(const PrefactorSpec& pre);
PrefactorSpec prefactor_from_json(const Json& doc);

Json complex_to_json(cplx z);
cplx complex_from_json(const Json& j);
// Accepts 0.3, "0.3", "0.3+0.1i", "-2i", [re, im].
cplx parse_complex(const std::string& text);

}  // namespace ellhyp
