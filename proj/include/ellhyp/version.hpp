// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace ellhyp {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ellhyp
