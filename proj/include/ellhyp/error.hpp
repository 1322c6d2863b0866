// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ellhyp {

enum class ErrorCode {
  invalid_argument = 1,
  pole = 2,
  not_found = 3,
  parse = 4,
  infeasible = 5,
  no_convergence = 6,
  unsupported = 7,
  overflow = 8,
  io = 9,
};

const char* error_code_name(ErrorCode code);

// Every failure in the core surfaces as this type; the C layer maps the code
// onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace ellhyp
