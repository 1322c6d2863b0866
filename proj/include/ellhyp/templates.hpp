// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "ellhyp/json_io.hpp"

// Template language used by catalog entries and the Fubini corpus. It is the
// concrete spec format plus a few expansions, all driven by the template
// variables n and m:
//
//   "t{1..2*n+4}"            list entry expanding to t1 ... t_{2n+4}
//   "t{2*n+4}"               single entry with a computed index
//   "t^(n/2-1)"              exponent affine in n, m, i
//   {"coef": c, "each": L}   one factor c*x for every x in L
//   {"coef": c, "pairs": L}  one factor c*x*y for every unordered pair of L
//   {"coef": c, "cross": [A, B]}  one factor c*a*b for a in A, b in B
//   {"index": {"var": "i", "from": "0", "to": "n-1"}}  product over i
//   "slots": ["z", "z^2", "y"]  shorthand for orbit-1 / orbit-2 slots
namespace ellhyp::tmpl {

std::vector<std::string> expand_list(const Json& list, const VarBindings& vars);
Monomial eval_monomial(const std::string& text, const VarBindings& vars);

IntegralSpec build_integral(const Json& side, const VarBindings& vars);
PrefactorSpec build_prefactor(const Json& factors, const VarBindings& vars);
std::vector<Relation> build_relations(const Json& balancing, const VarBindings& vars);

}  // namespace ellhyp::tmpl
