// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ellhyp/rational.hpp"

namespace ellhyp {

using cplx = std::complex<double>;
using Assignment = std::map<std::string, cplx, std::less<>>;

// phase * prod g^e with phase an 8th root of unity and every exponent a
// multiple of 1/8. Stored in eighths so the canonical form is a plain map.
//
// String grammar (canonical output shown, parser is a little looser):
//   1  -1  i  -i  e(3/8)            pure phases
//   t  t^2  t^-1  t^1/2  p^-3/4     generator powers
//   -t^2   i*t   e(1/8)*p^1/2*q     phase prefix, factors joined by '*'
class Monomial {
 public:
  static constexpr int kDenominator = 8;

  Monomial() = default;
  static Monomial generator(const std::string& name, Rational exponent = Rational(1));
  static Monomial phase_turns(Rational turns);
  static Monomial parse(std::string_view text);

  Rational phase() const { return Rational(phase8_, kDenominator); }
  int phase_eighths() const { return phase8_; }
  Rational exponent(std::string_view name) const;
  const std::map<std::string, int, std::less<>>& eighths() const { return exps8_; }
  bool is_one() const { return phase8_ == 0 && exps8_.empty(); }
  bool has(std::string_view name) const { return exps8_.find(name) != exps8_.end(); }

  Monomial inverse() const;
  // Raise to a rational power: exponents and phase are scaled, and both must
  // stay on the 1/8 grid.
  Monomial pow(Rational e) const;

  std::string str() const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend Monomial operator/(const Monomial& a, const Monomial& b) { return a * b.inverse(); }
  friend bool operator==(const Monomial& a, const Monomial& b) = default;
  friend bool operator<(const Monomial& a, const Monomial& b) {
    if (a.phase8_ != b.phase8_) return a.phase8_ < b.phase8_;
    return a.exps8_ < b.exps8_;
  }

 private:
  void set_eighths(const std::string& name, long long e8);

  int phase8_ = 0;
  std::map<std::string, int, std::less<>> exps8_;
};

Monomial mono_mul(const Monomial& a, const Monomial& b);
// Principal k-th root: exponents / k, phase / k taken in [0, 1/k).
Monomial mono_root(const Monomial& m, int k);
// Principal powers: value^e = value^floor(e) * exp(frac(e) * Log value).
cplx mono_eval(const Monomial& m, const Assignment& values);

// Balancing relation lhs = rhs, solved for one designated generator.
struct Relation {
  Monomial lhs;
  Monomial rhs;
  std::string eliminate;
};

class RelationSet {
 public:
  RelationSet() = default;
  explicit RelationSet(std::vector<Relation> relations);

  // Solves the relation for its generator and folds it into the existing
  // solutions. Throws if the generator is absent or already eliminated, or if
  // the solution leaves the 1/8 grid.
  void add(const Relation& relation);

  const std::vector<Relation>& relations() const { return relations_; }
  const std::map<std::string, Monomial, std::less<>>& solved() const { return solved_; }
  bool eliminates(std::string_view name) const { return solved_.find(name) != solved_.end(); }
  bool empty() const { return relations_.empty(); }

 private:
  std::vector<Relation> relations_;
  std::map<std::string, Monomial, std::less<>> solved_;
};

Monomial relations_reduce(const Monomial& m, const RelationSet& rel);
// Replace generators by monomials (no recursion into the replacements).
Monomial substitute(const Monomial& m, const std::map<std::string, Monomial, std::less<>>& subs);

enum class LatticeVerdict { inside, outside };

// inside iff m = p^-a q^-b with integers a, b >= 0 and no other content.
LatticeVerdict lattice_membership(const Monomial& m);

// Monomial whose exponents are affine in template variables (n, m, i).
class MonomialTemplate {
 public:
  MonomialTemplate() = default;
  static MonomialTemplate parse(std::string_view text);
  Monomial evaluate(const VarBindings& vars) const;
  bool is_constant() const;

  int phase_eighths = 0;
  std::vector<std::pair<std::string, AffineExpr>> factors;
};

}  // namespace ellhyp
