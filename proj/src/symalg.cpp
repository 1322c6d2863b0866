// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#include "ellhyp/symalg.hpp"

#include <cctype>
#include <cmath>

#include "ellhyp/error.hpp"

namespace ellhyp {

namespace {

constexpr int kD = Monomial::kDenominator;

int mod8(long long v) { return static_cast<int>(((v % kD) + kD) % kD); }

long long to_eighths(const Rational& r, const std::string& what) {
  const Rational scaled = r * Rational(kD);
  if (!scaled.is_integer())
    fail(ErrorCode::overflow, what + ": exponent " + r.str() + " is not a multiple of 1/8");
  return scaled.num();
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

// Split at '*' outside parentheses.
std::vector<std::string> split_factors(std::string_view s) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    else if (s[i] == ')') --depth;
    else if (s[i] == '*' && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

cplx phase_value(int phase8) {
  static const double h = std::sqrt(0.5);
  static const cplx table[8] = {{1, 0}, {h, h}, {0, 1}, {-h, h}, {-1, 0}, {-h, -h}, {0, -1}, {h, -h}};
  return table[mod8(phase8)];
}

cplx int_pow(cplx z, long long k) {
  const bool invert = k < 0;
  unsigned long long e = static_cast<unsigned long long>(invert ? -k : k);
  cplx r(1.0, 0.0);
  while (e) {
    if (e & 1ULL) r *= z;
    z *= z;
    e >>= 1;
  }
  return invert ? cplx(1.0, 0.0) / r : r;
}

}  // namespace

void Monomial::set_eighths(const std::string& name, long long e8) {
  if (e8 == 0) {
    exps8_.erase(name);
    return;
  }
  if (e8 > (1LL << 30) || e8 < -(1LL << 30)) fail(ErrorCode::overflow, "exponent overflow for " + name);
  exps8_[name] = static_cast<int>(e8);
}

Monomial Monomial::generator(const std::string& name, Rational exponent) {
  if (name.empty() || !is_ident_start(name.front()))
    fail(ErrorCode::invalid_argument, "bad generator name '" + name + "'");
  Monomial m;
  m.set_eighths(name, to_eighths(exponent, name));
  return m;
}

Monomial Monomial::phase_turns(Rational turns) {
  Monomial m;
  m.phase8_ = mod8(to_eighths(turns, "phase"));
  return m;
}

Rational Monomial::exponent(std::string_view name) const {
  auto it = exps8_.find(name);
  return it == exps8_.end() ? Rational(0) : Rational(it->second, kD);
}

Monomial Monomial::inverse() const {
  Monomial r;
  r.phase8_ = mod8(-phase8_);
  for (const auto& [g, e] : exps8_) r.exps8_[g] = -e;
  return r;
}

Monomial Monomial::pow(Rational e) const {
  Monomial r;
  const Rational ph = Rational(phase8_) * e;
  if (!ph.is_integer()) fail(ErrorCode::overflow, "phase of " + str() + " leaves the 8th roots under power " + e.str());
  r.phase8_ = mod8(ph.num());
  for (const auto& [g, e8] : exps8_) {
    const Rational v = Rational(e8) * e;
    if (!v.is_integer())
      fail(ErrorCode::overflow, "exponent of " + g + " in " + str() + " leaves the 1/8 grid under power " + e.str());
    r.set_eighths(g, v.num());
  }
  return r;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial r = a;
  r.phase8_ = mod8(a.phase8_ + b.phase8_);
  for (const auto& [g, e] : b.exps8_) {
    auto it = r.exps8_.find(g);
    r.set_eighths(g, static_cast<long long>(e) + (it == r.exps8_.end() ? 0 : it->second));
  }
  return r;
}

std::string Monomial::str() const {
  std::string body;
  for (const auto& [g, e8] : exps8_) {
    if (!body.empty()) body += "*";
    body += g;
    const Rational e(e8, kD);
    if (e != Rational(1)) body += "^" + e.str();
  }
  std::string phase;
  switch (phase8_) {
    case 0: break;
    case 2: phase = "i"; break;
    case 4: phase = "-1"; break;
    case 6: phase = "-i"; break;
    default: phase = "e(" + Rational(phase8_, kD).str() + ")"; break;
  }
  if (body.empty()) return phase.empty() ? "1" : phase;
  if (phase.empty()) return body;
  if (phase == "-1") return "-" + body;
  return phase + "*" + body;
}

Monomial Monomial::parse(std::string_view text) {
  const MonomialTemplate t = MonomialTemplate::parse(text);
  if (!t.is_constant()) fail(ErrorCode::parse, "monomial '" + std::string(text) + "' has template variables");
  return t.evaluate({});
}

Monomial mono_mul(const Monomial& a, const Monomial& b) { return a * b; }

Monomial mono_root(const Monomial& m, int k) {
  if (k <= 0) fail(ErrorCode::invalid_argument, "root order must be positive");
  if (m.phase_eighths() % k != 0)
    fail(ErrorCode::overflow, "principal " + std::to_string(k) + "-th root of " + m.str() + " needs a phase finer than 1/8");
  return m.pow(Rational(1, k));
}

cplx mono_eval(const Monomial& m, const Assignment& values) {
  cplx r = phase_value(m.phase_eighths());
  for (const auto& [g, e8] : m.eighths()) {
    auto it = values.find(g);
    if (it == values.end()) fail(ErrorCode::invalid_argument, "generator '" + g + "' is not assigned");
    const cplx v = it->second;
    if (v == cplx(0.0, 0.0)) fail(ErrorCode::invalid_argument, "generator '" + g + "' assigned zero");
    long long whole = e8 / kD;
    int frac = e8 % kD;
    if (frac < 0) {
      frac += kD;
      --whole;
    }
    r *= int_pow(v, whole);
    if (frac) r *= std::exp(static_cast<double>(frac) / kD * std::log(v));
  }
  return r;
}

RelationSet::RelationSet(std::vector<Relation> relations) {
  for (const auto& r : relations) add(r);
}

void RelationSet::add(const Relation& relation) {
  const std::string& g = relation.eliminate;
  if (eliminates(g)) fail(ErrorCode::invalid_argument, "generator " + g + " is already eliminated");
  const Monomial ratio = relations_reduce(relation.lhs / relation.rhs, *this);
  const Rational e = ratio.exponent(g);
  if (e.is_zero())
    fail(ErrorCode::invalid_argument,
         "relation " + relation.lhs.str() + " = " + relation.rhs.str() + " does not involve " + g);
  const Monomial rest = ratio * Monomial::generator(g, -e);
  Monomial expr;
  try {
    expr = rest.pow(Rational(-1) / e);
  } catch (const Error& err) {
    fail(ErrorCode::overflow, "relation not solvable for " + g + " at denominator 8: " + err.what());
  }
  std::map<std::string, Monomial, std::less<>> single{{g, expr}};
  for (auto& [name, sol] : solved_) sol = substitute(sol, single);
  solved_.emplace(g, expr);
  relations_.push_back(relation);
}

Monomial substitute(const Monomial& m, const std::map<std::string, Monomial, std::less<>>& subs) {
  Monomial r = m;
  for (const auto& [g, expr] : subs) {
    const Rational e = m.exponent(g);
    if (e.is_zero()) continue;
    r = r * Monomial::generator(g, -e) * expr.pow(e);
  }
  return r;
}

Monomial relations_reduce(const Monomial& m, const RelationSet& rel) { return substitute(m, rel.solved()); }

LatticeVerdict lattice_membership(const Monomial& m) {
  if (m.phase_eighths() != 0) return LatticeVerdict::outside;
  for (const auto& [g, e8] : m.eighths()) {
    if (g != "p" && g != "q") return LatticeVerdict::outside;
    if (e8 % kD != 0 || e8 > 0) return LatticeVerdict::outside;
  }
  return LatticeVerdict::inside;
}

// ---------------------------------------------------------------------------

MonomialTemplate MonomialTemplate::parse(std::string_view text) {
  const std::string src = trim(text);
  auto bad = [&](const std::string& why) -> MonomialTemplate {
    fail(ErrorCode::parse, "monomial '" + std::string(text) + "': " + why);
  };
  if (src.empty()) return bad("empty");
  MonomialTemplate t;
  std::string_view rest = src;
  if (rest.front() == '-') {
    t.phase_eighths = 4;
    rest.remove_prefix(1);
    if (rest.empty()) return bad("dangling '-'");
  }
  for (const std::string& tok : split_factors(rest)) {
    if (tok.empty()) return bad("empty factor");
    if (tok == "1") continue;
    if (tok == "i") {
      t.phase_eighths = mod8(t.phase_eighths + 2);
      continue;
    }
    if (tok == "-1") {
      t.phase_eighths = mod8(t.phase_eighths + 4);
      continue;
    }
    if (tok == "-i") {
      t.phase_eighths = mod8(t.phase_eighths + 6);
      continue;
    }
    if (tok.size() > 3 && tok[0] == 'e' && tok[1] == '(' && tok.back() == ')') {
      const Rational turns = Rational::parse(trim(std::string_view(tok).substr(2, tok.size() - 3)));
      t.phase_eighths = mod8(t.phase_eighths + to_eighths(turns, "phase"));
      continue;
    }
    if (!is_ident_start(tok.front())) return bad("unexpected factor '" + tok + "'");
    std::size_t k = 0;
    while (k < tok.size() && is_ident_char(tok[k])) ++k;
    std::string name = tok.substr(0, k);
    if (name == "i") return bad("'i' is reserved for the phase");
    AffineExpr exp(Rational(1));
    if (k < tok.size()) {
      if (tok[k] != '^') return bad("expected '^' in '" + tok + "'");
      std::string_view e = std::string_view(tok).substr(k + 1);
      if (e.empty()) return bad("missing exponent");
      if (e.front() == '(') {
        if (e.back() != ')') return bad("unbalanced exponent");
        exp = AffineExpr::parse(e.substr(1, e.size() - 2));
      } else {
        exp = AffineExpr(Rational::parse(e));
      }
    }
    t.factors.emplace_back(std::move(name), exp);
  }
  return t;
}

bool MonomialTemplate::is_constant() const {
  for (const auto& [g, e] : factors)
    if (!e.is_constant()) return false;
  return true;
}

Monomial MonomialTemplate::evaluate(const VarBindings& vars) const {
  Monomial m = Monomial::phase_turns(Rational(phase_eighths, Monomial::kDenominator));
  for (const auto& [g, e] : factors) m = m * Monomial::generator(g, e.evaluate(vars));
  return m;
}

}  // namespace ellhyp
