// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#include "ellhyp/rational.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <numeric>

#include "ellhyp/error.hpp"

namespace ellhyp {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) fail(ErrorCode::overflow, "rational overflow");
  return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) fail(ErrorCode::overflow, "rational overflow");
  return r;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) fail(ErrorCode::invalid_argument, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g ? num / g : 0;
  den_ = g ? den / g : 1;
}

Rational operator+(const Rational& a, const Rational& b) {
  const std::int64_t l = std::lcm(a.den_, b.den_);
  return Rational(checked_add(checked_mul(a.num_, l / a.den_), checked_mul(b.num_, l / b.den_)), l);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  const std::int64_t g1 = std::gcd(a.num_, b.den_);
  const std::int64_t g2 = std::gcd(b.num_, a.den_);
  const std::int64_t n1 = g1 ? a.num_ / g1 : 0, d2 = g1 ? b.den_ / g1 : b.den_;
  const std::int64_t n2 = g2 ? b.num_ / g2 : 0, d1 = g2 ? a.den_ / g2 : a.den_;
  return Rational(checked_mul(n1, n2), checked_mul(d1, d2));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) fail(ErrorCode::invalid_argument, "rational division by zero");
  return a * Rational(b.den_, b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  // 128-bit cross multiplication cannot overflow for 64-bit parts.
  const __int128 l = static_cast<__int128>(a.num_) * b.den_;
  const __int128 r = static_cast<__int128>(b.num_) * a.den_;
  if (l < r) return std::strong_ordering::less;
  if (l > r) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  auto read_int = [&](std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
      fail(ErrorCode::parse, "bad rational '" + std::string(text) + "'");
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(read_int(text));
  return Rational(read_int(text.substr(0, slash)), read_int(text.substr(slash + 1)));
}

// ---------------------------------------------------------------------------

AffineExpr AffineExpr::variable(const std::string& name) {
  AffineExpr e;
  e.coefs_[name] = Rational(1);
  return e;
}

AffineExpr operator+(const AffineExpr& a, const AffineExpr& b) {
  AffineExpr r = a;
  r.constant_ += b.constant_;
  for (const auto& [k, v] : b.coefs_) {
    Rational s = r.coefs_[k] + v;
    if (s.is_zero()) r.coefs_.erase(k);
    else r.coefs_[k] = s;
  }
  return r;
}

AffineExpr operator*(const AffineExpr& a, const Rational& s) {
  AffineExpr r;
  if (s.is_zero()) return r;
  r.constant_ = a.constant_ * s;
  for (const auto& [k, v] : a.coefs_) r.coefs_[k] = v * s;
  return r;
}

AffineExpr operator-(const AffineExpr& a, const AffineExpr& b) { return a + b * Rational(-1); }

Rational AffineExpr::evaluate(const VarBindings& vars) const {
  Rational r = constant_;
  for (const auto& [k, v] : coefs_) {
    auto it = vars.find(k);
    if (it == vars.end()) fail(ErrorCode::invalid_argument, "unbound template variable '" + k + "'");
    r += v * Rational(it->second);
  }
  return r;
}

std::int64_t AffineExpr::evaluate_int(const VarBindings& vars) const {
  const Rational r = evaluate(vars);
  if (!r.is_integer()) fail(ErrorCode::invalid_argument, "expression " + str() + " is not an integer here");
  return r.num();
}

std::string AffineExpr::str() const {
  std::string out;
  for (const auto& [k, v] : coefs_) {
    std::string term;
    if (v == Rational(1)) term = k;
    else if (v == Rational(-1)) term = "-" + k;
    else term = v.str() + "*" + k;
    if (!out.empty() && term.front() != '-') out += "+";
    out += term;
  }
  if (!constant_.is_zero() || out.empty()) {
    std::string c = constant_.str();
    if (!out.empty() && c.front() != '-') out += "+";
    out += c;
  }
  return out;
}

namespace {

class AffineParser {
 public:
  explicit AffineParser(std::string_view s) : s_(s) {}

  AffineExpr parse_all() {
    AffineExpr e = expr();
    skip();
    if (pos_ != s_.size()) error("trailing characters");
    return e;
  }

 private:
  [[noreturn]] void error(const std::string& what) {
    fail(ErrorCode::parse, "affine expression '" + std::string(s_) + "': " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  AffineExpr expr() {
    AffineExpr e = term();
    for (;;) {
      if (eat('+')) e = e + term();
      else if (eat('-')) e = e - term();
      else return e;
    }
  }

  AffineExpr term() {
    AffineExpr e = factor();
    for (;;) {
      if (eat('*')) {
        AffineExpr f = factor();
        if (f.is_constant()) e = e * f.constant();
        else if (e.is_constant()) e = f * e.constant();
        else error("product of two variables");
      } else if (eat('/')) {
        AffineExpr f = factor();
        if (!f.is_constant() || f.constant().is_zero()) error("division by non-constant or zero");
        e = e * (Rational(1) / f.constant());
      } else {
        return e;
      }
    }
  }

  AffineExpr factor() {
    skip();
    if (eat('-')) return factor() * Rational(-1);
    if (eat('+')) return factor();
    if (eat('(')) {
      AffineExpr e = expr();
      if (!eat(')')) error("missing ')'");
      return e;
    }
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
      if (ec != std::errc()) error("bad integer");
      pos_ = static_cast<std::size_t>(ptr - s_.data());
      return AffineExpr(Rational(v));
    }
    if (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      return AffineExpr::variable(std::string(s_.substr(start, pos_ - start)));
    }
    error("unexpected token");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

AffineExpr AffineExpr::parse(std::string_view text) { return AffineParser(text).parse_all(); }

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::pole: return "pole";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::parse: return "parse";
    case ErrorCode::infeasible: return "infeasible";
    case ErrorCode::no_convergence: return "no_convergence";
    case ErrorCode::unsupported: return "unsupported";
    case ErrorCode::overflow: return "overflow";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

}  // namespace ellhyp
