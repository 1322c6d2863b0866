// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace ellhyp {

// Exact rational with positive denominator, always in lowest terms.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  // "3", "-1/2"
  std::string str() const;
  // Accepts "3", "-1/2", "+4/8".
  static Rational parse(std::string_view text);

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(-num_, den_); }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

using VarBindings = std::map<std::string, std::int64_t, std::less<>>;

// Affine combination c0 + sum c_k x_k of integer-valued template variables
// (n, m, i). Used for dimensions, index ranges and exponents in templates.
class AffineExpr {
 public:
  AffineExpr() = default;
  AffineExpr(Rational constant) : constant_(constant) {}
  static AffineExpr variable(const std::string& name);

  static AffineExpr parse(std::string_view text);

  Rational evaluate(const VarBindings& vars) const;
  std::int64_t evaluate_int(const VarBindings& vars) const;
  bool is_constant() const { return coefs_.empty(); }
  const Rational& constant() const { return constant_; }
  const std::map<std::string, Rational>& coefficients() const { return coefs_; }
  std::string str() const;

  friend AffineExpr operator+(const AffineExpr& a, const AffineExpr& b);
  friend AffineExpr operator-(const AffineExpr& a, const AffineExpr& b);
  friend AffineExpr operator*(const AffineExpr& a, const Rational& s);
  friend bool operator==(const AffineExpr& a, const AffineExpr& b) = default;

 private:
  Rational constant_;
  std::map<std::string, Rational> coefs_;
};

}  // namespace ellhyp
