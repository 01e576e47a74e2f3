#pragma once

#include <gmpxx.h>

#include <string>

namespace mechlab {

/// Exact rational arithmetic everywhere. Monotonicity verdicts and tie
/// detection are meaningless under floating-point noise, so no operation in
/// this library rounds.
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q" or "p" (optionally signed). Throws ConfigError on malformed
/// input or zero denominator.
Rational parse_rational(const std::string& text);

/// Canonical "p/q" rendering; integral values render as "p".
std::string to_string(const Rational& v);

/// Decimal approximation for human-facing output only.
double to_double(const Rational& v);

/// Rational from integer pair, canonicalized.
Rational make_rational(long num, long den);

/// Sign of (sqrt(d) * x - y), computed exactly. d must be >= 0. Used to
/// compare weighted loads whose weight is an irrational square root.
int cmp_sqrt_scaled(unsigned long d, const Rational& x, const Rational& y);

/// Rational upper approximation of 1/sqrt(n-1) with absolute error <= 1e-12
/// (well inside the 1e-9 contract). Always >= the true value.
Rational alpha_approx(int n);

/// a + b*sqrt(d) with rational a, b and a fixed nonnegative integer radicand.
/// Closed under +, -, * and division by sqrt(d); comparisons are exact.
/// Used by the Clarke payment computation for sqrt-weighted VCG, where the
/// payments themselves are irrational.
class QuadExt {
 public:
  QuadExt() : a_(0), b_(0), d_(1) {}
  QuadExt(Rational a, Rational b, unsigned long d) : a_(std::move(a)), b_(std::move(b)), d_(d) {}
  static QuadExt rational(Rational a) { return QuadExt(std::move(a), 0, 1); }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  unsigned long d() const { return d_; }

  QuadExt operator+(const QuadExt& o) const;
  QuadExt operator-(const QuadExt& o) const;
  QuadExt operator*(const QuadExt& o) const;
  QuadExt& operator+=(const QuadExt& o) { return *this = *this + o; }
  QuadExt& operator-=(const QuadExt& o) { return *this = *this - o; }

  /// Divides by sqrt(d): (a + b*sqrt(d))/sqrt(d) = b + (a/d)*sqrt(d).
  QuadExt div_by_sqrt() const;

  /// Exact sign of the real value a + b*sqrt(d).
  int sign() const;

  bool operator==(const QuadExt& o) const { return (*this - o).sign() == 0; }
  bool operator<(const QuadExt& o) const { return (*this - o).sign() < 0; }
  bool operator<=(const QuadExt& o) const { return (*this - o).sign() <= 0; }
  bool operator>(const QuadExt& o) const { return (*this - o).sign() > 0; }
  bool operator>=(const QuadExt& o) const { return (*this - o).sign() >= 0; }

  double to_double() const;
  std::string to_string() const;

 private:
  Rational a_, b_;
  unsigned long d_;
};

}  // namespace mechlab
