#include "mechlab/rational.hpp"

#include <cctype>
#include <cmath>

#include "mechlab/errors.hpp"

namespace mechlab {

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw ConfigError("empty rational literal");
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '/' && c != '-' && c != '+')
      throw ConfigError("malformed rational literal: '" + text + "'");
  }
  mpq_class v;
  if (v.set_str(text, 10) != 0) throw ConfigError("malformed rational literal: '" + text + "'");
  if (v.get_den() == 0) throw ConfigError("zero denominator in rational literal: '" + text + "'");
  v.canonicalize();
  return v;
}

std::string to_string(const Rational& v) {
  return v.get_str();
}

double to_double(const Rational& v) {
  return v.get_d();
}

Rational make_rational(long num, long den) {
  if (den == 0) throw ConfigError("zero denominator");
  Rational v(num, den);
  v.canonicalize();
  return v;
}

int cmp_sqrt_scaled(unsigned long d, const Rational& x, const Rational& y) {
  // sign(sqrt(d)*x - y). sqrt(d)*x has the sign of x (d > 0), so mismatched
  // signs settle immediately; matching signs compare d*x^2 against y^2.
  if (d == 0) return -sgn(y);
  const int sx = sgn(x);
  const int sy = sgn(y);
  if (sx == 0) return -sy;
  if (sy == 0) return sx;
  if (sx > 0 && sy < 0) return 1;
  if (sx < 0 && sy > 0) return -1;
  const Rational lhs = Rational(static_cast<long>(d)) * x * x;
  const Rational rhs = y * y;
  const int c = cmp(lhs, rhs);
  return sx > 0 ? c : -c;
}

Rational alpha_approx(int n) {
  if (n < 2) throw ContractError("alpha_approx requires n >= 2");
  // ceil-style: alpha = 10^12 / floor(sqrt((n-1) * 10^24)) >= 1/sqrt(n-1),
  // with error < 1/((n-1)*10^12).
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, 12);
  Integer radicand = Integer(n - 1) * scale * scale;
  Integer root;
  mpz_sqrt(root.get_mpz_t(), radicand.get_mpz_t());
  Rational alpha(scale, root);
  alpha.canonicalize();
  return alpha;
}

QuadExt QuadExt::operator+(const QuadExt& o) const {
  return QuadExt(a_ + o.a_, b_ + o.b_, d_);
}

QuadExt QuadExt::operator-(const QuadExt& o) const {
  return QuadExt(a_ - o.a_, b_ - o.b_, d_);
}

QuadExt QuadExt::operator*(const QuadExt& o) const {
  return QuadExt(a_ * o.a_ + b_ * o.b_ * Rational(static_cast<long>(d_)),
                 a_ * o.b_ + b_ * o.a_, d_);
}

QuadExt QuadExt::div_by_sqrt() const {
  return QuadExt(b_, a_ / Rational(static_cast<long>(d_)), d_);
}

int QuadExt::sign() const {
  // sign of a + b*sqrt(d)
  const int sa = sgn(a_);
  const int sb = sgn(b_);
  if (d_ == 0 || sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // opposite signs: |a| vs |b|*sqrt(d)  <=>  a^2 vs b^2*d
  const Rational a2 = a_ * a_;
  const Rational b2d = b_ * b_ * Rational(static_cast<long>(d_));
  const int c = cmp(a2, b2d);
  if (c == 0) return 0;
  return c > 0 ? sa : sb;
}

double QuadExt::to_double() const {
  return a_.get_d() + b_.get_d() * std::sqrt(static_cast<double>(d_));
}

std::string QuadExt::to_string() const {
  if (sgn(b_) == 0) return a_.get_str();
  return a_.get_str() + " + (" + b_.get_str() + ")*sqrt(" + std::to_string(d_) + ")";
}

}  // namespace mechlab
