#include "mechlab/constants.hpp"

#include <algorithm>

#include "mechlab/errors.hpp"

namespace mechlab {

namespace {

bool abs_error_within(const Rational& alpha, int n, const Rational& tol) {
  // |alpha - 1/sqrt(n-1)| <= tol, checked by squaring both bracket ends.
  const Rational lo = alpha - tol;
  const Rational hi = alpha + tol;
  if (sgn(hi) <= 0) return false;
  const Rational d(n - 1);
  // need (n-1)*hi^2 >= 1 and (lo <= 0 or (n-1)*lo^2 <= 1)
  if (d * hi * hi < 1) return false;
  if (sgn(lo) > 0 && d * lo * lo > 1) return false;
  return true;
}

}  // namespace

ConstantsProfile::ConstantsProfile(int n, Rational alpha, Rational beta, Rational delta,
                                   Rational delta_prime, Rational rho, int ell)
    : n_(n),
      alpha_(std::move(alpha)),
      beta_(std::move(beta)),
      delta_(std::move(delta)),
      delta_prime_(std::move(delta_prime)),
      rho_(std::move(rho)),
      ell_(ell) {
  if (n_ < 2) throw ContractError("ConstantsProfile requires n >= 2");
  if (ell_ < 0) throw ContractError("ConstantsProfile requires ell >= 0");
  if (!abs_error_within(alpha_, n_, make_rational(1, 1000000000)))
    throw ContractError("alpha must approximate 1/sqrt(n-1) within 1e-9");
  if (delta_prime_ != 2 * delta_) throw ContractError("delta' must equal 2*delta exactly");
  if (!(sgn(beta_) > 0 && beta_ < delta_ && delta_ < 1))
    throw ContractError("constants must satisfy 0 < beta < delta < 1");
  Rational grid = Rational(2 * n_) / delta_;
  grid.canonicalize();
  if (grid.get_den() != 1) throw ContractError("2n/delta must be an integer");
  if (rho_ != targeted_ratio(n_, alpha_, delta_prime_))
    throw ContractError("rho does not match its defining expression");
}

Rational ConstantsProfile::targeted_ratio(int n, const Rational& alpha,
                                          const Rational& delta_prime) {
  const Rational x = Rational(n - 1) * delta_prime;
  const Rational bad_branch = Rational(1) / (alpha + x);
  const Rational good_branch = Rational(n - 1) * alpha / (Rational(1) + x);
  return Rational(1) - delta_prime + std::min(bad_branch, good_branch);
}

ConstantsProfile ConstantsProfile::make(int n, const Rational& delta, const Rational& beta,
                                        int ell) {
  const Rational alpha = alpha_approx(n);
  const Rational delta_prime = 2 * delta;
  return ConstantsProfile(n, alpha, beta, delta, delta_prime,
                          targeted_ratio(n, alpha, delta_prime), ell);
}

ConstantsProfile ConstantsProfile::desk_defaults(int n) {
  if (n < 2) throw ContractError("desk_defaults requires n >= 2");
  const Rational alpha = alpha_approx(n);
  const Rational beta = make_rational(1, 1000000);
  // delta = 2^-k, shrinking until (a) delta <= 1/n^2 and (b) the predicted
  // certificate ratios of both branches exceed 0.96*(1+sqrt(n-1)); the bad
  // task branch predicts 1 + (1-beta)/(alpha + 2(n-1)delta), the good set
  // branch 1 + (n-1)alpha/(1 + 2(n-1)delta + 1/1000). Margin check uses
  // sqrt-exact comparison: value - 1 + 4/100 >= (96/100)*sqrt(n-1).
  const Rational margin_mult = make_rational(96, 100);
  const Rational margin_off = make_rational(4, 100);
  Rational delta = make_rational(1, 4);
  for (int k = 2; k < 64; ++k, delta /= 2) {
    if (delta * Rational(n) * Rational(n) > 1) continue;
    const Rational x = Rational(2 * (n - 1)) * delta;
    const Rational bad = (Rational(1) - beta) / (alpha + x);
    const Rational good =
        Rational(n - 1) * alpha / (Rational(1) + x + make_rational(1, 1000));
    const bool bad_ok = cmp_sqrt_scaled(static_cast<unsigned long>(n - 1), margin_mult,
                                        bad + margin_off) <= 0;
    const bool good_ok = cmp_sqrt_scaled(static_cast<unsigned long>(n - 1), margin_mult,
                                         good + margin_off) <= 0;
    if (bad_ok && good_ok) break;
  }
  return make(n, delta, beta, /*ell=*/7);
}

ConstantsProfile ConstantsProfile::with_ell(int ell) const {
  return ConstantsProfile(n_, alpha_, beta_, delta_, delta_prime_, rho_, ell);
}

long ConstantsProfile::q_grid_max() const {
  Rational grid = Rational(2 * n_) / delta_;
  grid.canonicalize();
  return grid.get_num().get_si();
}

Rational ConstantsProfile::desk_big_b() const { return Rational(1000); }

Rational ConstantsProfile::desk_theta() const {
  return Rational(1000000) * Rational(n_) * Rational(ell_ + 1) * desk_big_b();
}

}  // namespace mechlab
