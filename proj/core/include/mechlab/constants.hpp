#pragma once

#include "mechlab/rational.hpp"

namespace mechlab {

/// The fixed constants of the clustered construction for a given player
/// count n. alpha is a rational upper approximation of 1/sqrt(n-1) (absolute
/// error <= 1e-9); everything downstream is computed exactly from it.
class ConstantsProfile {
 public:
  ConstantsProfile(int n, Rational alpha, Rational beta, Rational delta,
                   Rational delta_prime, Rational rho, int ell);

  /// Desk-scale defaults: ell+1 = 8 tasks per cluster, beta = 1e-6, delta a
  /// power of two small enough that both certificate branches clear 0.96 of
  /// the 1+sqrt(n-1) target (2n/delta is then automatically an integer).
  static ConstantsProfile desk_defaults(int n);

  /// Same derivations with explicit delta/beta/ell; rho and delta' computed.
  static ConstantsProfile make(int n, const Rational& delta, const Rational& beta, int ell);

  ConstantsProfile with_ell(int ell) const;

  int n() const { return n_; }
  const Rational& alpha() const { return alpha_; }
  const Rational& beta() const { return beta_; }
  const Rational& delta() const { return delta_; }
  const Rational& delta_prime() const { return delta_prime_; }
  const Rational& rho() const { return rho_; }
  int ell() const { return ell_; }

  /// Number of grid points q = 0..2n/delta (the grid has 2n/delta + 1 points).
  long q_grid_max() const;

  /// Desk-scale instance magnitudes: B = 10^3, Theta = 10^6 * n * (ell+1) * B.
  Rational desk_big_b() const;
  Rational desk_theta() const;

  /// 1 - delta' + min(1/(alpha + (n-1) delta'), (n-1) alpha / (1 + (n-1) delta')),
  /// evaluated exactly; this is what rho must equal.
  static Rational targeted_ratio(int n, const Rational& alpha, const Rational& delta_prime);

 private:
  int n_;
  Rational alpha_;
  Rational beta_;
  Rational delta_;
  Rational delta_prime_;
  Rational rho_;
  int ell_;
};

}  // namespace mechlab
