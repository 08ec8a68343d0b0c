#pragma once

// Real-argument special functions used by the closed forms and Ewald sums.

namespace jellium::specfun {

struct PrecisionSpec {
  double abs_tol = 1e-14;
  int max_terms = 200;

  void validate() const;
};

/// Gamma function; throws DomainError at the poles 0, -1, -2, ...
double gamma(double x);
/// log Gamma(x) for x > 0.
double log_gamma(double x);
/// 1/Gamma(x), entire; exactly zero at the poles of Gamma.
double reciprocal_gamma(double x);

/// Hurwitz zeta(s, a) = sum_{k>=0} (k+a)^{-s}, continued to all real s != 1.
///
/// Euler–Maclaurin with a shifted head of N terms; the Bernoulli tail is
/// truncated once its terms fall below the requested tolerance relative to
/// the running value.
double hurwitz_zeta(double s, double a);
/// d/ds hurwitz_zeta(s, a), same expansion differentiated term by term.
double hurwitz_zeta_deriv(double s, double a);
/// hurwitz_zeta(s, a) - hurwitz_zeta(s, b). Finite at s = 1, where the
/// poles cancel.
double hurwitz_zeta_diff(double s, double a, double b);
double hurwitz_zeta_diff_deriv(double s, double a, double b);

double riemann_zeta(double s);
double riemann_zeta_deriv(double s);

/// Dirichlet L-series of the nontrivial character mod 3:
/// 1 - 2^{-s} + 4^{-s} - 5^{-s} + ... = 3^{-s} (zeta(s,1/3) - zeta(s,2/3)).
double dirichlet_l3(double s);
double dirichlet_l3_deriv(double s);

/// Dirichlet beta (character mod 4): 4^{-s} (zeta(s,1/4) - zeta(s,3/4)).
double dirichlet_beta(double s);
double dirichlet_beta_deriv(double s);

/// Exponential integral E1(x) = Gamma(0, x), x > 0.
double expint_e1(double x);

/// Upper incomplete gamma Gamma(a, x) for any real a and x > 0.
double upper_incomplete_gamma(double a, double x);

}  // namespace jellium::specfun
