#pragma once

#include <cstddef>

namespace nlfp::specfun {

/// Evaluation policy for the Mittag-Leffler function on the negative axis.
/// The power series is preferred for |x| <= series_cutoff, the asymptotic
/// expansion beyond it; whenever the preferred branch cannot reach
/// target_abs_tol (estimated from the summed term magnitudes resp. the first
/// omitted term) the other branch is consulted and the better one wins.
struct MLSeriesPolicy {
  double series_cutoff = 5.0;
  std::size_t asymptotic_terms = 60;
  double target_abs_tol = 1e-8;
};

/// Gamma function for positive arguments, Lanczos approximation (g=7, 9
/// coefficients) with the reflection formula below 1/2.
/// Relative error below 1e-13 on [1e-3, 170].
double gamma(double x);

/// 1/Gamma(x) on the whole real line; exactly zero at the poles 0, -1, -2, ...
double reciprocal_gamma(double x);

/// log Gamma for positive arguments.
double log_gamma(double x);

/// Standard kernel g_beta(t) = t^(beta-1) / Gamma(beta).
double g_beta(double beta, double t);

/// Mittag-Leffler E_alpha(x) for alpha in (0,1] and x <= 0.
/// alpha = 1 is forced to exp(x). Throws nlfp::accuracy_error when the policy
/// budget cannot meet target_abs_tol.
double mittag_leffler(double alpha, double x, const MLSeriesPolicy& policy = {});

/// Exponential integral E_1(t) = int_t^inf exp(-w)/w dw, t > 0.
double expint_e1(double t);

/// Complementary error function.
double erfc(double x);

/// sin(pi x) with exact zeros at integer x.
double sin_pi(double x);

}  // namespace nlfp::specfun
