#pragma once

#include "dadist/errors.hpp"

namespace dadist {

/// log Gamma_m^beta[a] = (m(m-1)beta/4) log pi + sum_{i=1}^m lgamma(a - (i-1)beta/2).
/// Throws domain_error when a <= (m-1)beta/2 (pole condition).
double log_mv_gamma(int beta, int m, double a);

/// log Vol(V_{m,n}) for the Stiefel manifold of m-frames in F^n,
/// = m log 2 + (mn beta / 2) log pi - log Gamma_m^beta[n beta / 2].
double log_stiefel_volume(int beta, int m, int n);

/// Regularized incomplete gamma P(a, x) = gamma(a, x)/Gamma(a), a > 0, x >= 0.
double reg_inc_gamma(double a, double x);

/// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
double reg_inc_beta(double a, double b, double x);

}  // namespace dadist
