#pragma once

#include <functional>
#include <vector>

#include "dadist/algebra.hpp"

namespace dadist {

/// When on, the stereographic matrix transform uses the exponent as printed in
/// the source material, -[beta(n+m+1)/2 + 1]. The default uses
/// -[beta(n+m-1)/2 + 1], the form validated by the finite-difference oracle
/// and by the m = 1 specialization.
enum class StrictPaper { off, on };

// ---- closed-form log-Jacobians ---------------------------------------------

/// Y = A X B + C with A (n x n), B (m x m), X (n x m):
/// log |A^H A|^{beta m/2} |B^H B|^{beta n/2}.
double log_jacobian_linear(const DAMatrix& a, const DAMatrix& b, int n, int m);

/// Y = A S A^H on Hermitian S of order m: log |A^H A|^{beta(m-1)/2 + 1}.
double log_jacobian_congruence(const DAMatrix& a, int m);

/// Y = S^{-1}: -[beta(m-1) + 2] logdet S.
double log_jacobian_inverse(const HermitianPD& s);

/// Y = X (I - X^H X)^{-1/2} (ball to full space).
double log_jacobian_stereo_matrix_forward(const DAMatrix& x, StrictPaper mode = StrictPaper::off);
/// X = Y (I + Y^H Y)^{-1/2} (full space to ball).
double log_jacobian_stereo_matrix_backward(const DAMatrix& y, StrictPaper mode = StrictPaper::off);

/// Y = (1 - tr X^H X)^{-1/2} X on the trace ball: -(beta n m / 2 + 1) log(1 - tr X^H X).
double log_jacobian_stereo_trace_forward(const DAMatrix& x);
/// X = (1 + tr Y^H Y)^{-1/2} Y: -(beta n m / 2 + 1) log(1 + tr Y^H Y).
double log_jacobian_stereo_trace_backward(const DAMatrix& y);

/// Density weight of S = X^H X for X (n x m): log[2^{-m} |S|^{beta(n-m+1)/2 - 1}].
double gram_pushforward_logweight(const HermitianPD& s, int n);

/// Density weight of the singular values d_1 > ... > d_m > 0 of X (n x m):
/// log[2^{-m} pi^tau prod d_i^{beta(n-m+1)-1} prod_{i<j} (d_i^2 - d_j^2)^beta]
/// with tau = 0, -m, -2m, -4m for beta = 1, 2, 4, 8. Exact ties rejected.
double svd_logweight(const std::vector<double>& d, int n, int m, int beta);

// ---- numeric oracle ---------------------------------------------------------

using VecFn = std::function<std::vector<double>(const std::vector<double>&)>;

/// log |det| of the central-difference Jacobian of f at x, Richardson-checked:
/// the values at steps h and h/2 must agree to 4 significant digits, otherwise
/// a domain error is raised. Non-invertible Jacobian raises singular_error.
double numeric_log_jacobian(const VecFn& f, const std::vector<double>& x, double h = 1e-5);

// ---- Hermitian coordinates --------------------------------------------------

/// Functionally independent realified coordinates of a Hermitian matrix:
/// m real diagonal entries then the beta components of each strict-upper entry.
std::vector<double> herm_vec(const DAMatrix& s);
DAMatrix herm_unvec(Algebra algebra, int m, const std::vector<double>& v);

}  // namespace dadist
