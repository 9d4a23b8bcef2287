#pragma once

#include <string>

#include "dadist/errors.hpp"
#include "dadist/rng.hpp"

namespace dadist {

/// Elliptical generator h. The matrix variate density of an n x m spherical
/// matrix over the beta-algebra at squared radius r^2 = tr X^H X is
/// exp(log_h(beta * r^2, N, beta)) with N = n*m*beta the realified dimension.
/// Normalizing constants follow the convention that realified components have
/// variance 1/beta under the gaussian kernel.
struct KernelSpec {
  enum class Kind { gaussian, pearson7, kotz };

  Kind kind = Kind::gaussian;
  double q = 0.0;  // pearson7 shape
  double s = 0.0;  // pearson7 scale
  double t = 0.0;  // kotz power

  /// Grammar: `gaussian`, `pearson7:q=<f>,s=<f>`, `kotz:t=<f>`.
  static KernelSpec parse(const std::string& text);
  std::string to_string() const;
};

/// Finiteness of the radial integral for realified dimension N: pearson7
/// needs q > N/2, kotz needs t > 1 - N/2. Throws config_error; called at
/// instance construction, where N is known.
void check_kernel_dimension(const KernelSpec& spec, double N);

/// log of the fully normalized generator at (already beta-scaled) argument u.
double log_h(const KernelSpec& spec, double u, double N, int beta);

/// log of integral_0^inf v^{N/2-1} h(beta a v) dv = -(N/2) log a
/// + lgamma(N/2) - (N/2) log pi, the same for every normalized kernel.
double log_radial_normalizer(const KernelSpec& spec, double a, double N);

/// Radius r >= 0 with density proportional to r^{N-1} h(beta r^2).
/// Gaussian and pearson7 draw from closed-form radial laws; kotz inverts a
/// tabulated CDF to 1e-8.
double sample_radius(const KernelSpec& spec, double N, int beta, Rng& rng);

}  // namespace dadist
