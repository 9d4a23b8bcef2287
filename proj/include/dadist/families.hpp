#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dadist/algebra.hpp"
#include "dadist/kernels.hpp"

namespace dadist {

/// The distribution families. Kernel-dependent families carry an elliptical
/// generator h; marginal and inverse families do not. "gamma" forms keep the
/// radial scalar v = tr X0^H X0, "wishart" forms keep the Gram matrix
/// V = X0^H X0; the suffix names the law of the dependent arguments.
enum class FamilyId {
  gamma_elliptical,
  wishart_elliptical,
  multi_gamma,
  multi_wishart,
  gamma_pearson7,
  wishart_t,
  pearson7_marginal,
  pearson7_matric_marginal,
  gamma_pearson2,
  wishart_pearson2,
  pearson2_marginal,
  pearson2_matric_marginal,
  gamma_beta2,
  wishart_beta2,
  beta2_marginal,
  beta2_matric_marginal,
  gamma_beta1,
  wishart_beta1,
  beta1_marginal,
  beta1_matric_marginal,
  gamma_gen_wishart,
  tri_gamma_p7_p2,
  tri_wishart_p7_p2,
  tri_gamma_b2_b1,
  tri_wishart_b2_b1,
  inverse_beta1_mixed,
  inverse_beta1_matric,
  scaled_wishart,
};

FamilyId parse_family(const std::string& kebab_name);
std::string family_name(FamilyId id);
bool family_is_kernel_dependent(FamilyId id);

/// One evaluation point. Slot layout depends on the family:
///   scalars: the radial v (or all v_i for multi_gamma)
///   rects:   rectangular arguments X_i / T_i / R_i (n_i x m)
///   pds:     Hermitian PD arguments V / F_i / B_i / A_i / W_i (m x m)
struct FamilyPoint {
  std::vector<double> scalars;
  std::vector<DAMatrix> rects;
  std::vector<HermitianPD> pds;
};

/// Classical special case reached by a FamilyInstance, used as a test oracle.
struct ClassicalReduction {
  enum class Kind { beta, beta_prime, student_t_scaled, gamma, wishart };
  Kind kind;
  double p1 = 0.0;  // first shape (or degrees of freedom / scale as noted)
  double p2 = 0.0;  // second shape, or scale for gamma, or order m for wishart
};

class FamilyInstance {
 public:
  /// a = (a_0, a_1, .., a_k) extended shape parameters, a_i = n_i / 2.
  /// kernel must be present exactly for kernel-dependent families.
  /// sigmas only for scaled_wishart (k+1 matrices); inverted = r only for the
  /// inverse families (slots 1..r hold A_i = B_i^{-1}).
  FamilyInstance(FamilyId family, Algebra algebra, int m, std::vector<double> a,
                 std::optional<KernelSpec> kernel = std::nullopt,
                 std::vector<HermitianPD> sigmas = {}, int inverted = 0);

  FamilyId family() const { return family_; }
  Algebra algebra() const { return algebra_; }
  int m() const { return m_; }
  int k() const { return static_cast<int>(a_.size()) - 1; }
  const std::vector<double>& a() const { return a_; }
  const std::optional<KernelSpec>& kernel() const { return kernel_; }
  const std::vector<HermitianPD>& sigmas() const { return sigmas_; }
  int inverted() const { return inverted_; }

  /// Sum of all extended parameters (the paper's n/2 under n_i = 2 a_i).
  double a_total() const;

  double log_density(const FamilyPoint& x) const;
  std::vector<std::string> check_domain(const FamilyPoint& x) const;
  std::optional<ClassicalReduction> reduce_known() const;

 private:
  void validate_point_shape(const FamilyPoint& x) const;

  FamilyId family_;
  Algebra algebra_;
  int m_;
  std::vector<double> a_;
  std::optional<KernelSpec> kernel_;
  std::vector<HermitianPD> sigmas_;
  int inverted_;
  double log_norm_;  // point-independent part of the log density
};

}  // namespace dadist
