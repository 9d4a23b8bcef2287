#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "dadist/errors.hpp"

namespace dadist {

/// One of the four real normed division algebras, identified by its real
/// dimension beta: 1 (reals), 2 (complexes), 4 (quaternions), 8 (octonions).
class Algebra {
 public:
  explicit Algebra(int beta);
  int beta() const { return beta_; }
  friend bool operator==(const Algebra& a, const Algebra& b) { return a.beta_ == b.beta_; }

 private:
  int beta_;
};

/// An n x m matrix over a division algebra, stored realified: beta real
/// components per entry, component r of entry (i,j) at index (i*m + j)*beta + r.
/// Component order for beta=4 is (1, i, j, k).
///
/// Octonionic matrices (beta=8) are restricted to m = 1.
class DAMatrix {
 public:
  DAMatrix(Algebra algebra, int n, int m);
  DAMatrix(Algebra algebra, int n, int m, std::vector<double> components);

  Algebra algebra() const { return algebra_; }
  int rows() const { return n_; }
  int cols() const { return m_; }

  double at(int i, int j, int r) const { return data_[index(i, j, r)]; }
  double& at(int i, int j, int r) { return data_[index(i, j, r)]; }

  const std::vector<double>& components() const { return data_; }
  std::vector<double>& components() { return data_; }

  /// All-finite check (construction enforces it; mutation through at() does not).
  bool finite() const;

 private:
  std::size_t index(int i, int j, int r) const {
    return (static_cast<std::size_t>(i) * m_ + j) * algebra_.beta() + r;
  }
  Algebra algebra_;
  int n_, m_;
  std::vector<double> data_;
};

/// Hermitian positive definite matrix over the algebra. Construction checks
/// Hermitian symmetry (exact real diagonal after symmetrization) and positive
/// definiteness through the complex embedding.
class HermitianPD {
 public:
  explicit HermitianPD(const DAMatrix& square);
  static HermitianPD identity(Algebra algebra, int m);

  Algebra algebra() const { return mat_.algebra(); }
  int order() const { return mat_.rows(); }
  const DAMatrix& matrix() const { return mat_; }

 private:
  struct unchecked_tag {};
  HermitianPD(DAMatrix mat, unchecked_tag) : mat_(std::move(mat)) {}
  DAMatrix mat_;
  friend HermitianPD hermitian_pd_unchecked(DAMatrix mat);
};

/// Internal fast path for values PD by construction. Symmetry is enforced,
/// PD is trusted.
HermitianPD hermitian_pd_unchecked(DAMatrix mat);

// ---- core operations ------------------------------------------------------

/// Algebra-homomorphic embedding into complex matrices:
/// beta=1 real-as-complex, beta=2 identity, beta=4 the 2x2 block map
/// q = a+bi+cj+dk -> [[a+bi, c+di], [-c+di, a-bi]]. beta=8 is rejected.
Eigen::MatrixXcd embed_complex(const DAMatrix& x);
Eigen::MatrixXcd embed_complex(const HermitianPD& s);

/// Inverse of embed_complex. For beta=4 the redundant block entries are
/// averaged; for beta=1 residual imaginary parts are checked small and dropped.
DAMatrix unembed_complex(Algebra algebra, const Eigen::MatrixXcd& z);

DAMatrix conj_transpose(const DAMatrix& x);
DAMatrix matmul(const DAMatrix& a, const DAMatrix& b);
DAMatrix identity_matrix(Algebra algebra, int m);

/// S = X^H X. Requires n >= m and full column rank (checked via the embedding).
HermitianPD gram(const DAMatrix& x);

/// tr X^H X = sum of squares of all realified components. Never needs rank.
double trace_gram(const DAMatrix& x);

/// Real trace of a Hermitian matrix.
double trace_real(const HermitianPD& s);

/// log of the (Moore, for beta=4) determinant: for beta in {1,2} the ordinary
/// determinant, for beta=4 half the log-determinant of the 2m x 2m embedding.
double logdet(const HermitianPD& s);

HermitianPD sqrt_pd(const HermitianPD& s);
HermitianPD inv_pd(const HermitianPD& s);

// ---- embedding-space helpers (shared by families/jacobians/sampling) ------

/// log det of a Hermitian PD complex matrix via Cholesky; throws domain_error
/// when the factorization fails. `beta` halves the result for the quaternion
/// double-counting.
double logdet_pd_embedded(const Eigen::MatrixXcd& m, int beta);

/// Real trace of an embedded Hermitian matrix (halved for beta=4).
double trace_real_embedded(const Eigen::MatrixXcd& m, int beta);

bool is_pd_embedded(const Eigen::MatrixXcd& m);

}  // namespace dadist
