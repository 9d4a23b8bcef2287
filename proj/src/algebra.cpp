#include "dadist/algebra.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

namespace dadist {

namespace {

using cd = std::complex<double>;

void require(bool ok, const char* msg) {
  if (!ok) throw config_error(msg);
}

// Hermitian symmetry tolerance, relative to the largest component.
constexpr double kHermTol = 1e-9;

}  // namespace

Algebra::Algebra(int beta) : beta_(beta) {
  if (beta != 1 && beta != 2 && beta != 4 && beta != 8)
    throw config_error("algebra beta must be one of 1, 2, 4, 8");
}

DAMatrix::DAMatrix(Algebra algebra, int n, int m)
    : algebra_(algebra), n_(n), m_(m),
      data_(static_cast<std::size_t>(n) * m * algebra.beta(), 0.0) {
  require(n >= 1 && m >= 1, "matrix dimensions must be >= 1");
  if (algebra.beta() == 8 && m > 1)
    throw unsupported_error("octonionic matrices are supported only for m = 1");
}

DAMatrix::DAMatrix(Algebra algebra, int n, int m, std::vector<double> components)
    : algebra_(algebra), n_(n), m_(m), data_(std::move(components)) {
  require(n >= 1 && m >= 1, "matrix dimensions must be >= 1");
  if (algebra.beta() == 8 && m > 1)
    throw unsupported_error("octonionic matrices are supported only for m = 1");
  require(data_.size() == static_cast<std::size_t>(n) * m * algebra.beta(),
          "component count does not match n*m*beta");
  if (!finite()) throw config_error("matrix components must be finite");
}

bool DAMatrix::finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

Eigen::MatrixXcd embed_complex(const DAMatrix& x) {
  const int beta = x.algebra().beta();
  if (beta == 8) throw unsupported_error("no complex embedding for octonions");
  const int n = x.rows(), m = x.cols();
  if (beta == 1) {
    Eigen::MatrixXcd z(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) z(i, j) = cd(x.at(i, j, 0), 0.0);
    return z;
  }
  if (beta == 2) {
    Eigen::MatrixXcd z(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) z(i, j) = cd(x.at(i, j, 0), x.at(i, j, 1));
    return z;
  }
  // beta == 4: entrywise 2x2 blocks.
  Eigen::MatrixXcd z(2 * n, 2 * m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      const double a = x.at(i, j, 0), b = x.at(i, j, 1);
      const double c = x.at(i, j, 2), d = x.at(i, j, 3);
      z(2 * i, 2 * j) = cd(a, b);
      z(2 * i, 2 * j + 1) = cd(c, d);
      z(2 * i + 1, 2 * j) = cd(-c, d);
      z(2 * i + 1, 2 * j + 1) = cd(a, -b);
    }
  return z;
}

Eigen::MatrixXcd embed_complex(const HermitianPD& s) { return embed_complex(s.matrix()); }

DAMatrix unembed_complex(Algebra algebra, const Eigen::MatrixXcd& z) {
  const int beta = algebra.beta();
  if (beta == 8) throw unsupported_error("no complex embedding for octonions");
  if (beta == 1) {
    DAMatrix x(algebra, static_cast<int>(z.rows()), static_cast<int>(z.cols()));
    for (int i = 0; i < z.rows(); ++i)
      for (int j = 0; j < z.cols(); ++j) x.at(i, j, 0) = z(i, j).real();
    return x;
  }
  if (beta == 2) {
    DAMatrix x(algebra, static_cast<int>(z.rows()), static_cast<int>(z.cols()));
    for (int i = 0; i < z.rows(); ++i)
      for (int j = 0; j < z.cols(); ++j) {
        x.at(i, j, 0) = z(i, j).real();
        x.at(i, j, 1) = z(i, j).imag();
      }
    return x;
  }
  require(z.rows() % 2 == 0 && z.cols() % 2 == 0,
          "quaternion unembedding needs even dimensions");
  const int n = static_cast<int>(z.rows()) / 2, m = static_cast<int>(z.cols()) / 2;
  DAMatrix x(algebra, n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      const cd z11 = z(2 * i, 2 * j), z12 = z(2 * i, 2 * j + 1);
      const cd z21 = z(2 * i + 1, 2 * j), z22 = z(2 * i + 1, 2 * j + 1);
      x.at(i, j, 0) = 0.5 * (z11.real() + z22.real());
      x.at(i, j, 1) = 0.5 * (z11.imag() - z22.imag());
      x.at(i, j, 2) = 0.5 * (z12.real() - z21.real());
      x.at(i, j, 3) = 0.5 * (z12.imag() + z21.imag());
    }
  return x;
}

DAMatrix conj_transpose(const DAMatrix& x) {
  const int beta = x.algebra().beta();
  DAMatrix y(x.algebra(), x.cols(), x.rows());
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) {
      y.at(j, i, 0) = x.at(i, j, 0);
      for (int r = 1; r < beta; ++r) y.at(j, i, r) = -x.at(i, j, r);
    }
  return y;
}

DAMatrix matmul(const DAMatrix& a, const DAMatrix& b) {
  require(a.algebra() == b.algebra(), "algebra mismatch in matmul");
  require(a.cols() == b.rows(), "dimension mismatch in matmul");
  if (a.algebra().beta() == 8)
    throw unsupported_error("octonionic matrix multiplication is out of scope");
  return unembed_complex(a.algebra(), embed_complex(a) * embed_complex(b));
}

DAMatrix identity_matrix(Algebra algebra, int m) {
  DAMatrix x(algebra, m, m);
  for (int i = 0; i < m; ++i) x.at(i, i, 0) = 1.0;
  return x;
}

HermitianPD::HermitianPD(const DAMatrix& square) : mat_(square) {
  const int m = square.rows();
  const int beta = square.algebra().beta();
  require(square.cols() == m, "HermitianPD needs a square matrix");
  double scale = 0.0;
  for (double v : square.components()) scale = std::max(scale, std::abs(v));
  // Check Hermitian symmetry, then symmetrize exactly.
  for (int i = 0; i < m; ++i) {
    for (int r = 1; r < beta; ++r)
      if (std::abs(mat_.at(i, i, r)) > kHermTol * std::max(1.0, scale))
        throw domain_error("HermitianPD: diagonal must be real");
    mat_.at(i, i, 0) = square.at(i, i, 0);
    for (int r = 1; r < beta; ++r) mat_.at(i, i, r) = 0.0;
    for (int j = i + 1; j < m; ++j) {
      if (std::abs(mat_.at(i, j, 0) - mat_.at(j, i, 0)) > kHermTol * std::max(1.0, scale))
        throw domain_error("HermitianPD: matrix is not Hermitian");
      const double re = 0.5 * (mat_.at(i, j, 0) + mat_.at(j, i, 0));
      mat_.at(i, j, 0) = re;
      mat_.at(j, i, 0) = re;
      for (int r = 1; r < beta; ++r) {
        if (std::abs(mat_.at(i, j, r) + mat_.at(j, i, r)) > kHermTol * std::max(1.0, scale))
          throw domain_error("HermitianPD: matrix is not Hermitian");
        const double im = 0.5 * (mat_.at(i, j, r) - mat_.at(j, i, r));
        mat_.at(i, j, r) = im;
        mat_.at(j, i, r) = -im;
      }
    }
  }
  if (beta == 8) {
    if (mat_.at(0, 0, 0) <= 0.0) throw domain_error("HermitianPD: not positive definite");
    return;
  }
  if (!is_pd_embedded(embed_complex(mat_)))
    throw domain_error("HermitianPD: not positive definite");
}

HermitianPD HermitianPD::identity(Algebra algebra, int m) {
  return hermitian_pd_unchecked(identity_matrix(algebra, m));
}

HermitianPD hermitian_pd_unchecked(DAMatrix mat) {
  return HermitianPD(std::move(mat), HermitianPD::unchecked_tag{});
}

HermitianPD gram(const DAMatrix& x) {
  if (x.rows() < x.cols()) throw config_error("gram: needs n >= m");
  if (x.algebra().beta() == 8) {
    // m = 1 by the octonion restriction; X^H X is the squared norm.
    const double s = trace_gram(x);
    if (s <= 0.0) throw singular_error("gram: rank-deficient input");
    DAMatrix out(x.algebra(), 1, 1);
    out.at(0, 0, 0) = s;
    return hermitian_pd_unchecked(std::move(out));
  }
  const Eigen::MatrixXcd e = embed_complex(x);
  const Eigen::MatrixXcd g = e.adjoint() * e;
  if (!is_pd_embedded(g)) throw singular_error("gram: rank-deficient input");
  // Symmetrize to kill rounding asymmetry before construction.
  return hermitian_pd_unchecked(unembed_complex(x.algebra(), 0.5 * (g + g.adjoint().eval())));
}

double trace_gram(const DAMatrix& x) {
  double s = 0.0;
  for (double v : x.components()) s += v * v;
  return s;
}

double trace_real(const HermitianPD& s) {
  double t = 0.0;
  for (int i = 0; i < s.order(); ++i) t += s.matrix().at(i, i, 0);
  return t;
}

double logdet_pd_embedded(const Eigen::MatrixXcd& m, int beta) {
  Eigen::LLT<Eigen::MatrixXcd> llt(m);
  if (llt.info() != Eigen::Success)
    throw domain_error("logdet: matrix is not positive definite");
  double ld = 0.0;
  const auto& L = llt.matrixLLT();
  for (int i = 0; i < m.rows(); ++i) ld += std::log(L(i, i).real());
  ld *= 2.0;
  return beta == 4 ? 0.5 * ld : ld;
}

double trace_real_embedded(const Eigen::MatrixXcd& m, int beta) {
  const double t = m.trace().real();
  return beta == 4 ? 0.5 * t : t;
}

bool is_pd_embedded(const Eigen::MatrixXcd& m) {
  Eigen::LLT<Eigen::MatrixXcd> llt(m);
  if (llt.info() != Eigen::Success) return false;
  for (int i = 0; i < m.rows(); ++i)
    if (!(llt.matrixLLT()(i, i).real() > 0.0)) return false;
  return true;
}

double logdet(const HermitianPD& s) {
  if (s.algebra().beta() == 8) return std::log(s.matrix().at(0, 0, 0));
  return logdet_pd_embedded(embed_complex(s), s.algebra().beta());
}

namespace {

// Spectral function of a Hermitian PD matrix through the embedding.
template <typename F>
HermitianPD spectral_map(const HermitianPD& s, F&& f) {
  if (s.algebra().beta() == 8) {
    DAMatrix out(s.algebra(), 1, 1);
    out.at(0, 0, 0) = f(s.matrix().at(0, 0, 0));
    return hermitian_pd_unchecked(std::move(out));
  }
  const Eigen::MatrixXcd e = embed_complex(s);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(e);
  if (es.info() != Eigen::Success) throw domain_error("eigendecomposition failed");
  Eigen::VectorXd ev = es.eigenvalues();
  for (int i = 0; i < ev.size(); ++i) {
    if (!(ev(i) > 0.0)) throw domain_error("matrix is not positive definite");
    ev(i) = f(ev(i));
  }
  Eigen::MatrixXcd r = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  return hermitian_pd_unchecked(unembed_complex(s.algebra(), 0.5 * (r + r.adjoint().eval())));
}

}  // namespace

HermitianPD sqrt_pd(const HermitianPD& s) {
  return spectral_map(s, [](double x) { return std::sqrt(x); });
}

HermitianPD inv_pd(const HermitianPD& s) {
  return spectral_map(s, [](double x) { return 1.0 / x; });
}

}  // namespace dadist
