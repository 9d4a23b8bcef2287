#include "dadist/jacobians.hpp"

#include <Eigen/LU>
#include <cmath>
#include <numbers>

namespace dadist {

namespace {

double logdet_gram_square(const DAMatrix& a) {
  if (a.rows() != a.cols()) throw config_error("jacobian: constant matrix must be square");
  return logdet(gram(a));
}

// log |I - X^H X| through the embedding, with an m = 1 fast path that also
// covers beta = 8. Throws domain_error outside the matrix ball.
double logdet_i_minus_gram(const DAMatrix& x) {
  if (x.cols() == 1) {
    const double u = trace_gram(x);
    if (!(u < 1.0)) throw domain_error("stereo transform: X outside the unit ball");
    return std::log1p(-u);
  }
  const Eigen::MatrixXcd e = embed_complex(x);
  Eigen::MatrixXcd g =
      Eigen::MatrixXcd::Identity(e.cols(), e.cols()) - (e.adjoint() * e).eval();
  try {
    return logdet_pd_embedded(g, x.algebra().beta());
  } catch (const domain_error&) {
    throw domain_error("stereo transform: X outside the matrix unit ball");
  }
}

double logdet_i_plus_gram(const DAMatrix& y) {
  if (y.cols() == 1) return std::log1p(trace_gram(y));
  const Eigen::MatrixXcd e = embed_complex(y);
  Eigen::MatrixXcd g =
      Eigen::MatrixXcd::Identity(e.cols(), e.cols()) + (e.adjoint() * e).eval();
  return logdet_pd_embedded(g, y.algebra().beta());
}

double stereo_matrix_exponent(int beta, int n, int m, StrictPaper mode) {
  return mode == StrictPaper::on ? -(beta * (n + m + 1) / 2.0 + 1.0)
                                 : -(beta * (n + m - 1) / 2.0 + 1.0);
}

}  // namespace

double log_jacobian_linear(const DAMatrix& a, const DAMatrix& b, int n, int m) {
  const int beta = a.algebra().beta();
  if (!(a.algebra() == b.algebra())) throw config_error("jacobian: algebra mismatch");
  if (a.rows() != n || b.rows() != m) throw config_error("jacobian: A, B not conformable");
  return beta * m / 2.0 * logdet_gram_square(a) + beta * n / 2.0 * logdet_gram_square(b);
}

double log_jacobian_congruence(const DAMatrix& a, int m) {
  if (a.rows() != m) throw config_error("jacobian: A not conformable");
  return (a.algebra().beta() * (m - 1) / 2.0 + 1.0) * logdet_gram_square(a);
}

double log_jacobian_inverse(const HermitianPD& s) {
  return -(s.algebra().beta() * (s.order() - 1) + 2.0) * logdet(s);
}

double log_jacobian_stereo_matrix_forward(const DAMatrix& x, StrictPaper mode) {
  return stereo_matrix_exponent(x.algebra().beta(), x.rows(), x.cols(), mode) *
         logdet_i_minus_gram(x);
}

double log_jacobian_stereo_matrix_backward(const DAMatrix& y, StrictPaper mode) {
  return stereo_matrix_exponent(y.algebra().beta(), y.rows(), y.cols(), mode) *
         logdet_i_plus_gram(y);
}

double log_jacobian_stereo_trace_forward(const DAMatrix& x) {
  const double u = trace_gram(x);
  if (!(u < 1.0)) throw domain_error("stereo_trace: tr X^H X must be < 1");
  if (1.0 - u < 1e-12) throw singular_error("stereo_trace: input too close to the boundary");
  const int beta = x.algebra().beta();
  return -(beta * x.rows() * x.cols() / 2.0 + 1.0) * std::log1p(-u);
}

double log_jacobian_stereo_trace_backward(const DAMatrix& y) {
  const int beta = y.algebra().beta();
  return -(beta * y.rows() * y.cols() / 2.0 + 1.0) * std::log1p(trace_gram(y));
}

double gram_pushforward_logweight(const HermitianPD& s, int n) {
  const int m = s.order();
  if (n < m) throw config_error("gram weight: needs n >= m");
  const int beta = s.algebra().beta();
  return -m * std::numbers::ln2 + (beta * (n - m + 1) / 2.0 - 1.0) * logdet(s);
}

double svd_logweight(const std::vector<double>& d, int n, int m, int beta) {
  if (static_cast<int>(d.size()) != m || n < m) throw config_error("svd weight: bad dimensions");
  int tau_per_m = 0;
  switch (beta) {
    case 1: tau_per_m = 0; break;
    case 2: tau_per_m = -1; break;
    case 4: tau_per_m = -2; break;
    case 8: tau_per_m = -4; break;
    default: throw config_error("svd weight: bad beta");
  }
  for (int i = 0; i < m; ++i) {
    if (!(d[i] > 0.0)) throw domain_error("svd weight: singular values must be positive");
    if (i > 0 && !(d[i] < d[i - 1]))
      throw domain_error("svd weight: singular values must be strictly decreasing");
  }
  double lw = -m * std::numbers::ln2 + tau_per_m * m * std::log(std::numbers::pi);
  for (int i = 0; i < m; ++i) {
    lw += (beta * (n - m + 1) - 1.0) * std::log(d[i]);
    for (int j = i + 1; j < m; ++j) lw += beta * std::log(d[i] * d[i] - d[j] * d[j]);
  }
  return lw;
}

namespace {

double central_diff_logdet(const VecFn& f, const std::vector<double>& x, double h) {
  const int dim = static_cast<int>(x.size());
  Eigen::MatrixXd jac(dim, dim);
  for (int j = 0; j < dim; ++j) {
    std::vector<double> xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    const auto fp = f(xp), fm = f(xm);
    if (static_cast<int>(fp.size()) != dim)
      throw config_error("numeric jacobian: map must preserve dimension");
    for (int i = 0; i < dim; ++i) jac(i, j) = (fp[i] - fm[i]) / (2.0 * h);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
  if (!lu.isInvertible()) throw singular_error("numeric jacobian: singular Jacobian matrix");
  double ld = 0.0;
  for (int i = 0; i < dim; ++i) ld += std::log(std::abs(lu.matrixLU()(i, i)));
  return ld;
}

}  // namespace

double numeric_log_jacobian(const VecFn& f, const std::vector<double>& x, double h) {
  if (!(h >= 1e-7 && h <= 1e-4)) throw config_error("numeric jacobian: h outside [1e-7, 1e-4]");
  const double v1 = central_diff_logdet(f, x, h);
  const double v2 = central_diff_logdet(f, x, h / 2.0);
  const double scale = std::max({std::abs(v1), std::abs(v2), 1e-3});
  if (std::abs(v1 - v2) > 1e-4 * scale)
    throw domain_error("numeric jacobian: no 4-digit agreement between h and h/2");
  // Richardson: the h/2 estimate has a quarter of the O(h^2) error.
  return v2 + (v2 - v1) / 3.0;
}

std::vector<double> herm_vec(const DAMatrix& s) {
  const int m = s.rows();
  const int beta = s.algebra().beta();
  if (s.cols() != m) throw config_error("herm_vec: needs a square matrix");
  std::vector<double> v;
  v.reserve(m + beta * m * (m - 1) / 2);
  for (int i = 0; i < m; ++i) v.push_back(s.at(i, i, 0));
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int r = 0; r < beta; ++r) v.push_back(s.at(i, j, r));
  return v;
}

DAMatrix herm_unvec(Algebra algebra, int m, const std::vector<double>& v) {
  const int beta = algebra.beta();
  if (static_cast<int>(v.size()) != m + beta * m * (m - 1) / 2)
    throw config_error("herm_unvec: bad coordinate count");
  DAMatrix s(algebra, m, m);
  std::size_t idx = 0;
  for (int i = 0; i < m; ++i) s.at(i, i, 0) = v[idx++];
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int r = 0; r < beta; ++r) {
        const double c = v[idx++];
        s.at(i, j, r) = c;
        s.at(j, i, r) = r == 0 ? c : -c;
      }
  return s;
}

}  // namespace dadist
