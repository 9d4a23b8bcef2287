#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dadist/algebra.hpp"
#include "dadist/rng.hpp"

using namespace dadist;

namespace {

DAMatrix random_matrix(Algebra alg, int n, int m, Rng& rng) {
  DAMatrix x(alg, n, m);
  for (double& v : x.components()) v = rng.normal();
  return x;
}

double max_abs_diff(const DAMatrix& a, const DAMatrix& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.components().size(); ++i)
    d = std::max(d, std::abs(a.components()[i] - b.components()[i]));
  return d;
}

DAMatrix quat_scalar(double a, double b, double c, double d) {
  return DAMatrix(Algebra(4), 1, 1, {a, b, c, d});
}

}  // namespace

TEST_CASE("algebra accepts only beta 1,2,4,8") {
  CHECK_NOTHROW(Algebra(1));
  CHECK_NOTHROW(Algebra(8));
  CHECK_THROWS_AS(Algebra(3), config_error);
  CHECK_THROWS_AS(Algebra(0), config_error);
}

TEST_CASE("octonion matrices restricted to one column") {
  CHECK_NOTHROW(DAMatrix(Algebra(8), 3, 1));
  CHECK_THROWS_AS(DAMatrix(Algebra(8), 2, 2), unsupported_error);
  CHECK_THROWS_AS(matmul(DAMatrix(Algebra(8), 1, 1), DAMatrix(Algebra(8), 1, 1)),
                  unsupported_error);
}

TEST_CASE("real scalar embeds as complex scalar") {
  DAMatrix x(Algebra(1), 1, 1, {3.0});
  auto z = embed_complex(x);
  CHECK(z(0, 0).real() == doctest::Approx(3.0));
  CHECK(z(0, 0).imag() == 0.0);
}

TEST_CASE("quaternion embedding block layout") {
  auto z = embed_complex(quat_scalar(1.0, 2.0, 3.0, 4.0));
  CHECK(z(0, 0) == std::complex<double>(1.0, 2.0));
  CHECK(z(0, 1) == std::complex<double>(3.0, 4.0));
  CHECK(z(1, 0) == std::complex<double>(-3.0, 4.0));
  CHECK(z(1, 1) == std::complex<double>(1.0, -2.0));
}

TEST_CASE("quaternion multiplication table: i * j = k") {
  auto qi = quat_scalar(0, 1, 0, 0);
  auto qj = quat_scalar(0, 0, 1, 0);
  auto qk = quat_scalar(0, 0, 0, 1);
  auto prod = matmul(qi, qj);
  CHECK(max_abs_diff(prod, qk) < 1e-15);
  // And as matrices: embed(q1 q2) = embed(q1) embed(q2).
  Eigen::MatrixXcd direct = embed_complex(qi) * embed_complex(qj);
  CHECK((direct - embed_complex(qk)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("embedding is a homomorphism for all algebras") {
  for (int beta : {1, 2, 4}) {
    Rng rng = Rng::stream(11, beta);
    Algebra alg(beta);
    auto a = random_matrix(alg, 3, 2, rng);
    auto b = random_matrix(alg, 2, 4, rng);
    Eigen::MatrixXcd lhs = embed_complex(matmul(a, b));
    Eigen::MatrixXcd rhs = embed_complex(a) * embed_complex(b);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::MatrixXcd ct = embed_complex(conj_transpose(a));
    CHECK((ct - embed_complex(a).adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("unembed inverts embed") {
  for (int beta : {1, 2, 4}) {
    Rng rng = Rng::stream(12, beta);
    Algebra alg(beta);
    auto a = random_matrix(alg, 3, 2, rng);
    CHECK(max_abs_diff(unembed_complex(alg, embed_complex(a)), a) < 1e-15);
  }
}

TEST_CASE("gram of identity and of a column vector") {
  auto id = identity_matrix(Algebra(1), 2);
  auto g = gram(id);
  CHECK(g.matrix().at(0, 0, 0) == doctest::Approx(1.0));
  CHECK(g.matrix().at(1, 1, 0) == doctest::Approx(1.0));
  CHECK(g.matrix().at(0, 1, 0) == doctest::Approx(0.0));

  DAMatrix col(Algebra(1), 2, 1, {1.0, 1.0});
  CHECK(gram(col).matrix().at(0, 0, 0) == doctest::Approx(2.0));
}

TEST_CASE("gram matches embedded product for quaternion matrices") {
  Rng rng = Rng::stream(13, 0);
  auto x = random_matrix(Algebra(4), 3, 2, rng);
  auto lhs = embed_complex(gram(x));
  Eigen::MatrixXcd e = embed_complex(x);
  CHECK((lhs - e.adjoint() * e).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gram rejects rank-deficient input") {
  DAMatrix x(Algebra(1), 3, 2, {1, 1, 2, 2, 3, 3});
  CHECK_THROWS_AS(gram(x), singular_error);
  CHECK_THROWS_AS(gram(DAMatrix(Algebra(1), 1, 2)), config_error);
}

TEST_CASE("logdet basics") {
  CHECK(logdet(HermitianPD::identity(Algebra(1), 3)) == doctest::Approx(0.0));
  CHECK(logdet(HermitianPD::identity(Algebra(4), 3)) == doctest::Approx(0.0));
  DAMatrix d(Algebra(1), 2, 2, {2, 0, 0, 3});
  CHECK(logdet(HermitianPD(d)) == doctest::Approx(std::log(6.0)));
}

TEST_CASE("Moore determinant of [[2, j],[-j, 3]] is 5") {
  DAMatrix s(Algebra(4), 2, 2);
  s.at(0, 0, 0) = 2.0;
  s.at(1, 1, 0) = 3.0;
  s.at(0, 1, 2) = 1.0;   // j
  s.at(1, 0, 2) = -1.0;  // -j
  HermitianPD pd(s);
  CHECK(logdet(pd) == doctest::Approx(std::log(5.0)));
  // The embedding itself has determinant 25.
  CHECK(std::log(std::abs(embed_complex(pd).determinant())) == doctest::Approx(std::log(25.0)));
}

TEST_CASE("quaternion Hermitian embedding has doubled eigenvalues") {
  Rng rng = Rng::stream(14, 0);
  auto x = random_matrix(Algebra(4), 5, 3, rng);
  auto s = gram(x);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(embed_complex(s));
  auto ev = es.eigenvalues();
  REQUIRE(ev.size() == 6);
  for (int i = 0; i < 6; i += 2) CHECK(std::abs(ev(i) - ev(i + 1)) < 1e-9);
}

TEST_CASE("logdet scaling additivity") {
  Rng rng = Rng::stream(15, 0);
  auto x = random_matrix(Algebra(2), 4, 2, rng);
  auto s = gram(x);
  const double c = 2.75;
  DAMatrix scaled = s.matrix();
  for (double& v : scaled.components()) v *= c;
  CHECK(logdet(HermitianPD(scaled)) ==
        doctest::Approx(logdet(s) + 2 * std::log(c)).epsilon(1e-10));
}

TEST_CASE("trace_gram examples") {
  CHECK(trace_gram(DAMatrix(Algebra(1), 3, 2)) == 0.0);
  CHECK(trace_gram(quat_scalar(1, 1, 1, 1)) == doctest::Approx(4.0));
  Rng rng = Rng::stream(16, 0);
  auto x = random_matrix(Algebra(2), 4, 2, rng);
  CHECK(trace_gram(x) == doctest::Approx(trace_real(gram(x))).epsilon(1e-12));
  CHECK(trace_gram(x) > 0.0);
}

TEST_CASE("octonion scalar gram and logdet") {
  DAMatrix x(Algebra(8), 2, 1, std::vector<double>(16, 0.5));
  CHECK(trace_gram(x) == doctest::Approx(4.0));
  auto s = gram(x);
  CHECK(logdet(s) == doctest::Approx(std::log(4.0)));
}

TEST_CASE("sqrt_pd and inv_pd") {
  DAMatrix d(Algebra(1), 2, 2, {4, 0, 0, 9});
  auto r = sqrt_pd(HermitianPD(d));
  CHECK(r.matrix().at(0, 0, 0) == doctest::Approx(2.0));
  CHECK(r.matrix().at(1, 1, 0) == doctest::Approx(3.0));

  Rng rng = Rng::stream(17, 0);
  auto x = random_matrix(Algebra(4), 4, 2, rng);
  auto s = gram(x);
  auto h = sqrt_pd(s);
  CHECK(max_abs_diff(matmul(h.matrix(), h.matrix()), s.matrix()) < 1e-10);
  auto inv = inv_pd(s);
  CHECK(max_abs_diff(matmul(inv.matrix(), s.matrix()),
                     identity_matrix(Algebra(4), 2)) < 1e-10);
}

TEST_CASE("HermitianPD rejects non-Hermitian and non-PD input") {
  DAMatrix asym(Algebra(1), 2, 2, {1, 2, 0, 1});
  CHECK_THROWS_AS(HermitianPD{asym}, domain_error);
  DAMatrix neg(Algebra(1), 2, 2, {1, 0, 0, -1});
  CHECK_THROWS_AS(HermitianPD{neg}, domain_error);
  DAMatrix complex_diag(Algebra(2), 1, 1, {1.0, 0.5});
  CHECK_THROWS_AS(HermitianPD{complex_diag}, domain_error);
}

TEST_CASE("matrix construction validates components") {
  CHECK_THROWS_AS(DAMatrix(Algebra(1), 2, 2, {1, 2, 3}), config_error);
  CHECK_THROWS_AS(DAMatrix(Algebra(1), 1, 1, {std::nan("")}), config_error);
}
