#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "dadist/jacobians.hpp"
#include "dadist/kernels.hpp"
#include "dadist/rng.hpp"
#include "dadist/specfun.hpp"

using namespace dadist;

namespace {

DAMatrix random_matrix(Algebra alg, int n, int m, Rng& rng) {
  DAMatrix x(alg, n, m);
  for (double& v : x.components()) v = rng.normal();
  return x;
}

DAMatrix scaled_into_ball(DAMatrix x, double radius) {
  const double r = std::sqrt(trace_gram(x));
  for (double& v : x.components()) v *= radius / r;
  return x;
}

DAMatrix identity_minus_gram(const DAMatrix& x) {
  DAMatrix d = identity_matrix(x.algebra(), x.cols());
  const DAMatrix g = gram(x).matrix();
  for (std::size_t i = 0; i < d.components().size(); ++i)
    d.components()[i] -= g.components()[i];
  return d;
}

// Y = X (I - X^H X)^{-1/2}.
DAMatrix stereo_matrix_apply(const DAMatrix& x) {
  return matmul(x, inv_pd(sqrt_pd(HermitianPD(identity_minus_gram(x)))).matrix());
}

DAMatrix stereo_trace_apply(const DAMatrix& x) {
  DAMatrix y = x;
  const double c = 1.0 / std::sqrt(1.0 - trace_gram(x));
  for (double& v : y.components()) v *= c;
  return y;
}

VecFn matrix_map(Algebra alg, int n, int m, std::function<DAMatrix(const DAMatrix&)> f) {
  return [=](const std::vector<double>& v) {
    return f(DAMatrix(alg, n, m, v)).components();
  };
}

VecFn herm_map(Algebra alg, int m, std::function<DAMatrix(const DAMatrix&)> f) {
  return [=](const std::vector<double>& v) { return herm_vec(f(herm_unvec(alg, m, v))); };
}

double ks_pvalue(std::vector<double> sorted_u) {
  const std::size_t n = sorted_u.size();
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d = std::max(d, sorted_u[i] - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - sorted_u[i]);
  }
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  double p = 0.0;
  for (int j = 1; j <= 100; ++j)
    p += 2.0 * (j % 2 ? 1.0 : -1.0) * std::exp(-2.0 * j * j * lambda * lambda);
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

TEST_CASE("linear Jacobian: A = 2I, B = 1 scales 2-D volume by 4") {
  Algebra alg(1);
  DAMatrix a(alg, 2, 2, {2, 0, 0, 2});
  DAMatrix b(alg, 1, 1, {1});
  CHECK(log_jacobian_linear(a, b, 2, 1) == doctest::Approx(std::log(4.0)).epsilon(1e-12));

  const VecFn f = matrix_map(alg, 2, 1, [&](const DAMatrix& x) { return matmul(a, x); });
  CHECK(numeric_log_jacobian(f, {0.3, -0.7}) == doctest::Approx(std::log(4.0)).epsilon(1e-6));
}

TEST_CASE("identity map has zero numeric Jacobian") {
  const VecFn id = [](const std::vector<double>& v) { return v; };
  CHECK(numeric_log_jacobian(id, {1.0, 2.0, 3.0}) == doctest::Approx(0.0));
}

TEST_CASE("stereo_trace scalar example at x = 0.6") {
  DAMatrix x(Algebra(1), 1, 1, {0.6});
  const double expect = -1.5 * std::log(1.0 - 0.36);
  CHECK(log_jacobian_stereo_trace_forward(x) == doctest::Approx(expect).epsilon(1e-12));
  // Analytic scalar derivative of x (1 - x^2)^{-1/2} is (1 - x^2)^{-3/2}.
  CHECK(expect == doctest::Approx(-1.5 * std::log(0.64)));
  DAMatrix edge(Algebra(1), 1, 1, {std::sqrt(1.0 - 1e-13)});
  CHECK_THROWS_AS(log_jacobian_stereo_trace_forward(edge), singular_error);
  DAMatrix out(Algebra(1), 1, 1, {1.5});
  CHECK_THROWS_AS(log_jacobian_stereo_trace_forward(out), domain_error);
}

TEST_CASE("inverse Jacobian scalar example") {
  DAMatrix s(Algebra(1), 1, 1, {2.0});
  CHECK(log_jacobian_inverse(HermitianPD(s)) == doctest::Approx(-2.0 * std::log(2.0)));
}

TEST_CASE("closed forms match the numeric oracle over random inputs") {
  for (int beta : {1, 2}) {
    Algebra alg(beta);
    for (int n : {1, 2, 3})
      for (int m : {1, 2}) {
        if (n < m) continue;
        Rng rng = Rng::stream(500, beta * 100 + n * 10 + m);
        for (int rep = 0; rep < 50; ++rep) {
          // Linear: Y = A X B + C.
          auto a = random_matrix(alg, n, n, rng);
          auto b = random_matrix(alg, m, m, rng);
          auto c = random_matrix(alg, n, m, rng);
          auto x = random_matrix(alg, n, m, rng);
          const VecFn flin = matrix_map(alg, n, m, [&](const DAMatrix& z) {
            DAMatrix y = matmul(matmul(a, z), b);
            for (std::size_t i = 0; i < y.components().size(); ++i)
              y.components()[i] += c.components()[i];
            return y;
          });
          CHECK(log_jacobian_linear(a, b, n, m) ==
                doctest::Approx(numeric_log_jacobian(flin, x.components())).epsilon(1e-5));

          // Stereographic matrix transform, on a point inside the ball.
          auto xb = scaled_into_ball(random_matrix(alg, n, m, rng), 0.5);
          const VecFn fst = matrix_map(alg, n, m, stereo_matrix_apply);
          CHECK(log_jacobian_stereo_matrix_forward(xb) ==
                doctest::Approx(numeric_log_jacobian(fst, xb.components())).epsilon(1e-5));

          // Trace-ball transform.
          const VecFn ftr = matrix_map(alg, n, m, stereo_trace_apply);
          CHECK(log_jacobian_stereo_trace_forward(xb) ==
                doctest::Approx(numeric_log_jacobian(ftr, xb.components())).epsilon(1e-5));
        }

        // Congruence and inverse act on Hermitian coordinates.
        Rng rng2 = Rng::stream(501, beta * 100 + n * 10 + m);
        for (int rep = 0; rep < 50; ++rep) {
          auto apd = gram(random_matrix(alg, m + 2, m, rng2)).matrix();
          auto s = gram(random_matrix(alg, m + 2, m, rng2));
          const VecFn fcon = herm_map(alg, m, [&](const DAMatrix& z) {
            return matmul(matmul(apd, z), conj_transpose(apd));
          });
          CHECK(log_jacobian_congruence(apd, m) ==
                doctest::Approx(numeric_log_jacobian(fcon, herm_vec(s.matrix()))).epsilon(1e-5));

          const VecFn finv = herm_map(alg, m, [&](const DAMatrix& z) {
            return inv_pd(HermitianPD(z)).matrix();
          });
          CHECK(log_jacobian_inverse(s) ==
                doctest::Approx(numeric_log_jacobian(finv, herm_vec(s.matrix()))).epsilon(1e-5));
        }
      }
  }
}

TEST_CASE("printed stereographic exponent fails the scalar oracle") {
  DAMatrix x(Algebra(1), 1, 1, {0.6});
  const VecFn f = matrix_map(Algebra(1), 1, 1, stereo_matrix_apply);
  const double numeric = numeric_log_jacobian(f, x.components());
  CHECK(log_jacobian_stereo_matrix_forward(x) == doctest::Approx(numeric).epsilon(1e-6));
  // Strict-paper mode gives exponent -5/2 instead of -3/2 here.
  CHECK(log_jacobian_stereo_matrix_forward(x, StrictPaper::on) ==
        doctest::Approx(-2.5 * std::log(0.64)).epsilon(1e-12));
  CHECK(std::abs(log_jacobian_stereo_matrix_forward(x, StrictPaper::on) - numeric) > 0.1);
}

TEST_CASE("stereo_trace forward then backward cancels") {
  Rng rng = Rng::stream(502, 0);
  for (int beta : {1, 2, 4, 8}) {
    auto x = scaled_into_ball(random_matrix(Algebra(beta), 2, 1, rng), 0.7);
    auto y = stereo_trace_apply(x);
    CHECK(log_jacobian_stereo_trace_forward(x) + log_jacobian_stereo_trace_backward(y) ==
          doctest::Approx(0.0).epsilon(1e-8));
  }
}

TEST_CASE("stereo_matrix forward and backward are consistent") {
  Rng rng = Rng::stream(503, 0);
  auto x = scaled_into_ball(random_matrix(Algebra(2), 3, 2, rng), 0.6);
  auto y = stereo_matrix_apply(x);
  CHECK(log_jacobian_stereo_matrix_forward(x) + log_jacobian_stereo_matrix_backward(y) ==
        doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("linear Jacobian composes along A = A1 A2") {
  Rng rng = Rng::stream(504, 0);
  Algebra alg(2);
  auto a1 = random_matrix(alg, 3, 3, rng);
  auto a2 = random_matrix(alg, 3, 3, rng);
  auto b = identity_matrix(alg, 2);
  CHECK(log_jacobian_linear(matmul(a1, a2), b, 3, 2) ==
        doctest::Approx(log_jacobian_linear(a1, b, 3, 2) + log_jacobian_linear(a2, b, 3, 2))
            .epsilon(1e-9));
}

TEST_CASE("gram pushforward weight scalar example") {
  DAMatrix s(Algebra(1), 1, 1, {2.5});
  CHECK(gram_pushforward_logweight(HermitianPD(s), 1) ==
        doctest::Approx(std::log(0.5 * std::pow(2.5, -0.5))).epsilon(1e-12));
}

TEST_CASE("gram pushforward reproduces the chi-square(3) law") {
  // S = X^H X with X ~ N(0, I_3): the weight 2^{-1} s^{1/2} times the Stiefel
  // volume and the gaussian kernel is exactly the chi-square(3) density.
  KernelSpec g;
  const double log_const = gram_pushforward_logweight(HermitianPD(DAMatrix(Algebra(1), 1, 1, {1.0})), 3) +
                           log_stiefel_volume(1, 1, 3) + log_h(g, 1.0, 3.0, 1);
  // Evaluate the assembled density at s = 1 against the classical pdf.
  const double chi3_at_1 = std::exp(-0.5) / std::sqrt(2.0 * std::numbers::pi);
  CHECK(std::exp(log_const) == doctest::Approx(chi3_at_1).epsilon(1e-12));

  Rng rng = Rng::stream(505, 0);
  std::vector<double> u;
  for (int i = 0; i < 100000; ++i) {
    double s = 0.0;
    for (int j = 0; j < 3; ++j) {
      const double z = rng.normal();
      s += z * z;
    }
    u.push_back(reg_inc_gamma(1.5, s / 2.0));
  }
  std::sort(u.begin(), u.end());
  CHECK(ks_pvalue(std::move(u)) > 0.01);
}

TEST_CASE("svd weight reduces to the polar element at m = 1") {
  for (int beta : {1, 2, 4, 8}) {
    const double d = 1.3;
    const int n = 3;
    const double expect = -std::numbers::ln2 + (beta * n - 1.0) * std::log(d) +
                          (beta == 1 ? 0 : beta == 2 ? -1 : beta == 4 ? -2 : -4) *
                              std::log(std::numbers::pi);
    CHECK(svd_logweight({d}, n, 1, beta) == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK_THROWS_AS(svd_logweight({2.0, 2.0}, 3, 2, 1), domain_error);
  CHECK_THROWS_AS(svd_logweight({1.0, 2.0}, 3, 2, 1), domain_error);
}

TEST_CASE("hermitian coordinates round-trip") {
  Rng rng = Rng::stream(506, 0);
  for (int beta : {1, 2, 4}) {
    Algebra alg(beta);
    auto s = gram(random_matrix(alg, 5, 3, rng)).matrix();
    const auto v = herm_vec(s);
    CHECK(v.size() == 3 + beta * 3u);
    auto back = herm_unvec(alg, 3, v);
    for (std::size_t i = 0; i < s.components().size(); ++i)
      CHECK(back.components()[i] == doctest::Approx(s.components()[i]).epsilon(1e-14));
  }
}

TEST_CASE("numeric oracle rejects bad steps and singular maps") {
  const VecFn collapse = [](const std::vector<double>& v) {
    return std::vector<double>(v.size(), v[0] * 0.0);
  };
  CHECK_THROWS_AS(numeric_log_jacobian(collapse, {1.0, 2.0}), singular_error);
  const VecFn id = [](const std::vector<double>& v) { return v; };
  CHECK_THROWS_AS(numeric_log_jacobian(id, {1.0}, 1e-2), config_error);
}
