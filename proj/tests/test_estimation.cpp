#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "dadist/estimation.hpp"
#include "dadist/rng.hpp"
#include "dadist/sampling.hpp"

using namespace dadist;
using std::numbers::pi;

namespace {

HermitianPD scalar_pd(Algebra alg, double s) {
  DAMatrix m(alg, 1, 1);
  m.at(0, 0, 0) = s;
  return HermitianPD(m);
}

FamilyPoint f_point(Algebra alg, const std::vector<double>& f) {
  FamilyPoint x;
  for (double v : f) x.pds.push_back(scalar_pd(alg, v));
  return x;
}

// Beta-type-II dependent-sample log likelihood at m = 1 with a_1 = .. = a_k:
// log Gamma(b(a0+ka)) - log Gamma(b a0) - k log Gamma(b a)
//   + sum (b a - 1) log F_i - b (a0 + k a) log(1 + sum F_i).
double beta2_tied_loglik(double beta, double a0, double a,
                         const std::vector<std::vector<double>>& reps) {
  double ll = 0.0;
  for (const auto& f : reps) {
    const double k = static_cast<double>(f.size());
    double sum = 0.0, logs = 0.0;
    for (double v : f) {
      sum += v;
      logs += std::log(v);
    }
    ll += std::lgamma(beta * (a0 + k * a)) - std::lgamma(beta * a0) -
          k * std::lgamma(beta * a) + (beta * a - 1.0) * logs -
          beta * (a0 + k * a) * std::log1p(sum);
  }
  return ll;
}

}  // namespace

TEST_CASE("tie helpers and problem validation") {
  CHECK(tie_all_free(3) == std::vector<int>{0, 1, 2, 3});
  CHECK(tie_shared_dependents(3) == std::vector<int>{0, 1, 1, 1});
  CHECK(tie_group_count(tie_shared_dependents(5)) == 2);

  const Algebra r1(1);
  FitProblem p{FamilyId::beta2_marginal, r1, 1, tie_all_free(1),
               {f_point(r1, {1.0})}};

  FitProblem kerneled = p;
  kerneled.family = FamilyId::gamma_beta2;
  CHECK_THROWS_AS(log_likelihood(kerneled, {1.5, 0.5}), config_error);

  FitProblem gapped = p;
  gapped.tie = {0, 2};  // group 1 missing
  CHECK_THROWS_AS(log_likelihood(gapped, {1.5, 0.5, 0.5}), config_error);

  FitProblem empty = p;
  empty.replicates.clear();
  CHECK_THROWS_AS(log_likelihood(empty, {1.5, 0.5}), config_error);

  CHECK_THROWS_AS(log_likelihood(p, {1.5}), config_error);        // arity
  CHECK_THROWS_AS(log_likelihood(p, {-1.5, 0.5}), domain_error);  // pole
}

TEST_CASE("log likelihood matches the joint density on one replicate") {
  const Algebra r1(1);
  FitProblem p{FamilyId::beta2_marginal, r1, 1, tie_all_free(1),
               {f_point(r1, {1.0})}};
  CHECK(log_likelihood(p, {1.5, 0.5}) ==
        doctest::Approx(std::log(1.0 / (2.0 * pi))).epsilon(1e-12));
  CHECK(parameter_pole(p) == 0.0);
}

TEST_CASE("tied likelihood is invariant under permuting the dependents") {
  const Algebra c2(2);
  Rng rng(11);
  std::vector<double> f = {0.3, 1.7, 0.9, 2.4};
  FitProblem p{FamilyId::beta2_marginal, c2, 1, tie_shared_dependents(4),
               {f_point(c2, f)}};
  const double base = log_likelihood(p, {1.2, 0.8});
  for (int t = 0; t < 5; ++t) {
    std::vector<double> g = f;
    std::swap(g[rng.next_u64() % 4], g[rng.next_u64() % 4]);
    p.replicates = {f_point(c2, g)};
    CHECK(log_likelihood(p, {1.2, 0.8}) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("two identical replicates give exactly twice the log likelihood") {
  const Algebra r1(1);
  FamilyPoint x = f_point(r1, {0.4, 1.1});
  FitProblem one{FamilyId::beta2_marginal, r1, 1, tie_shared_dependents(2), {x}};
  FitProblem two = one;
  two.replicates.push_back(x);
  CHECK(log_likelihood(two, {1.5, 0.7}) ==
        doctest::Approx(2.0 * log_likelihood(one, {1.5, 0.7})).epsilon(1e-14));
}

TEST_CASE("generic likelihood path matches the tied beta-type-II formula") {
  const Algebra h4(4);
  Rng rng(23);
  const int k = 5;
  std::vector<std::vector<double>> reps;
  std::vector<FamilyPoint> points;
  for (int r = 0; r < 20; ++r) {
    std::vector<double> f(k);
    for (double& v : f) v = std::exp(rng.uniform(-2.0, 1.5));
    reps.push_back(f);
    points.push_back(f_point(h4, f));
  }
  FitProblem p{FamilyId::beta2_marginal, h4, 1, tie_shared_dependents(k), points};
  for (int t = 0; t < 10; ++t) {
    const double a0 = rng.uniform(0.3, 5.0), a = rng.uniform(0.3, 5.0);
    CHECK(log_likelihood(p, {a0, a}) ==
          doctest::Approx(beta2_tied_loglik(4.0, a0, a, reps)).epsilon(1e-10));
  }
}

TEST_CASE("fit recovers synthetic quaternion beta-type-II parameters") {
  const Algebra h4(4);
  const int k = 20;
  std::vector<double> truth(k + 1, 3.0);
  truth[0] = 2.0;
  FamilyInstance inst(FamilyId::beta2_marginal, h4, 1, truth);
  FitProblem p{FamilyId::beta2_marginal, h4, 1, tie_shared_dependents(k),
               sample(inst, 200, 7)};

  FitOptions opt;
  opt.seed = 1;
  FitResult res = fit(p, opt);
  CHECK(res.converged);
  CHECK(res.restarts == 16);
  REQUIRE(res.estimates.size() == 2);
  CHECK(std::abs(res.estimates[0] - 2.0) / 2.0 < 0.10);
  CHECK(std::abs(res.estimates[1] - 3.0) / 3.0 < 0.10);
  CHECK(res.log_likelihood ==
        doctest::Approx(log_likelihood(p, res.estimates)).epsilon(1e-12));
  REQUIRE(res.standard_errors.size() == 2);
  CHECK(res.standard_errors[0] > 0.0);
  CHECK(res.standard_errors[1] > 0.0);

  // Optimizing raw parameters with infeasibility rejection lands on the same
  // maximum as the log reparametrization.
  FitOptions raw = opt;
  raw.log_reparam = false;
  raw.standard_errors = false;
  FitResult res2 = fit(p, raw);
  CHECK(res2.converged);
  CHECK(res2.log_likelihood == doctest::Approx(res.log_likelihood).epsilon(1e-6));
}

TEST_CASE("degenerate single replicate stays finite") {
  const Algebra r1(1);
  FitProblem p{FamilyId::beta2_marginal, r1, 1, tie_shared_dependents(3),
               {f_point(r1, {0.5, 0.5, 0.5})}};
  FitOptions opt;
  opt.restarts = 8;
  opt.standard_errors = false;
  FitResult res = fit(p, opt);
  CHECK(res.converged);
  CHECK(std::isfinite(res.log_likelihood));
  for (double e : res.estimates) {
    CHECK(std::isfinite(e));
    CHECK(e > 0.0);
  }
}

TEST_CASE("profile sweeps agree with the likelihood and the fit") {
  const Algebra r1(1);
  FamilyInstance inst(FamilyId::beta1_marginal, r1, 1, {2.0, 1.0, 1.0});
  FitProblem p{FamilyId::beta1_marginal, r1, 1, tie_shared_dependents(2),
               sample(inst, 400, 3)};

  // Single-point profile is just the likelihood.
  auto single = profile(p, {2.0, 1.0}, 0, {1.7});
  REQUIRE(single.size() == 1);
  CHECK(single[0].first == 1.7);
  CHECK(single[0].second == doctest::Approx(log_likelihood(p, {1.7, 1.0})));

  FitOptions opt;
  opt.restarts = 8;
  opt.standard_errors = false;
  FitResult res = fit(p, opt);
  REQUIRE(res.converged);

  // Profile over group 0 through the optimum peaks within one grid step.
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(0.25 + 0.1 * i);
  auto prof = profile(p, res.estimates, 0, grid);
  std::size_t arg = 0;
  for (std::size_t i = 1; i < prof.size(); ++i)
    if (prof[i].second > prof[arg].second) arg = i;
  CHECK(std::abs(prof[arg].first - res.estimates[0]) <= 0.1 + 1e-12);
  CHECK_THROWS_AS(profile(p, res.estimates, 5, grid), config_error);
}
