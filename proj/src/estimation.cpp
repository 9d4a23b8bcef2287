#include "dadist/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <thread>

#include <Eigen/Dense>

#include "dadist/errors.hpp"
#include "dadist/rng.hpp"

namespace dadist {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_problem(const FitProblem& p) {
  if (family_is_kernel_dependent(p.family))
    throw config_error("fit: only kernel-free families have a data likelihood");
  if (p.tie.empty()) throw config_error("fit: tie spec is empty");
  const int groups = tie_group_count(p.tie);
  std::vector<char> seen(groups, 0);
  for (int g : p.tie) {
    if (g < 0 || g >= groups) throw config_error("fit: tie groups must be 0..G-1");
    seen[g] = 1;
  }
  for (char s : seen)
    if (!s) throw config_error("fit: tie groups must be numbered contiguously");
  if (p.replicates.empty()) throw config_error("fit: no replicates");
}

std::vector<double> expand_tie(const std::vector<int>& tie,
                               const std::vector<double>& group_values) {
  std::vector<double> a(tie.size());
  for (std::size_t i = 0; i < tie.size(); ++i) a[i] = group_values[tie[i]];
  return a;
}

struct SimplexRun {
  std::vector<double> x;
  double f = kInf;
  int iterations = 0;
  bool converged = false;
};

/// Standard Nelder-Mead minimization (reflection 1, expansion 2, contraction
/// 1/2, shrink 1/2). Converged when the vertex spread in the search space
/// drops below tol and the value spread below 1e-9.
SimplexRun nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                       const std::vector<double>& x0, double tol, int max_iter) {
  const int n = static_cast<int>(x0.size());
  std::vector<std::vector<double>> vx(n + 1, x0);
  std::vector<double> vf(n + 1);
  for (int i = 0; i < n; ++i) vx[i + 1][i] += 0.25;
  for (int i = 0; i <= n; ++i) vf[i] = f(vx[i]);

  auto order = [&] {
    std::vector<int> idx(n + 1);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return vf[a] < vf[b]; });
    std::vector<std::vector<double>> nx(n + 1);
    std::vector<double> nf(n + 1);
    for (int i = 0; i <= n; ++i) {
      nx[i] = std::move(vx[idx[i]]);
      nf[i] = vf[idx[i]];
    }
    vx = std::move(nx);
    vf = std::move(nf);
  };

  SimplexRun run;
  for (run.iterations = 0; run.iterations < max_iter; ++run.iterations) {
    order();
    double diameter = 0.0;
    for (int i = 1; i <= n; ++i)
      for (int j = 0; j < n; ++j)
        diameter = std::max(diameter, std::abs(vx[i][j] - vx[0][j]));
    if (diameter < tol && std::isfinite(vf[0]) && vf[n] - vf[0] < 1e-9) {
      run.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) centroid[j] += vx[i][j] / n;

    auto blend = [&](double t) {
      std::vector<double> p(n);
      for (int j = 0; j < n; ++j) p[j] = centroid[j] + t * (vx[n][j] - centroid[j]);
      return p;
    };

    std::vector<double> xr = blend(-1.0);
    const double fr = f(xr);
    if (fr < vf[0]) {
      std::vector<double> xe = blend(-2.0);
      const double fe = f(xe);
      if (fe < fr) {
        vx[n] = std::move(xe);
        vf[n] = fe;
      } else {
        vx[n] = std::move(xr);
        vf[n] = fr;
      }
    } else if (fr < vf[n - 1]) {
      vx[n] = std::move(xr);
      vf[n] = fr;
    } else {
      std::vector<double> xc = blend(fr < vf[n] ? -0.5 : 0.5);
      const double fc = f(xc);
      if (fc < std::min(fr, vf[n])) {
        vx[n] = std::move(xc);
        vf[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          for (int j = 0; j < n; ++j) vx[i][j] = 0.5 * (vx[i][j] + vx[0][j]);
          vf[i] = f(vx[i]);
        }
      }
    }
  }
  order();
  run.x = vx[0];
  run.f = vf[0];
  return run;
}

}  // namespace

std::vector<int> tie_all_free(int k) {
  std::vector<int> tie(k + 1);
  std::iota(tie.begin(), tie.end(), 0);
  return tie;
}

std::vector<int> tie_shared_dependents(int k) {
  std::vector<int> tie(k + 1, 1);
  tie[0] = 0;
  return tie;
}

int tie_group_count(const std::vector<int>& tie) {
  int g = -1;
  for (int t : tie) g = std::max(g, t);
  return g + 1;
}

double parameter_pole(const FitProblem& problem) {
  return (problem.m - 1) * problem.algebra.beta() / 2.0;
}

double log_likelihood(const FitProblem& problem,
                      const std::vector<double>& group_values) {
  validate_problem(problem);
  if (static_cast<int>(group_values.size()) != tie_group_count(problem.tie))
    throw config_error("log_likelihood: one value per tied group expected");
  std::vector<double> a = expand_tie(problem.tie, group_values);
  try {
    FamilyInstance inst(problem.family, problem.algebra, problem.m, std::move(a));
    double ll = 0.0;
    for (const FamilyPoint& x : problem.replicates) ll += inst.log_density(x);
    return ll;
  } catch (const config_error& e) {
    throw domain_error(std::string("log_likelihood: infeasible parameters: ") + e.what());
  }
}

FitResult fit(const FitProblem& problem, const FitOptions& options) {
  validate_problem(problem);
  if (options.restarts < 1) throw config_error("fit: restarts must be >= 1");
  const int groups = tie_group_count(problem.tie);
  const double pole = parameter_pole(problem);

  auto to_a = [&](const std::vector<double>& x) {
    std::vector<double> a(groups);
    for (int g = 0; g < groups; ++g)
      a[g] = options.log_reparam ? pole + std::exp(x[g]) : x[g];
    return a;
  };
  auto objective = [&](const std::vector<double>& x) {
    try {
      const double ll = log_likelihood(problem, to_a(x));
      return std::isfinite(ll) ? -ll : kInf;
    } catch (const domain_error&) {
      return kInf;
    }
  };

  // Deterministic log-uniform starts over a in (pole + 0.01, 100).
  const double lo = std::log(0.01);
  const double hi = std::log(std::max(100.0 - pole, 0.1));
  std::vector<SimplexRun> runs(options.restarts);
  auto worker = [&](int first, int stride) {
    for (int r = first; r < options.restarts; r += stride) {
      Rng rng = Rng::stream(options.seed, static_cast<std::uint64_t>(r));
      std::vector<double> x0(groups);
      for (int g = 0; g < groups; ++g) {
        const double a = pole + std::exp(rng.uniform(lo, hi));
        x0[g] = options.log_reparam ? std::log(a - pole) : a;
      }
      runs[r] = nelder_mead(objective, x0, options.tol, options.max_iter);
    }
  };
  const int workers = std::max(1, std::min<int>(std::thread::hardware_concurrency(),
                                                options.restarts));
  if (workers == 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker, w, workers);
    for (std::thread& t : pool) t.join();
  }

  int best = 0;
  for (int r = 1; r < options.restarts; ++r)
    if (runs[r].f < runs[best].f) best = r;

  FitResult result;
  result.restarts = options.restarts;
  result.iterations = runs[best].iterations;
  result.converged = runs[best].converged && std::isfinite(runs[best].f);
  result.estimates = to_a(runs[best].x);
  result.log_likelihood = -runs[best].f;

  if (options.standard_errors && result.converged) {
    const double h = 1e-4;
    Eigen::MatrixXd hess(groups, groups);
    auto ll_at = [&](std::vector<double> x) { return -objective(x); };
    bool finite = true;
    for (int i = 0; i < groups && finite; ++i) {
      for (int j = i; j < groups && finite; ++j) {
        std::vector<double> x = runs[best].x;
        auto shift = [&](double di, double dj) {
          std::vector<double> p = x;
          p[i] += di;
          p[j] += dj;
          return ll_at(p);
        };
        const double d = (shift(h, h) - shift(h, -h) - shift(-h, h) + shift(-h, -h)) /
                         (4.0 * h * h);
        if (!std::isfinite(d)) finite = false;
        hess(i, j) = hess(j, i) = d;
      }
    }
    if (finite) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hess);
      if (eig.eigenvalues().maxCoeff() < 0.0) {
        Eigen::MatrixXd cov = (-hess).inverse();
        result.standard_errors.resize(groups);
        for (int g = 0; g < groups; ++g) {
          double se = std::sqrt(cov(g, g));
          // Delta method back to a-space: da/drho = a - pole.
          if (options.log_reparam) se *= result.estimates[g] - pole;
          result.standard_errors[g] = se;
        }
      }
    }
  }
  return result;
}

std::vector<std::pair<double, double>> profile(
    const FitProblem& problem, std::vector<double> group_values, int group,
    const std::vector<double>& grid) {
  validate_problem(problem);
  if (group < 0 || group >= tie_group_count(problem.tie))
    throw config_error("profile: group index out of range");
  std::vector<std::pair<double, double>> out;
  out.reserve(grid.size());
  for (double v : grid) {
    group_values[group] = v;
    out.emplace_back(v, log_likelihood(problem, group_values));
  }
  return out;
}

}  // namespace dadist
