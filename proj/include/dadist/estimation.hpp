#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dadist/families.hpp"

namespace dadist {

/// Dependent-sample maximum-likelihood problem for a kernel-free family: each
/// replicate is one joint collection (F_1..F_k etc.), and the likelihood is
/// the sum of joint log densities over replicates -- no independence is
/// assumed within a collection.
struct FitProblem {
  FamilyId family;
  Algebra algebra;
  int m = 1;
  /// tie[i] = group index of parameter a_i, i = 0..k; groups must be
  /// numbered contiguously from 0. Tied parameters share one estimate.
  std::vector<int> tie;
  std::vector<FamilyPoint> replicates;
};

/// tie = {0, 1, 2, .., k}: every parameter free.
std::vector<int> tie_all_free(int k);
/// tie = {0, 1, 1, .., 1}: a_0 free, a_1 = .. = a_k shared.
std::vector<int> tie_shared_dependents(int k);

int tie_group_count(const std::vector<int>& tie);

struct FitOptions {
  int restarts = 16;
  int max_iter = 4000;
  double tol = 1e-8;       // simplex diameter threshold (search space)
  std::uint64_t seed = 0;  // start-point stream
  bool log_reparam = true; // optimize rho_g = log(a_g - pole); false = raw a
  bool standard_errors = true;
};

struct FitResult {
  std::vector<double> estimates;  // one per tied group, in a-space
  double log_likelihood = 0.0;
  bool converged = false;
  int iterations = 0;  // simplex iterations of the winning start
  int restarts = 0;
  /// Per-group standard errors from the central-difference Hessian; empty
  /// unless the Hessian is negative definite at the optimum.
  std::vector<double> standard_errors;
};

/// Smallest admissible value of every tied group: a_i > (m - 1) beta / 2.
double parameter_pole(const FitProblem& problem);

/// Joint log likelihood at the given per-group parameter values. Throws
/// domain_error when the expanded parameters are infeasible.
double log_likelihood(const FitProblem& problem,
                      const std::vector<double>& group_values);

/// Multi-start Nelder-Mead maximization. Deterministic in (problem, options);
/// ties between equally good restarts break toward the lowest restart index.
/// Never throws on optimizer failure: a run where no start converges comes
/// back with converged = false and the best point seen.
FitResult fit(const FitProblem& problem, const FitOptions& options = {});

/// Log-likelihood sweep over one tied group, the others held at group_values.
std::vector<std::pair<double, double>> profile(
    const FitProblem& problem, std::vector<double> group_values, int group,
    const std::vector<double>& grid);

}  // namespace dadist
