#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "rfim/autodetect/linalg.hpp"

namespace rfim::detect {

/// Objective evaluated at x; writes the gradient into `grad` and returns
/// the function value.
using Objective = std::function<double(const Vector& x, Vector& grad)>;

struct ScgOptions {
  std::size_t max_iters = 500;
  double grad_tol = 1e-6;          // stop when ||grad||_inf < grad_tol
  double sigma = 1e-4;             // finite-difference step for curvature, scaled by 1/|p|
  double lambda_init = 1e-6;       // initial trust-region scale
  std::size_t restart_interval = 0;  // 0: number of parameters
};

struct ScgResult {
  Vector x;
  std::vector<double> loss_history;  // initial value, then one entry per accepted step
  std::vector<double> slopes;        // p . grad for every direction used
  std::size_t iterations = 0;
  std::size_t restarts = 0;
  bool converged = false;
  double grad_inf_norm = 0.0;
};

/// Full-batch scaled conjugate gradient (Moller 1993). Curvature along the
/// search direction comes from a one-sided gradient difference; a
/// Levenberg-Marquardt style scale keeps the local model positive definite
/// and is adapted from the ratio of actual to predicted reduction. The
/// direction resets to steepest descent every `restart_interval` accepted
/// steps and whenever it stops being a descent direction.
///
/// Throws std::runtime_error if the objective returns a non-finite value.
ScgResult scg_minimize(const Objective& objective, Vector x0, const ScgOptions& options);

}  // namespace rfim::detect
