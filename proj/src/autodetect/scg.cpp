#include "rfim/autodetect/scg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rfim::detect {
namespace {

double checked(double v, std::size_t iteration, const char* where) {
  if (!std::isfinite(v)) {
    throw std::runtime_error("scg: non-finite loss at iteration " + std::to_string(iteration) + " (" +
                             where + ")");
  }
  return v;
}

}  // namespace

ScgResult scg_minimize(const Objective& objective, Vector x0, const ScgOptions& options) {
  if (options.max_iters < 1) throw std::invalid_argument("scg: max_iters must be >= 1");
  const std::size_t n = static_cast<std::size_t>(x0.size());
  const std::size_t restart_every = options.restart_interval ? options.restart_interval : std::max<std::size_t>(n, 1);

  ScgResult res;
  res.x = std::move(x0);
  Vector grad(res.x.size());
  double loss = checked(objective(res.x, grad), 0, "initial point");
  res.loss_history.push_back(loss);

  Vector r = -grad;
  Vector p = r;
  Vector probe_grad(res.x.size()), trial_grad(res.x.size());
  double lambda = options.lambda_init;
  double lambda_bar = 0.0;
  double delta = 0.0;
  bool success = true;
  std::size_t accepted_since_restart = 0;

  for (std::size_t k = 1;; ++k) {
    res.iterations = k;
    res.grad_inf_norm = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
    if (res.grad_inf_norm < options.grad_tol) {
      res.converged = true;
      break;
    }
    if (k > options.max_iters) {
      res.iterations = options.max_iters;
      break;
    }

    double mu = p.dot(r);
    if (!(mu > 0.0)) {
      p = r;
      mu = p.dot(r);
      success = true;
      accepted_since_restart = 0;
      ++res.restarts;
    }
    res.slopes.push_back(-mu);
    const double p2 = p.squaredNorm();

    if (success) {
      const double sig = options.sigma / std::sqrt(p2);
      checked(objective(res.x + sig * p, probe_grad), k, "curvature probe");
      delta = p.dot(probe_grad - grad) / sig;
    }

    delta += (lambda - lambda_bar) * p2;
    if (delta <= 0.0) {
      lambda_bar = 2.0 * (lambda - delta / p2);
      delta = -delta + lambda * p2;
      lambda = lambda_bar;
    }

    const double alpha = mu / delta;
    const Vector trial = res.x + alpha * p;
    const double trial_loss = checked(objective(trial, trial_grad), k, "trial step");
    const double comparison = 2.0 * delta * (loss - trial_loss) / (mu * mu);

    if (comparison >= 0.0) {
      res.x = trial;
      loss = trial_loss;
      res.loss_history.push_back(loss);
      const Vector r_old = r;
      grad.swap(trial_grad);
      r = -grad;
      lambda_bar = 0.0;
      success = true;
      if (++accepted_since_restart % restart_every == 0) {
        p = r;
        ++res.restarts;
      } else {
        const double beta = (r.squaredNorm() - r.dot(r_old)) / mu;
        p = r + beta * p;
      }
      if (comparison >= 0.75) lambda *= 0.25;
    } else {
      lambda_bar = lambda;
      success = false;
    }

    if (comparison < 0.25) lambda += delta * (1.0 - comparison) / p2;
  }
  return res;
}

}  // namespace rfim::detect
