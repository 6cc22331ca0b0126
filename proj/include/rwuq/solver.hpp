#pragma once

#include <optional>
#include <span>

#include "rwuq/operators.hpp"
#include "rwuq/types.hpp"

namespace rwuq {

struct SolverOptions {
  std::size_t max_iterations = 2000;
  double tolerance = 1e-8;          // relative iterate change
  std::optional<double> lipschitz;  // else power iteration
  bool restart = true;              // reset momentum when the objective increases
};

struct SolverResult {
  ComplexVector solution;
  RealVector objective_trace;  // objective after each accepted iterate, trace[0] at x = 0
  std::size_t iterations_used = 0;
  bool converged = false;
  double lipschitz = 0.0;
};

class SolverDivergence : public Error {
 public:
  SolverDivergence(std::size_t iteration)
      : Error("LASSO solver diverged at iteration " + std::to_string(iteration)), iteration_(iteration) {}
  std::size_t iteration() const { return iteration_; }

 private:
  std::size_t iteration_;
};

/// z * max(1 - tau / |z|, 0).
inline Complex soft_threshold(Complex z, double tau) {
  const double a = std::abs(z);
  if (a <= tau) return {0.0, 0.0};
  return z * (1.0 - tau / a);
}

/// Largest eigenvalue of M* M / normalization by power iteration.
double estimate_lipschitz(const MeasurementOperator& op, std::size_t iterations = 20, double rel_tol = 1e-6);

/// (1/(2 norm)) ||M x - diag(w) y||^2 + lambda ||x||_1, with `y` the raw
/// (unweighted) measurements. Row weights are applied to y exactly once.
double lasso_objective(const MeasurementOperator& op, std::span<const Complex> x, std::span<const Complex> y,
                       double lambda);

/// Accelerated proximal gradient (FISTA) from x = 0.
SolverResult lasso_solve(const MeasurementOperator& op, std::span<const Complex> y, double lambda,
                         const SolverOptions& opts = {});

/// Largest violation of the LASSO optimality conditions at x:
/// active coordinates |g_i + lambda x_i/|x_i||, inactive max(|g_i| - lambda, 0).
double kkt_residual(const MeasurementOperator& op, std::span<const Complex> x, std::span<const Complex> y,
                    double lambda);

}  // namespace rwuq
