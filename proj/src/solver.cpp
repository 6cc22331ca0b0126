#include "rwuq/solver.hpp"

#include <cmath>

namespace rwuq {

namespace {

double data_term(std::span<const Complex> Mx, std::span<const Complex> yw, double norm) {
  double s = 0.0;
  for (std::size_t i = 0; i < Mx.size(); ++i) s += std::norm(Mx[i] - yw[i]);
  return 0.5 * s / norm;
}

double l1(std::span<const Complex> x) {
  double s = 0.0;
  for (const auto& v : x) s += std::abs(v);
  return s;
}

void check_sizes(const MeasurementOperator& op, std::span<const Complex> y, double lambda) {
  if (y.size() != op.measurement_count()) throw Error("LASSO: measurement length does not match the operator");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error("LASSO: lambda must be positive");
}

}  // namespace

double estimate_lipschitz(const MeasurementOperator& op, std::size_t iterations, double rel_tol) {
  const std::size_t N = op.signal_size();
  const double norm = static_cast<double>(op.normalization());
  ComplexVector v(N);
  for (std::size_t i = 0; i < N; ++i)
    v[i] = std::polar(1.0 + static_cast<double>(i % 7) / 7.0, 0.618 * static_cast<double>(i));
  double estimate = 0.0;
  for (std::size_t it = 0; it < iterations; ++it) {
    const double vn = norm2(v);
    for (auto& c : v) c /= vn;
    ComplexVector w = op.adjoint(op.forward(v));
    for (auto& c : w) c /= norm;
    const double next = std::real(inner(v, w));
    v = std::move(w);
    const bool done = it > 0 && std::abs(next - estimate) <= rel_tol * std::abs(next);
    estimate = next;
    if (done) break;
  }
  return estimate;
}

double lasso_objective(const MeasurementOperator& op, std::span<const Complex> x, std::span<const Complex> y,
                       double lambda) {
  check_sizes(op, y, lambda);
  const auto Mx = op.forward(x);
  const auto yw = op.weight(y);
  return data_term(Mx, yw, static_cast<double>(op.normalization())) + lambda * l1(x);
}

SolverResult lasso_solve(const MeasurementOperator& op, std::span<const Complex> y, double lambda,
                         const SolverOptions& opts) {
  check_sizes(op, y, lambda);
  if (opts.max_iterations < 1) throw Error("LASSO: max_iterations must be at least 1");
  if (!(opts.tolerance > 0.0)) throw Error("LASSO: tolerance must be positive");

  const std::size_t N = op.signal_size();
  const std::size_t m = op.measurement_count();
  const double norm = static_cast<double>(op.normalization());
  const double L = opts.lipschitz ? *opts.lipschitz : estimate_lipschitz(op);
  if (!(L > 0.0) || !std::isfinite(L)) throw Error("LASSO: Lipschitz constant must be positive");
  const double step = 1.0 / L;
  const double tau = lambda * step;

  const ComplexVector yw = op.weight(y);
  SolverResult result;
  result.lipschitz = L;

  ComplexVector x(N, Complex{0.0, 0.0}), Mx(m, Complex{0.0, 0.0});
  ComplexVector z = x, Mz = Mx;
  ComplexVector residual(m), x_new(N);
  double F = data_term(Mx, yw, norm);
  result.objective_trace.push_back(F);
  double t = 1.0;

  for (std::size_t k = 1; k <= opts.max_iterations; ++k) {
    result.iterations_used = k;
    for (std::size_t i = 0; i < m; ++i) residual[i] = Mz[i] - yw[i];
    const ComplexVector g = op.adjoint(residual);
    for (std::size_t i = 0; i < N; ++i) x_new[i] = soft_threshold(z[i] - (step / norm) * g[i], tau);
    ComplexVector Mx_new = op.forward(x_new);
    const double F_new = data_term(Mx_new, yw, norm) + lambda * l1(x_new);
    if (!std::isfinite(F_new)) throw SolverDivergence(k);

    if (opts.restart && t > 1.0 && F_new > F) {
      z = x;
      Mz = Mx;
      t = 1.0;
      continue;
    }

    const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = (t - 1.0) / t_new;
    double dx2 = 0.0, nx2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const Complex d = x_new[i] - x[i];
      dx2 += std::norm(d);
      nx2 += std::norm(x_new[i]);
      z[i] = x_new[i] + beta * d;
    }
    for (std::size_t i = 0; i < m; ++i) Mz[i] = Mx_new[i] + beta * (Mx_new[i] - Mx[i]);
    x.swap(x_new);
    Mx = std::move(Mx_new);
    F = F_new;
    t = t_new;
    result.objective_trace.push_back(F);

    if (std::sqrt(dx2) <= opts.tolerance * std::max(std::sqrt(nx2), 1e-300)) {
      result.converged = true;
      break;
    }
  }
  result.solution = std::move(x);
  return result;
}

double kkt_residual(const MeasurementOperator& op, std::span<const Complex> x, std::span<const Complex> y,
                    double lambda) {
  check_sizes(op, y, lambda);
  auto r = op.forward(x);
  const auto yw = op.weight(y);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= yw[i];
  auto g = op.adjoint(r);
  const double norm = static_cast<double>(op.normalization());
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Complex gi = g[i] / norm;
    const double a = std::abs(x[i]);
    const double v = a > 0.0 ? std::abs(gi + lambda * x[i] / a) : std::max(std::abs(gi) - lambda, 0.0);
    worst = std::max(worst, v);
  }
  return worst;
}

}  // namespace rwuq
