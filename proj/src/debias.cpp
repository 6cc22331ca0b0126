#include "rwuq/debias.hpp"

#include <algorithm>

namespace rwuq {

ComplexVector debias_estimate(const MeasurementOperator& op, std::span<const Complex> x_hat,
                              std::span<const Complex> y) {
  if (x_hat.size() != op.signal_size() || y.size() != op.measurement_count())
    throw Error("debias_estimate: length mismatch");
  auto residual = op.weight(y);
  const auto Mx = op.forward(x_hat);
  for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= Mx[i];
  auto correction = op.adjoint(residual);
  const double inv = 1.0 / static_cast<double>(op.normalization());
  ComplexVector out(x_hat.begin(), x_hat.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += inv * correction[i];
  return out;
}

Decomposition decompose(const MeasurementOperator& op, std::span<const Complex> x_hat,
                        std::span<const Complex> ground_truth, std::span<const Complex> noise) {
  const std::size_t N = op.signal_size();
  if (x_hat.size() != N || ground_truth.size() != N || noise.size() != op.measurement_count())
    throw Error("decompose: length mismatch");
  const double inv = 1.0 / static_cast<double>(op.normalization());

  Decomposition dec;
  dec.domain = op.domain();
  dec.w_term = op.adjoint(op.weight(noise));
  for (auto& v : dec.w_term) v *= inv;

  const ComplexVector delta = subtract(ground_truth, x_hat);
  dec.r_term = op.adjoint(op.forward(delta));
  for (std::size_t i = 0; i < N; ++i) dec.r_term[i] = inv * dec.r_term[i] - delta[i];

  // Weighted data M truth + diag(w) noise is diag(w) y for y = measure(truth) + noise.
  auto data = op.forward(ground_truth);
  const auto wn = op.weight(noise);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] += wn[i];
  auto residual = data;
  const auto Mx = op.forward(x_hat);
  for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= Mx[i];
  auto correction = op.adjoint(residual);
  dec.debiased.assign(x_hat.begin(), x_hat.end());
  for (std::size_t i = 0; i < N; ++i) dec.debiased[i] += inv * correction[i];

  if (decomposition_residual(dec.debiased, ground_truth, dec) > 1e-8 * std::max(1.0, norm_inf(dec.debiased)))
    throw Error("decompose: debiased - truth != W + R");
  return dec;
}

Decomposition to_image_domain(const Decomposition& dec, const Shape& shape) {
  if (dec.domain == Domain::image) throw Error("to_image_domain: decomposition is already in the image domain");
  auto lift = [&](const ComplexVector& v) { return haar2d_adjoint(ComplexImage(shape, v)).data; };
  return {lift(dec.debiased), lift(dec.w_term), lift(dec.r_term), Domain::image};
}

double decomposition_residual(std::span<const Complex> debiased, std::span<const Complex> truth,
                              const Decomposition& dec) {
  if (debiased.size() != truth.size() || dec.w_term.size() != truth.size() || dec.r_term.size() != truth.size())
    throw Error("decomposition_residual: length mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i)
    worst = std::max(worst, std::abs((debiased[i] - truth[i]) - (dec.w_term[i] + dec.r_term[i])));
  return worst;
}

}  // namespace rwuq
