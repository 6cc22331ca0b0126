#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "rwuq/debias.hpp"
#include "rwuq/operators.hpp"
#include "rwuq/rng.hpp"

using namespace rwuq;
using namespace rwuq::testing;

namespace {

MeasurementOperator identity_operator(std::size_t n) {
  std::vector<std::size_t> rows(n);
  for (std::size_t j = 0; j < n; ++j) rows[j] = j;
  return MeasurementOperator(Shape::line(n), rows, RealVector(n, 1.0), Domain::image, 1, FourierScale::unitary);
}

std::vector<MeasurementOperator> pipelines(const Shape& s, std::uint64_t seed) {
  const auto prof = local_coherence(s);
  const std::size_t m = s.size() / 2;
  return {MeasurementOperator::standard(s, sample_without_replacement(prof.nu, m, seed)),
          MeasurementOperator::preconditioned(s, sample_with_replacement(prof.nu, m, seed), prof),
          MeasurementOperator::reweighted(s, sample_reweighted(prof.nu, m, seed), prof),
          MeasurementOperator::reweighted(s, sample_reweighted(prof.nu, m, seed), prof, Domain::image)};
}

// Upper tail of the Anderson-Darling statistic for a fully specified
// distribution; 6.0 is just above the asymptotic 0.1% point (5.97).
constexpr double kAndersonDarling1e3 = 6.0;

double anderson_darling_standard_normal(RealVector x) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  auto cdf = [](double v) { return 0.5 * std::erfc(-v / std::sqrt(2.0)); };
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lo = std::max(cdf(x[i]), 1e-300);
    const double hi = std::max(1.0 - cdf(x[x.size() - 1 - i]), 1e-300);
    s += (2.0 * static_cast<double>(i) + 1.0) * (std::log(lo) + std::log(hi));
  }
  return -n - s / n;
}

}  // namespace

TEST_CASE("identity operator debiases to the data") {
  const auto op = identity_operator(8);
  const auto x = random_vector(8, 1);
  const auto y = op.forward(random_vector(8, 2));
  // M* y with M = F unitary and full sampling is F* y.
  const auto d = debias_estimate(op, x, y);
  CHECK(max_abs_diff(d, op.adjoint(y)) < 1e-12);
  CHECK(max_abs_diff(d, debias_estimate(op, random_vector(8, 3), y)) < 1e-12);
}

TEST_CASE("noiseless data at the truth is a fixed point") {
  for (const auto& op : pipelines(Shape{4, 4}, 5)) {
    const auto x0 = random_vector(16, 7);
    const auto y = op.measure(x0);
    CHECK(max_abs_diff(debias_estimate(op, x0, y), x0) < 1e-12);
  }
}

TEST_CASE("debiasing matches the explicit dense formula") {
  const Shape s = Shape{2, 4};
  for (const auto& op : pipelines(s, 11)) {
    // Oracle from the system matrix: weights applied exactly once, in M.
    const DenseSquare A = op.domain() == Domain::haar ? dense_fourier_haar(s) : kron(dense_dft(2), dense_dft(4));
    Dense M(op.measurement_count(), s.size());
    for (std::size_t t = 0; t < M.rows; ++t)
      for (std::size_t i = 0; i < M.cols; ++i)
        M(t, i) = op.row_weights()[t] * op.fourier_factor() * A(op.rows()[t], i);
    const auto x = random_vector(s.size(), 12);
    const auto y = random_vector(op.measurement_count(), 13);
    ComplexVector r = dense_apply(M, x);
    for (std::size_t t = 0; t < r.size(); ++t) r[t] = op.row_weights()[t] * y[t] - r[t];
    ComplexVector want = apply_adjoint(M, r);
    for (std::size_t i = 0; i < want.size(); ++i) want[i] = x[i] + want[i] / static_cast<double>(op.normalization());
    CHECK(max_abs_diff(debias_estimate(op, x, y), want) < 1e-12);
  }
}

TEST_CASE("decomposition terms and identity") {
  const Shape s{4, 4};
  for (const auto& op : pipelines(s, 21)) {
    const auto truth = random_vector(16, 1);
    const auto x_hat = random_vector(16, 2);
    const auto noise = random_vector(op.measurement_count(), 3);

    const auto quiet = decompose(op, x_hat, truth, ComplexVector(op.measurement_count()));
    CHECK(norm_inf(quiet.w_term) == 0.0);
    const auto exact = decompose(op, truth, truth, noise);
    CHECK(norm_inf(exact.r_term) < 1e-14);

    auto y = op.measure(truth);
    for (std::size_t t = 0; t < y.size(); ++t) y[t] += noise[t];
    const auto dec = decompose(op, x_hat, truth, noise);
    CHECK(dec.domain == op.domain());
    CHECK(max_abs_diff(dec.debiased, debias_estimate(op, x_hat, y)) < 1e-12);
    CHECK(decomposition_residual(dec.debiased, truth, dec) < 1e-12);

    // R matches (M*M/norm - I) delta from the dense gram.
    const auto G = dense_gram(op);
    const auto delta = subtract(truth, x_hat);
    ComplexVector r(16);
    for (std::size_t i = 0; i < 16; ++i) {
      for (std::size_t k = 0; k < 16; ++k) r[i] += G(i, k) * delta[k];
      r[i] = r[i] / static_cast<double>(op.normalization()) - delta[i];
    }
    CHECK(max_abs_diff(r, dec.r_term) < 1e-12);
  }
  const auto op = pipelines(s, 1)[0];
  CHECK_THROWS_AS(decompose(op, ComplexVector(15), ComplexVector(16), ComplexVector(op.measurement_count())), Error);
  CHECK_THROWS_AS(debias_estimate(op, ComplexVector(16), ComplexVector(3)), Error);
}

TEST_CASE("image-domain view preserves l2 norms") {
  const Shape s{8, 8};
  const auto op = pipelines(s, 4)[2];
  const auto truth = random_vector(64, 5), x_hat = random_vector(64, 6);
  const auto dec = decompose(op, x_hat, truth, random_vector(op.measurement_count(), 7));
  const auto img = to_image_domain(dec, s);
  CHECK(img.domain == Domain::image);
  CHECK(std::abs(norm2(img.w_term) - norm2(dec.w_term)) < 1e-12);
  CHECK(std::abs(norm2(img.r_term) - norm2(dec.r_term)) < 1e-12);
  CHECK(std::abs(norm2(img.debiased) - norm2(dec.debiased)) < 1e-12);
  const auto x_truth = haar2d_adjoint(ComplexImage(s, truth)).data;
  CHECK(decomposition_residual(img.debiased, x_truth, img) < 1e-12);
  CHECK_THROWS_AS(to_image_domain(img, s), Error);

  // Constant image: one Haar coefficient, exact round trip.
  ComplexImage flat(s);
  for (auto& v : flat.data) v = Complex(0.3, -0.1);
  const auto z = haar2d_forward(flat);
  CHECK(max_abs_diff(haar2d_adjoint(z).data, flat.data) < 1e-12);
}

TEST_CASE("W is complex Gaussian with the predicted variance") {
  const Shape s{4, 4};
  const auto prof = local_coherence(s);
  const auto op = MeasurementOperator::reweighted(s, sample_reweighted(prof.nu, 8, 3), prof);
  const double sigma = 0.7;
  const auto var = op.noise_gram_diagonal();
  const std::size_t draws = 10000;
  std::vector<RealVector> re(16, RealVector(draws)), im(16, RealVector(draws));
  Rng rng(2024);
  const double inv = 1.0 / static_cast<double>(op.normalization());
  for (std::size_t t = 0; t < draws; ++t) {
    ComplexVector eps(op.measurement_count());
    for (auto& e : eps) e = rng.complex_normal(sigma * sigma);
    const auto w = op.adjoint(op.weight(eps));
    for (std::size_t i = 0; i < 16; ++i) {
      re[i][t] = (w[i] * inv).real();
      im[i][t] = (w[i] * inv).imag();
    }
  }
  const double vmax = *std::max_element(var.begin(), var.end());
  std::size_t tested = 0;
  for (std::size_t i = 0; i < 16; ++i) {
    const double v = sigma * sigma * var[i];
    double emp = 0.0;
    for (std::size_t t = 0; t < draws; ++t) emp += re[i][t] * re[i][t] + im[i][t] * im[i][t];
    emp /= static_cast<double>(draws);
    // Coordinates the sampled rows do not see carry only rounding noise.
    if (var[i] < 1e-20 * vmax) {
      CHECK(emp < 1e-20 * vmax);
      continue;
    }
    ++tested;
    CHECK(std::abs(emp / v - 1.0) < 0.05);
    const double sd = std::sqrt(v / 2.0);
    for (auto* part : {&re[i], &im[i]}) {
      RealVector z(*part);
      for (auto& x : z) x /= sd;
      CHECK(anderson_darling_standard_normal(z) < kAndersonDarling1e3);
    }
  }
  CHECK(tested >= 12);
}
