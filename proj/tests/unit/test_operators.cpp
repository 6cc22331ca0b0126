#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rwuq/operators.hpp"
#include "rwuq/solver.hpp"

using namespace rwuq;
using namespace rwuq::testing;

namespace {

DenseSquare dense_system(const Shape& s, Domain domain) {
  return domain == Domain::haar ? dense_fourier_haar(s) : kron(dense_dft(s.rows), dense_dft(s.cols));
}

/// Oracle matrix of an operator assembled from the dense system matrix.
Dense oracle_matrix(const MeasurementOperator& op) {
  const DenseSquare A = dense_system(op.shape(), op.domain());
  const double s = op.fourier_factor();
  Dense M(op.measurement_count(), op.signal_size());
  for (std::size_t t = 0; t < M.rows; ++t)
    for (std::size_t i = 0; i < M.cols; ++i) M(t, i) = op.row_weights()[t] * s * A(op.rows()[t], i);
  return M;
}

std::vector<MeasurementOperator> sample_operators(const Shape& s, std::uint64_t seed) {
  const auto prof = local_coherence(s);
  const std::size_t m = std::max<std::size_t>(1, s.size() / 3);
  std::vector<MeasurementOperator> ops;
  for (Domain d : {Domain::haar, Domain::image}) {
    ops.push_back(MeasurementOperator::standard(s, sample_without_replacement(prof.nu, m, seed), d));
    ops.push_back(MeasurementOperator::preconditioned(s, sample_with_replacement(prof.nu, m, seed), prof, d));
    ops.push_back(MeasurementOperator::reweighted(s, sample_reweighted(prof.nu, m, seed), prof, d));
    ops.push_back(MeasurementOperator::expanded(s, sample_reweighted(prof.nu, m, seed), prof, d));
  }
  return ops;
}

}  // namespace

TEST_CASE("full unit-weight sampling reduces to the DFT") {
  const Shape s{4, 8};
  const auto p = sample_uniform(s.size(), s.size(), 1);
  std::vector<std::size_t> rows(s.size());
  for (std::size_t j = 0; j < rows.size(); ++j) rows[j] = j;
  const MeasurementOperator op(s, rows, RealVector(s.size(), 1.0), Domain::image, 1, FourierScale::unitary);
  const ComplexImage img(s, random_vector(s.size(), 4));
  CHECK(max_abs_diff(op.forward(img.data), dft2_forward(img).data) < 1e-13);
  CHECK(max_abs_diff(op.adjoint(img.data), dft2_adjoint(img).data) < 1e-13);
  CHECK(norm2(op.forward(ComplexVector(s.size()))) == 0.0);
  CHECK(norm2(op.adjoint(ComplexVector(s.size()))) == 0.0);

  const auto haar_op = op.with_domain(Domain::haar);
  CHECK(max_abs_diff(haar_op.adjoint(img.data), haar2d_forward(dft2_adjoint(img)).data) < 1e-13);

  const auto standard = MeasurementOperator::standard(s, p);
  for (double g : standard.gram_diagonal()) CHECK(std::abs(g - 1.0) < 1e-12);
}

TEST_CASE("forward matches the dense assembly") {
  for (Shape s : {Shape{2, 4}, Shape::line(8), Shape{4, 4}}) {
    for (const auto& op : sample_operators(s, 21)) {
      const Dense M = oracle_matrix(op);
      const auto x = random_vector(s.size(), 5);
      CHECK(max_abs_diff(op.forward(x), dense_apply(M, x)) < 1e-12);
      const auto y = random_vector(op.measurement_count(), 6);
      CHECK(max_abs_diff(op.adjoint(y), apply_adjoint(M, y)) < 1e-12);
      const auto dm = dense_matrix(op);
      CHECK(max_abs_diff(dm.data, M.a) < 1e-12);
    }
  }
}

TEST_CASE("adjoint inner-product test for every configuration") {
  for (Shape s : {Shape::line(8), Shape{8, 8}, Shape{16, 16}}) {
    for (const auto& op : sample_operators(s, 3)) {
      const auto x = random_vector(op.signal_size(), 1), y = random_vector(op.measurement_count(), 2);
      const double scale = norm2(x) * norm2(y) * op.fourier_factor() * 1e2;
      CHECK(std::abs(inner(op.forward(x), y) - inner(x, op.adjoint(y))) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("gram and noise diagonals match dense oracles") {
  const Shape s{2, 4};
  for (const auto& op : sample_operators(s, 8)) {
    const Dense M = oracle_matrix(op);
    const double norm = static_cast<double>(op.normalization());
    const auto g = op.gram_diagonal();
    const auto ng = op.noise_gram_diagonal();
    const auto dg = dense_gram(op);
    for (std::size_t i = 0; i < s.size(); ++i) {
      double gi = 0.0, ni = 0.0;
      for (std::size_t t = 0; t < M.rows; ++t) {
        const double w = op.row_weights()[t];
        gi += std::norm(M(t, i));
        ni += std::norm(M(t, i)) * w * w;  // (M* diag(w))_{i t}
      }
      CHECK(std::abs(g[i] - gi / norm) < 1e-12);
      CHECK(std::abs(ng[i] - ni / (norm * norm)) < 1e-12);
      CHECK(std::abs(dg(i, i).real() - gi) < 1e-12);
    }
  }
}

TEST_CASE("noise gram reduces to gram / m for unit weights; zero weights drop out") {
  const Shape s{8, 8};
  const auto prof = local_coherence(s);
  const auto op = MeasurementOperator::standard(s, sample_without_replacement(prof.nu, 20, 1));
  const auto g = op.gram_diagonal(), ng = op.noise_gram_diagonal();
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(ng[i] - g[i] / 20.0) < 1e-14);

  RealVector w(op.row_weights());
  w[3] = 0.0;
  std::vector<std::size_t> rows = op.rows();
  const MeasurementOperator zeroed(s, rows, w, Domain::haar, 20, FourierScale::unitary);
  rows.erase(rows.begin() + 3);
  w.erase(w.begin() + 3);
  const MeasurementOperator dropped(s, rows, w, Domain::haar, 20, FourierScale::unitary);
  const auto a = zeroed.noise_gram_diagonal(), b = dropped.noise_gram_diagonal();
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-15);
}

TEST_CASE("exact Lipschitz constant agrees with power iteration") {
  for (const auto& op : sample_operators(Shape{8, 8}, 12)) {
    const double exact = op.lipschitz();
    const double est = estimate_lipschitz(op, 500, 1e-12);
    CHECK(est <= exact * (1 + 1e-9));
    CHECK(est == doctest::Approx(exact).epsilon(1e-3));
  }
}

TEST_CASE("reweighted gram equals the expanded with-replacement gram") {
  const Shape s{8, 8};
  const auto prof = local_coherence(s);
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    worst = std::max(worst, gram_identity_deviation(s, sample_reweighted(prof.nu, 20, seed), prof));
  CHECK(worst < 1e-10);

  // Single row counted k times: both sides equal k d^2 (H f)(H f)*.
  SamplingPattern one;
  one.scheme = Scheme::reweighted;
  one.omega = {5};
  one.gamma = {4};
  one.n = 4;
  CHECK(gram_identity_deviation(s, one, prof) < 1e-13);
  const auto g = dense_gram(MeasurementOperator::reweighted(s, one, prof));
  const auto A = dense_fourier_haar(s);
  const double d2 = prof.d[5] * prof.d[5];
  double dev = 0.0;
  for (std::size_t i = 0; i < 64; ++i)
    for (std::size_t k = 0; k < 64; ++k)
      dev = std::max(dev, std::abs(g(i, k) - 4.0 * d2 * std::conj(A(5, i)) * A(5, k)));
  CHECK(dev < 1e-12);

  SamplingPattern flat = one;
  flat.omega = {1, 7, 9};
  flat.gamma = {1, 1, 1};
  flat.n = 3;
  CHECK(gram_identity_deviation(s, flat, prof) < 1e-14);
  CHECK_THROWS_AS(gram_identity_deviation(s, sample_without_replacement(prof.nu, 5, 1), prof), Error);
}

TEST_CASE("operator factories and scheme mapping") {
  const Shape s{8, 8};
  const auto prof = local_coherence(s);
  const auto rw = sample_reweighted(prof.nu, 10, 4);
  const auto op = MeasurementOperator::for_scheme(s, rw, prof);
  CHECK(op.normalization() == rw.n);
  CHECK(op.fourier_scale() == FourierScale::unitary);
  for (std::size_t t = 0; t < rw.m(); ++t)
    CHECK(op.row_weights()[t] ==
          doctest::Approx(std::sqrt(static_cast<double>(rw.gamma[t])) * prof.d[rw.omega[t]]));
  const auto ex = MeasurementOperator::expanded(s, rw, prof);
  CHECK(ex.measurement_count() == rw.n);
  CHECK(ex.lipschitz() == doctest::Approx(op.lipschitz()));

  const auto wor = sample_without_replacement(prof.nu, 10, 4);
  const auto std_op = MeasurementOperator::for_scheme(s, wor, prof);
  CHECK(std_op.normalization() == 10);
  CHECK(std_op.fourier_scale() == FourierScale::entry_magnitude_one);
  CHECK(std_op.fourier_factor() == doctest::Approx(8.0));
  CHECK(MeasurementOperator::for_scheme(s, sample_with_replacement(prof.nu, 10, 4), prof).row_weights()[0] > 0);
  CHECK(op.with_normalization(10).normalization() == 10);
  CHECK_THROWS_AS(op.forward(ComplexVector(10)), Error);
  CHECK_THROWS_AS(op.adjoint(ComplexVector(3)), Error);
}
