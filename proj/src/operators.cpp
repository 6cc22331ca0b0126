#include "rwuq/operators.hpp"

#include <algorithm>
#include <cmath>

#include "rwuq/kernels/kernels.hpp"

namespace rwuq {

const char* to_string(FourierScale s) { return s == FourierScale::unitary ? "unitary" : "entry_magnitude_one"; }

MeasurementOperator::MeasurementOperator(Shape shape, std::vector<std::size_t> rows, RealVector row_weights,
                                         Domain domain, std::size_t normalization, FourierScale scale)
    : shape_(shape), rows_(std::move(rows)), weights_(std::move(row_weights)), domain_(domain),
      normalization_(normalization), scale_(scale) {
  require_power_of_two(shape_, "MeasurementOperator");
  if (rows_.empty()) throw Error("MeasurementOperator: no sampled rows");
  if (weights_.size() != rows_.size()) throw Error("MeasurementOperator: one weight per sampled row required");
  if (normalization_ == 0) throw Error("MeasurementOperator: normalization must be positive");
  for (auto j : rows_)
    if (j >= shape_.size()) throw Error("MeasurementOperator: row index out of range");
  for (double w : weights_)
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error("MeasurementOperator: weights must be finite and nonnegative");
  fft_ = std::make_shared<const Fft2d>(shape_);
}

namespace {

void require_pattern_fits(const Shape& shape, const SamplingPattern& pattern) {
  if (pattern.gamma.size() != pattern.omega.size()) throw Error("operator: malformed sampling pattern");
  for (auto j : pattern.omega)
    if (j >= shape.size()) throw Error("operator: pattern index outside the signal");
}

void require_profile_fits(const Shape& shape, const CoherenceProfile& profile) {
  if (!(profile.shape == shape) || profile.d.size() != shape.size())
    throw Error("operator: coherence profile does not match the signal shape");
}

}  // namespace

MeasurementOperator MeasurementOperator::standard(const Shape& shape, const SamplingPattern& pattern, Domain domain) {
  require_pattern_fits(shape, pattern);
  return {shape, pattern.omega, RealVector(pattern.m(), 1.0), domain, pattern.m(), FourierScale::entry_magnitude_one};
}

MeasurementOperator MeasurementOperator::preconditioned(const Shape& shape, const SamplingPattern& pattern,
                                                        const CoherenceProfile& profile, Domain domain) {
  require_pattern_fits(shape, pattern);
  require_profile_fits(shape, profile);
  RealVector w(pattern.m());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = profile.d[pattern.omega[i]];
  return {shape, pattern.omega, std::move(w), domain, pattern.m(), FourierScale::unitary};
}

MeasurementOperator MeasurementOperator::reweighted(const Shape& shape, const SamplingPattern& pattern,
                                                    const CoherenceProfile& profile, Domain domain) {
  require_pattern_fits(shape, pattern);
  require_profile_fits(shape, profile);
  if (pattern.n == 0) throw Error("operator: reweighted pattern has n = 0");
  RealVector w(pattern.m());
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] = std::sqrt(static_cast<double>(pattern.gamma[i])) * profile.d[pattern.omega[i]];
  return {shape, pattern.omega, std::move(w), domain, static_cast<std::size_t>(pattern.n), FourierScale::unitary};
}

MeasurementOperator MeasurementOperator::expanded(const Shape& shape, const SamplingPattern& pattern,
                                                  const CoherenceProfile& profile, Domain domain) {
  require_pattern_fits(shape, pattern);
  require_profile_fits(shape, profile);
  std::vector<std::size_t> rows;
  RealVector w;
  rows.reserve(pattern.n);
  w.reserve(pattern.n);
  for (std::size_t i = 0; i < pattern.m(); ++i) {
    for (std::uint64_t c = 0; c < pattern.gamma[i]; ++c) {
      rows.push_back(pattern.omega[i]);
      w.push_back(profile.d[pattern.omega[i]]);
    }
  }
  const std::size_t n = rows.size();
  return {shape, std::move(rows), std::move(w), domain, n, FourierScale::unitary};
}

MeasurementOperator MeasurementOperator::for_scheme(const Shape& shape, const SamplingPattern& pattern,
                                                    const CoherenceProfile& profile, Domain domain) {
  switch (pattern.scheme) {
    case Scheme::uniform:
    case Scheme::without_replacement: return standard(shape, pattern, domain);
    case Scheme::with_replacement: return preconditioned(shape, pattern, profile, domain);
    case Scheme::reweighted: return reweighted(shape, pattern, profile, domain);
  }
  throw Error("operator: bad scheme");
}

double MeasurementOperator::fourier_factor() const {
  return scale_ == FourierScale::unitary ? 1.0 : std::sqrt(static_cast<double>(shape_.size()));
}

MeasurementOperator MeasurementOperator::with_domain(Domain domain) const {
  MeasurementOperator copy = *this;
  copy.domain_ = domain;
  return copy;
}

MeasurementOperator MeasurementOperator::with_normalization(std::size_t normalization) const {
  if (normalization == 0) throw Error("MeasurementOperator: normalization must be positive");
  MeasurementOperator copy = *this;
  copy.normalization_ = normalization;
  return copy;
}

ComplexVector MeasurementOperator::apply_fourier(std::span<const Complex> x) const {
  if (x.size() != shape_.size()) throw Error("operator forward: input length does not match N");
  ComplexVector buf(x.begin(), x.end());
  if (domain_ == Domain::haar) {
    ComplexVector scratch(std::max(shape_.rows, shape_.cols));
    haar2d_adjoint_inplace(shape_, buf, scratch);
  }
  fft_->forward(buf);
  const double s = fourier_factor();
  ComplexVector y(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) y[i] = s * buf[rows_[i]];
  return y;
}

ComplexVector MeasurementOperator::measure(std::span<const Complex> x) const { return apply_fourier(x); }

ComplexVector MeasurementOperator::forward(std::span<const Complex> x) const {
  ComplexVector y = apply_fourier(x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] *= weights_[i];
  return y;
}

ComplexVector MeasurementOperator::weight(std::span<const Complex> y) const {
  if (y.size() != rows_.size()) throw Error("operator weight: input length does not match m");
  ComplexVector out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = weights_[i] * y[i];
  return out;
}

ComplexVector MeasurementOperator::adjoint(std::span<const Complex> y) const {
  if (y.size() != rows_.size()) throw Error("operator adjoint: input length does not match m");
  const double s = fourier_factor();
  ComplexVector buf(shape_.size(), Complex{0.0, 0.0});
  for (std::size_t i = 0; i < rows_.size(); ++i) buf[rows_[i]] += (s * weights_[i]) * y[i];
  fft_->adjoint(buf);
  if (domain_ == Domain::haar) {
    ComplexVector scratch(std::max(shape_.rows, shape_.cols));
    haar2d_forward_inplace(shape_, buf, scratch);
  }
  return buf;
}

RealVector MeasurementOperator::gram_diagonal() const {
  const double s2 = fourier_factor() * fourier_factor();
  const double norm = static_cast<double>(normalization_);
  RealVector coeff(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) coeff[i] = weights_[i] * weights_[i] * s2 / norm;
  return kernels::parallel::weighted_row_energy(shape_, rows_, coeff, domain_);
}

RealVector MeasurementOperator::noise_gram_diagonal() const {
  const double s2 = fourier_factor() * fourier_factor();
  const double norm = static_cast<double>(normalization_);
  RealVector coeff(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const double w2 = weights_[i] * weights_[i];
    coeff[i] = w2 * w2 * s2 / (norm * norm);
  }
  return kernels::parallel::weighted_row_energy(shape_, rows_, coeff, domain_);
}

double MeasurementOperator::lipschitz() const {
  RealVector per_frequency(shape_.size(), 0.0);
  for (std::size_t i = 0; i < rows_.size(); ++i) per_frequency[rows_[i]] += weights_[i] * weights_[i];
  const double s2 = fourier_factor() * fourier_factor();
  return *std::max_element(per_frequency.begin(), per_frequency.end()) * s2 / static_cast<double>(normalization_);
}

namespace {

void require_dense_size(const MeasurementOperator& op) {
  if (op.signal_size() > kDenseLimit) throw Error("dense assembly is limited to N <= 256");
}

}  // namespace

DenseMatrix dense_matrix(const MeasurementOperator& op) {
  require_dense_size(op);
  const Shape& shape = op.shape();
  DenseMatrix M(op.measurement_count(), shape.size());
  ComplexVector row(shape.size()), scratch(std::max(shape.rows, shape.cols));
  const double s = op.fourier_factor();
  for (std::size_t i = 0; i < op.measurement_count(); ++i) {
    kernels::system_row(shape, op.rows()[i], op.domain(), row, scratch);
    for (std::size_t k = 0; k < shape.size(); ++k) M(i, k) = op.row_weights()[i] * s * row[k];
  }
  return M;
}

DenseMatrix dense_gram(const MeasurementOperator& op) {
  require_dense_size(op);
  const Shape& shape = op.shape();
  const std::size_t N = shape.size();
  DenseMatrix G(N, N);
  ComplexVector row(N), scratch(std::max(shape.rows, shape.cols));
  const double s2 = op.fourier_factor() * op.fourier_factor();
  for (std::size_t i = 0; i < op.measurement_count(); ++i) {
    kernels::system_row(shape, op.rows()[i], op.domain(), row, scratch);
    const double c = op.row_weights()[i] * op.row_weights()[i] * s2;
    for (std::size_t k = 0; k < N; ++k) {
      const Complex ck = c * std::conj(row[k]);
      for (std::size_t l = 0; l < N; ++l) G(k, l) += ck * row[l];
    }
  }
  return G;
}

double gram_identity_deviation(const Shape& shape, const SamplingPattern& pattern, const CoherenceProfile& profile) {
  if (pattern.scheme != Scheme::reweighted) throw Error("gram identity check requires a reweighted pattern");
  const auto left = dense_gram(MeasurementOperator::reweighted(shape, pattern, profile));
  const auto right = dense_gram(MeasurementOperator::expanded(shape, pattern, profile));
  double dev = 0.0;
  for (std::size_t i = 0; i < left.data.size(); ++i) dev = std::max(dev, std::abs(left.data[i] - right.data[i]));
  return dev;
}

}  // namespace rwuq
