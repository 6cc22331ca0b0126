#pragma once

#include <memory>
#include <span>

#include "rwuq/coherence.hpp"
#include "rwuq/sampling.hpp"
#include "rwuq/transforms.hpp"
#include "rwuq/types.hpp"

namespace rwuq {

/// `unitary` uses the orthonormal DFT; `entry_magnitude_one` is sqrt(N) times
/// it, so every entry of F has modulus one.
enum class FourierScale { unitary, entry_magnitude_one };

const char* to_string(FourierScale s);

/// Matrix-free M = diag(w) * s * F_Omega * (H* when domain == haar), mapping
/// C^N to C^m, paired with the normalization used by the LASSO data term and
/// the debiasing correction. Immutable; copies share the FFT plan.
class MeasurementOperator {
 public:
  MeasurementOperator(Shape shape, std::vector<std::size_t> rows, RealVector row_weights, Domain domain,
                      std::size_t normalization, FourierScale scale);

  /// A = sqrt(N) F_Omega H*, unit weights, normalization m.
  static MeasurementOperator standard(const Shape& shape, const SamplingPattern& pattern, Domain domain = Domain::haar);
  /// D F_Omega H* with d_j = ||kappa|| / kappa_j, unitary F, normalization m.
  static MeasurementOperator preconditioned(const Shape& shape, const SamplingPattern& pattern,
                                            const CoherenceProfile& profile, Domain domain = Domain::haar);
  /// C D F_Omega H* with C = diag(sqrt(gamma)), unitary F, normalization n.
  static MeasurementOperator reweighted(const Shape& shape, const SamplingPattern& pattern,
                                        const CoherenceProfile& profile, Domain domain = Domain::haar);
  /// Virtual with-replacement system: each omega_i repeated gamma_i times with
  /// weight d_{omega_i}, normalization n.
  static MeasurementOperator expanded(const Shape& shape, const SamplingPattern& pattern,
                                      const CoherenceProfile& profile, Domain domain = Domain::haar);
  /// The operator a sampling scheme is reconstructed with: standard for
  /// uniform and without_replacement, preconditioned for with_replacement,
  /// reweighted for reweighted.
  static MeasurementOperator for_scheme(const Shape& shape, const SamplingPattern& pattern,
                                        const CoherenceProfile& profile, Domain domain = Domain::haar);

  const Shape& shape() const { return shape_; }
  std::size_t signal_size() const { return shape_.size(); }
  std::size_t measurement_count() const { return rows_.size(); }
  const std::vector<std::size_t>& rows() const { return rows_; }
  const RealVector& row_weights() const { return weights_; }
  Domain domain() const { return domain_; }
  std::size_t normalization() const { return normalization_; }
  FourierScale fourier_scale() const { return scale_; }
  double fourier_factor() const;

  MeasurementOperator with_domain(Domain domain) const;
  MeasurementOperator with_normalization(std::size_t normalization) const;

  /// diag(w) s F_Omega x'  (x' = H* x for the haar domain).
  ComplexVector forward(std::span<const Complex> x) const;
  /// Same without the row weights: the physical acquisition s F_Omega x'.
  ComplexVector measure(std::span<const Complex> x) const;
  /// Exact adjoint of forward; repeated rows accumulate.
  ComplexVector adjoint(std::span<const Complex> y) const;
  /// diag(w) y.
  ComplexVector weight(std::span<const Complex> y) const;

  /// (M* M / normalization)_ii.
  RealVector gram_diagonal() const;
  /// Diagonal of Cov(W) / sigma^2 for W = M* diag(w) eps / normalization.
  RealVector noise_gram_diagonal() const;
  /// Largest eigenvalue of M* M / normalization, exact: F H* is unitary, so
  /// the spectrum is the per-frequency accumulated s^2 w^2 / normalization.
  double lipschitz() const;

 private:
  ComplexVector apply_fourier(std::span<const Complex> x) const;

  Shape shape_;
  std::vector<std::size_t> rows_;
  RealVector weights_;
  Domain domain_;
  std::size_t normalization_;
  FourierScale scale_;
  std::shared_ptr<const Fft2d> fft_;
};

/// Row-major dense complex matrix; oracle and diagnostic paths only.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  ComplexVector data;

  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
  Complex& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

inline constexpr std::size_t kDenseLimit = 256;

/// Explicit m x N matrix of `op.forward` (assembled row by row). N <= 256.
DenseMatrix dense_matrix(const MeasurementOperator& op);
/// M* M accumulated as a sum of weighted rank-one row terms. N <= 256.
DenseMatrix dense_gram(const MeasurementOperator& op);

/// max |(C D F_Omega H*)*(C D F_Omega H*) - (D~ F_Omega~ H*)*(D~ F_Omega~ H*)| over
/// all entries, with the right side summed over the expanded multiset.
double gram_identity_deviation(const Shape& shape, const SamplingPattern& pattern, const CoherenceProfile& profile);

}  // namespace rwuq
