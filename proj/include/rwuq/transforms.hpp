#pragma once

// Unitary DFT and orthonormal full-depth Haar transforms.
//
// Conventions (fixed, recorded in every coherence cache header):
//   DFT:  (Fv)_k = N^{-1/2} sum_j v_j exp(-2 pi i jk / N)
//   Haar: each level maps pairs (a, b) to ((a+b)/sqrt2, (a-b)/sqrt2); output
//         is [final approximation, coarsest details, ..., finest details]
//   2D:   separable, full-depth 1D transform on every row, then every column
// Only power-of-two lengths are supported.

#include <span>

#include "rwuq/types.hpp"

namespace rwuq {

inline constexpr const char* kTransformConventionTag = "dft-unitary-neg/haar-orth-approxfirst/rows-then-cols";

/// Precomputed radix-2 FFT tables for one length. Immutable after
/// construction, so one plan can be shared across threads.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const { return n_; }

  /// In-place unitary transform; `inverse` selects the conjugate kernel.
  void execute(std::span<Complex> data, bool inverse) const;
  /// Same, on a strided view (used for image columns).
  void execute_strided(Complex* data, std::size_t stride, bool inverse, std::span<Complex> scratch) const;

 private:
  std::size_t n_;
  std::size_t log2n_;
  double scale_;
  std::vector<std::size_t> bitrev_;
  std::vector<Complex> twiddle_;  // exp(-2 pi i k / n), k < n/2
};

/// 2D unitary DFT on a row-major grid. Owns one plan per axis.
class Fft2d {
 public:
  explicit Fft2d(Shape shape);

  const Shape& shape() const { return shape_; }
  void forward(std::span<Complex> data) const { run(data, false); }
  void adjoint(std::span<Complex> data) const { run(data, true); }

 private:
  void run(std::span<Complex> data, bool inverse) const;

  Shape shape_;
  FftPlan row_plan_;
  FftPlan col_plan_;
};

// 1D convenience entry points (allocate a plan per call).
ComplexVector dft_forward(std::span<const Complex> v);
ComplexVector dft_adjoint(std::span<const Complex> v);

ComplexImage dft2_forward(const ComplexImage& img);
ComplexImage dft2_adjoint(const ComplexImage& img);

// In-place Haar kernels; `scratch` must hold at least data.size() entries.
void haar_forward_inplace(std::span<Complex> data, std::span<Complex> scratch);
void haar_adjoint_inplace(std::span<Complex> data, std::span<Complex> scratch);
void haar2d_forward_inplace(const Shape& shape, std::span<Complex> data, std::span<Complex> scratch);
void haar2d_adjoint_inplace(const Shape& shape, std::span<Complex> data, std::span<Complex> scratch);

ComplexVector haar_forward(std::span<const Complex> v);
ComplexVector haar_adjoint(std::span<const Complex> v);

ComplexImage haar2d_forward(const ComplexImage& img);
ComplexImage haar2d_adjoint(const ComplexImage& img);

// Vector helpers shared by the pipeline.
Complex inner(std::span<const Complex> a, std::span<const Complex> b);  // sum conj(a_i) b_i
double norm2(std::span<const Complex> v);
double norm_inf(std::span<const Complex> v);
ComplexVector subtract(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace rwuq
