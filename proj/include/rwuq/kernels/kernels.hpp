#pragma once

// Row kernels of the sampled Fourier-Haar system A = F H* (unitary F).
//
// Two implementations of each kernel exist: `serial` is the straight-line
// reference kept for testing, `parallel` is the OpenMP version used by the
// library. Parallel results are independent of the thread count.

#include <span>

#include "rwuq/types.hpp"

namespace rwuq::kernels {

/// Row `j` of the unitary 2D DFT as a vector over the image grid:
/// out[l] = N^{-1/2} exp(-2 pi i (kr r / rows + kc c / cols)), j = (kr, kc), l = (r, c).
void fourier_row(const Shape& shape, std::size_t j, std::span<Complex> out);

/// Row `j` of F (domain image) or of F H* (domain haar). `scratch` must hold
/// max(rows, cols) entries.
void system_row(const Shape& shape, std::size_t j, Domain domain, std::span<Complex> out,
                std::span<Complex> scratch);

namespace serial {

/// kappa_j = max_k |(F H*)_{jk}| for every j.
RealVector local_coherence(const Shape& shape);

/// out_i = sum_t coeffs[t] * |A_{rows[t], i}|^2.
RealVector weighted_row_energy(const Shape& shape, std::span<const std::size_t> rows,
                               std::span<const double> coeffs, Domain domain);

}  // namespace serial

namespace parallel {

RealVector local_coherence(const Shape& shape);

/// Rows are split into fixed-size blocks (a function of the row count only)
/// and block partials are summed pairwise in a fixed order.
RealVector weighted_row_energy(const Shape& shape, std::span<const std::size_t> rows,
                               std::span<const double> coeffs, Domain domain);

}  // namespace parallel

int max_threads();

}  // namespace rwuq::kernels
