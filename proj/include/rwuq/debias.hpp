#pragma once

#include <span>

#include "rwuq/operators.hpp"
#include "rwuq/types.hpp"

namespace rwuq {

/// Exact split of the debiased error: debiased - truth = w_term + r_term.
struct Decomposition {
  ComplexVector debiased;
  ComplexVector w_term;  // Gaussian term, M* diag(w) eps / norm
  ComplexVector r_term;  // remainder, (M*M/norm - I)(truth - x_hat)
  Domain domain = Domain::haar;
};

/// x_hat + (1/norm) M* (diag(w) y - M x_hat), with y the raw measurements.
ComplexVector debias_estimate(const MeasurementOperator& op, std::span<const Complex> x_hat,
                              std::span<const Complex> y);

/// Experiment-mode decomposition; needs the ground truth and the raw noise
/// that produced y = measure(truth) + noise.
Decomposition decompose(const MeasurementOperator& op, std::span<const Complex> x_hat,
                        std::span<const Complex> ground_truth, std::span<const Complex> noise);

/// Maps a haar-domain decomposition to the image domain via inverse 2D Haar.
Decomposition to_image_domain(const Decomposition& dec, const Shape& shape);

/// ||(debiased - truth) - (W + R)||_inf.
double decomposition_residual(std::span<const Complex> debiased, std::span<const Complex> truth,
                              const Decomposition& dec);

}  // namespace rwuq
