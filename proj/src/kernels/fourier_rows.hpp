#pragma once

#include <cmath>
#include <numbers>
#include <span>

#include "rwuq/types.hpp"

namespace rwuq::kernels::detail {

// exp(-2 pi i k / n) for k < n, evaluated directly (no recurrence drift).
inline ComplexVector roots_of_unity(std::size_t n) {
  ComplexVector r(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    r[k] = {std::cos(a), std::sin(a)};
  }
  return r;
}

struct FourierRowTable {
  Shape shape;
  ComplexVector row_roots;
  ComplexVector col_roots;
  double scale;

  explicit FourierRowTable(const Shape& s)
      : shape(s), row_roots(roots_of_unity(s.rows)), col_roots(roots_of_unity(s.cols)),
        scale(1.0 / std::sqrt(static_cast<double>(s.size()))) {}

  void fill(std::size_t j, std::span<Complex> out) const {
    const std::size_t kr = j / shape.cols;
    const std::size_t kc = j % shape.cols;
    for (std::size_t r = 0; r < shape.rows; ++r) {
      const Complex er = row_roots[(kr * r) % shape.rows] * scale;
      Complex* dst = out.data() + r * shape.cols;
      for (std::size_t c = 0; c < shape.cols; ++c) dst[c] = er * col_roots[(kc * c) % shape.cols];
    }
  }
};

}  // namespace rwuq::kernels::detail
