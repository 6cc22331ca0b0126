#include <algorithm>

#include "fourier_rows.hpp"
#include "rwuq/kernels/kernels.hpp"
#include "rwuq/transforms.hpp"

namespace rwuq::kernels {

namespace {

void check_inputs(const Shape& shape, std::span<const std::size_t> rows, std::span<const double> coeffs) {
  require_power_of_two(shape, "weighted_row_energy");
  if (rows.size() != coeffs.size()) throw Error("weighted_row_energy: rows and coefficients differ in length");
  for (auto j : rows)
    if (j >= shape.size()) throw Error("weighted_row_energy: row index out of range");
}

void accumulate_row(const detail::FourierRowTable& table, std::size_t j, double coeff, Domain domain,
                    std::span<Complex> row, std::span<Complex> scratch, RealVector& acc) {
  table.fill(j, row);
  if (domain == Domain::haar) haar2d_forward_inplace(table.shape, row, scratch);
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += coeff * std::norm(row[i]);
}

// Fixed block length; depends on the row count only.
std::size_t block_length(std::size_t m) { return std::max<std::size_t>(16, (m + 63) / 64); }

}  // namespace

namespace serial {

RealVector weighted_row_energy(const Shape& shape, std::span<const std::size_t> rows,
                               std::span<const double> coeffs, Domain domain) {
  check_inputs(shape, rows, coeffs);
  const detail::FourierRowTable table(shape);
  RealVector acc(shape.size(), 0.0);
  ComplexVector row(shape.size()), scratch(std::max(shape.rows, shape.cols));
  for (std::size_t t = 0; t < rows.size(); ++t) accumulate_row(table, rows[t], coeffs[t], domain, row, scratch, acc);
  return acc;
}

}  // namespace serial

namespace parallel {

RealVector weighted_row_energy(const Shape& shape, std::span<const std::size_t> rows,
                               std::span<const double> coeffs, Domain domain) {
  check_inputs(shape, rows, coeffs);
  const detail::FourierRowTable table(shape);
  const std::size_t m = rows.size();
  const std::size_t len = block_length(m);
  const std::size_t blocks = (m + len - 1) / len;
  if (blocks == 0) return RealVector(shape.size(), 0.0);

  std::vector<RealVector> partial(blocks, RealVector(shape.size(), 0.0));
#pragma omp parallel
  {
    ComplexVector row(shape.size()), scratch(std::max(shape.rows, shape.cols));
#pragma omp for schedule(dynamic, 1)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
      const auto ub = static_cast<std::size_t>(b);
      const std::size_t end = std::min(m, (ub + 1) * len);
      for (std::size_t t = ub * len; t < end; ++t)
        accumulate_row(table, rows[t], coeffs[t], domain, row, scratch, partial[ub]);
    }
  }

  // Pairwise tree reduction in index order.
  for (std::size_t stride = 1; stride < blocks; stride *= 2) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); b += static_cast<std::ptrdiff_t>(2 * stride)) {
      const auto lo = static_cast<std::size_t>(b);
      const std::size_t hi = lo + stride;
      if (hi >= blocks) continue;
      for (std::size_t i = 0; i < shape.size(); ++i) partial[lo][i] += partial[hi][i];
    }
  }
  return std::move(partial[0]);
}

}  // namespace parallel

}  // namespace rwuq::kernels
