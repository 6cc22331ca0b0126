#include <algorithm>

#include <omp.h>

#include "rwuq/kernels/kernels.hpp"
#include "rwuq/transforms.hpp"
#include "fourier_rows.hpp"

namespace rwuq::kernels {

namespace {

using detail::FourierRowTable;

double row_max_modulus(const FourierRowTable& table, std::size_t j, std::span<Complex> row,
                       std::span<Complex> scratch) {
  table.fill(j, row);
  haar2d_forward_inplace(table.shape, row, scratch);
  double m = 0.0;
  for (const auto& v : row) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

void fourier_row(const Shape& shape, std::size_t j, std::span<Complex> out) {
  if (out.size() != shape.size() || j >= shape.size()) throw Error("fourier_row: bad index or length");
  FourierRowTable(shape).fill(j, out);
}

void system_row(const Shape& shape, std::size_t j, Domain domain, std::span<Complex> out,
                std::span<Complex> scratch) {
  fourier_row(shape, j, out);
  if (domain == Domain::haar) haar2d_forward_inplace(shape, out, scratch);
}

int max_threads() { return omp_get_max_threads(); }

namespace serial {

RealVector local_coherence(const Shape& shape) {
  require_power_of_two(shape, "local_coherence");
  const FourierRowTable table(shape);
  RealVector kappa(shape.size());
  ComplexVector row(shape.size()), scratch(std::max(shape.rows, shape.cols));
  for (std::size_t j = 0; j < shape.size(); ++j) kappa[j] = row_max_modulus(table, j, row, scratch);
  return kappa;
}

}  // namespace serial

namespace parallel {

RealVector local_coherence(const Shape& shape) {
  require_power_of_two(shape, "local_coherence");
  const FourierRowTable table(shape);
  const auto n = static_cast<std::ptrdiff_t>(shape.size());
  RealVector kappa(shape.size());
#pragma omp parallel
  {
    ComplexVector row(shape.size()), scratch(std::max(shape.rows, shape.cols));
#pragma omp for schedule(static)
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      kappa[static_cast<std::size_t>(j)] = row_max_modulus(table, static_cast<std::size_t>(j), row, scratch);
    }
  }
  return kappa;
}

}  // namespace parallel

}  // namespace rwuq::kernels
