#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rwuq {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using RealVector = std::vector<double>;

/// Raised for any violated precondition (bad lengths, unsupported sizes,
/// invalid probability vectors, ...).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Grid shape of an image. A 1D signal of length N is the shape {1, N}.
struct Shape {
  std::size_t rows = 1;
  std::size_t cols = 1;

  std::size_t size() const { return rows * cols; }
  bool operator==(const Shape&) const = default;

  static Shape line(std::size_t n) { return {1, n}; }
};

/// Throws unless both dimensions are powers of two.
void require_power_of_two(const Shape& shape, const char* what);

std::string to_string(const Shape& shape);
/// Parses "RxC" (or a bare "N", meaning a 1 x N line).
Shape parse_shape(const std::string& text);

/// Row-major complex image. Vectorization is the data vector itself.
struct ComplexImage {
  Shape shape;
  ComplexVector data;

  ComplexImage() = default;
  explicit ComplexImage(Shape s) : shape(s), data(s.size()) {}
  ComplexImage(Shape s, ComplexVector d) : shape(s), data(std::move(d)) {
    if (data.size() != shape.size()) throw Error("ComplexImage: data size does not match shape");
  }

  Complex& at(std::size_t r, std::size_t c) { return data[r * shape.cols + c]; }
  const Complex& at(std::size_t r, std::size_t c) const { return data[r * shape.cols + c]; }
};

enum class Domain { image, haar };

const char* to_string(Domain d);

}  // namespace rwuq
