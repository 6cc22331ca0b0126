#include "rwuq/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rwuq {

void require_power_of_two(const Shape& shape, const char* what) {
  if (!is_power_of_two(shape.rows) || !is_power_of_two(shape.cols)) {
    throw Error(std::string(what) + ": dimensions must be powers of two, got " + to_string(shape));
  }
}

std::string to_string(const Shape& shape) {
  return std::to_string(shape.rows) + "x" + std::to_string(shape.cols);
}

Shape parse_shape(const std::string& text) {
  const auto x = text.find_first_of("xX");
  try {
    if (x == std::string::npos) return Shape::line(std::stoul(text));
    return {std::stoul(text.substr(0, x)), std::stoul(text.substr(x + 1))};
  } catch (const std::exception&) {
    throw Error("cannot parse size '" + text + "', expected RxC");
  }
}

const char* to_string(Domain d) { return d == Domain::haar ? "haar" : "image"; }

FftPlan::FftPlan(std::size_t n) : n_(n), log2n_(0) {
  if (n == 0) throw Error("FFT: empty input");
  if (!is_power_of_two(n)) throw Error("FFT: length " + std::to_string(n) + " is not a power of two");
  while ((std::size_t{1} << log2n_) < n) ++log2n_;
  scale_ = 1.0 / std::sqrt(static_cast<double>(n));
  bitrev_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < log2n_; ++b)
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (log2n_ - 1 - b);
    bitrev_[i] = r;
  }
  twiddle_.resize(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    twiddle_[k] = {std::cos(angle), std::sin(angle)};
  }
}

void FftPlan::execute(std::span<Complex> a, bool inverse) const {
  if (a.size() != n_) throw Error("FFT: length mismatch with plan");
  for (std::size_t i = 0; i < n_; ++i)
    if (i < bitrev_[i]) std::swap(a[i], a[bitrev_[i]]);
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t step = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        Complex w = twiddle_[k * step];
        if (inverse) w = std::conj(w);
        const Complex u = a[start + k];
        const Complex t = w * a[start + k + half];
        a[start + k] = u + t;
        a[start + k + half] = u - t;
      }
    }
  }
  for (auto& v : a) v *= scale_;
}

void FftPlan::execute_strided(Complex* data, std::size_t stride, bool inverse, std::span<Complex> scratch) const {
  auto buf = scratch.first(n_);
  for (std::size_t i = 0; i < n_; ++i) buf[i] = data[i * stride];
  execute(buf, inverse);
  for (std::size_t i = 0; i < n_; ++i) data[i * stride] = buf[i];
}

Fft2d::Fft2d(Shape shape) : shape_(shape), row_plan_(shape.cols), col_plan_(shape.rows) {}

void Fft2d::run(std::span<Complex> data, bool inverse) const {
  if (data.size() != shape_.size()) throw Error("FFT2: length mismatch with plan");
  for (std::size_t r = 0; r < shape_.rows; ++r) row_plan_.execute(data.subspan(r * shape_.cols, shape_.cols), inverse);
  if (shape_.rows == 1) return;
  ComplexVector scratch(shape_.rows);
  for (std::size_t c = 0; c < shape_.cols; ++c) col_plan_.execute_strided(data.data() + c, shape_.cols, inverse, scratch);
}

ComplexVector dft_forward(std::span<const Complex> v) {
  FftPlan plan(v.size());
  ComplexVector out(v.begin(), v.end());
  plan.execute(out, false);
  return out;
}

ComplexVector dft_adjoint(std::span<const Complex> v) {
  FftPlan plan(v.size());
  ComplexVector out(v.begin(), v.end());
  plan.execute(out, true);
  return out;
}

ComplexImage dft2_forward(const ComplexImage& img) {
  ComplexImage out = img;
  Fft2d(img.shape).forward(out.data);
  return out;
}

ComplexImage dft2_adjoint(const ComplexImage& img) {
  ComplexImage out = img;
  Fft2d(img.shape).adjoint(out.data);
  return out;
}

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_haar_length(std::size_t n) {
  if (!is_power_of_two(n)) throw Error("Haar: length " + std::to_string(n) + " is not a power of two");
}

// Strided variants so image columns need no gather/scatter copies.
void haar_forward_strided(Complex* a, std::size_t n, std::size_t stride, Complex* tmp) {
  for (std::size_t len = n; len > 1; len /= 2) {
    const std::size_t half = len / 2;
    for (std::size_t i = 0; i < half; ++i) {
      const Complex x = a[(2 * i) * stride];
      const Complex y = a[(2 * i + 1) * stride];
      tmp[i] = (x + y) * kInvSqrt2;
      tmp[half + i] = (x - y) * kInvSqrt2;
    }
    for (std::size_t i = 0; i < len; ++i) a[i * stride] = tmp[i];
  }
}

void haar_adjoint_strided(Complex* a, std::size_t n, std::size_t stride, Complex* tmp) {
  for (std::size_t len = 2; len <= n; len *= 2) {
    const std::size_t half = len / 2;
    for (std::size_t i = 0; i < half; ++i) {
      const Complex s = a[i * stride];
      const Complex d = a[(half + i) * stride];
      tmp[2 * i] = (s + d) * kInvSqrt2;
      tmp[2 * i + 1] = (s - d) * kInvSqrt2;
    }
    for (std::size_t i = 0; i < len; ++i) a[i * stride] = tmp[i];
  }
}

}  // namespace

void haar_forward_inplace(std::span<Complex> data, std::span<Complex> scratch) {
  check_haar_length(data.size());
  haar_forward_strided(data.data(), data.size(), 1, scratch.data());
}

void haar_adjoint_inplace(std::span<Complex> data, std::span<Complex> scratch) {
  check_haar_length(data.size());
  haar_adjoint_strided(data.data(), data.size(), 1, scratch.data());
}

void haar2d_forward_inplace(const Shape& shape, std::span<Complex> data, std::span<Complex> scratch) {
  require_power_of_two(shape, "Haar2D");
  if (data.size() != shape.size()) throw Error("Haar2D: data size does not match shape");
  for (std::size_t r = 0; r < shape.rows; ++r)
    haar_forward_strided(data.data() + r * shape.cols, shape.cols, 1, scratch.data());
  if (shape.rows == 1) return;
  for (std::size_t c = 0; c < shape.cols; ++c)
    haar_forward_strided(data.data() + c, shape.rows, shape.cols, scratch.data());
}

void haar2d_adjoint_inplace(const Shape& shape, std::span<Complex> data, std::span<Complex> scratch) {
  require_power_of_two(shape, "Haar2D");
  if (data.size() != shape.size()) throw Error("Haar2D: data size does not match shape");
  if (shape.rows > 1) {
    for (std::size_t c = 0; c < shape.cols; ++c)
      haar_adjoint_strided(data.data() + c, shape.rows, shape.cols, scratch.data());
  }
  for (std::size_t r = 0; r < shape.rows; ++r)
    haar_adjoint_strided(data.data() + r * shape.cols, shape.cols, 1, scratch.data());
}

ComplexVector haar_forward(std::span<const Complex> v) {
  ComplexVector out(v.begin(), v.end()), scratch(v.size());
  haar_forward_inplace(out, scratch);
  return out;
}

ComplexVector haar_adjoint(std::span<const Complex> v) {
  ComplexVector out(v.begin(), v.end()), scratch(v.size());
  haar_adjoint_inplace(out, scratch);
  return out;
}

ComplexImage haar2d_forward(const ComplexImage& img) {
  ComplexImage out = img;
  ComplexVector scratch(std::max(img.shape.rows, img.shape.cols));
  haar2d_forward_inplace(img.shape, out.data, scratch);
  return out;
}

ComplexImage haar2d_adjoint(const ComplexImage& img) {
  ComplexImage out = img;
  ComplexVector scratch(std::max(img.shape.rows, img.shape.cols));
  haar2d_adjoint_inplace(img.shape, out.data, scratch);
  return out;
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw Error("inner: length mismatch");
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm2(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

double norm_inf(std::span<const Complex> v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

ComplexVector subtract(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw Error("subtract: length mismatch");
  ComplexVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

}  // namespace rwuq
