#include "rwuq/phantom.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

#include "rwuq/format.hpp"
#include "rwuq/transforms.hpp"

namespace rwuq {

std::vector<EllipseSpec> modified_shepp_logan_table() {
  return {
      {1.0, 0.0, 0.0, 0.69, 0.92, 0.0},
      {-0.8, 0.0, -0.0184, 0.6624, 0.874, 0.0},
      {-0.2, 0.22, 0.0, 0.11, 0.31, -18.0},
      {-0.2, -0.22, 0.0, 0.16, 0.41, 18.0},
      {0.1, 0.0, 0.35, 0.21, 0.25, 0.0},
      {0.1, 0.0, 0.1, 0.046, 0.046, 0.0},
      {0.1, 0.0, -0.1, 0.046, 0.046, 0.0},
      {0.1, -0.08, -0.605, 0.046, 0.023, 0.0},
      {0.1, 0.0, -0.606, 0.023, 0.023, 0.0},
      {0.1, 0.06, -0.605, 0.023, 0.046, 0.0},
  };
}

ComplexImage rasterize(const Shape& shape, std::span<const EllipseSpec> ellipses) {
  require_power_of_two(shape, "phantom");
  for (const auto& e : ellipses)
    if (!(e.a > 0.0 && e.b > 0.0)) throw Error("phantom: ellipse semi-axes must be positive");
  ComplexImage img(shape);
  const auto rows = static_cast<std::ptrdiff_t>(shape.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t sr = 0; sr < rows; ++sr) {
    const auto r = static_cast<std::size_t>(sr);
    const double y = 1.0 - (2.0 * static_cast<double>(r) + 1.0) / static_cast<double>(shape.rows);
    for (std::size_t c = 0; c < shape.cols; ++c) {
      const double x = (2.0 * static_cast<double>(c) + 1.0) / static_cast<double>(shape.cols) - 1.0;
      double v = 0.0;
      for (const auto& e : ellipses) {
        const double phi = e.angle_deg * std::numbers::pi / 180.0;
        const double dx = x - e.cx, dy = y - e.cy;
        const double u = dx * std::cos(phi) + dy * std::sin(phi);
        const double w = -dx * std::sin(phi) + dy * std::cos(phi);
        if ((u * u) / (e.a * e.a) + (w * w) / (e.b * e.b) <= 1.0) v += e.intensity;
      }
      img.at(r, c) = {v, 0.0};
    }
  }
  return img;
}

ComplexImage shepp_logan(const Shape& shape) {
  const auto table = modified_shepp_logan_table();
  return rasterize(shape, table);
}

std::pair<ComplexVector, ComplexVector> ground_truth_pair(const ComplexImage& img) {
  return {img.data, haar2d_forward(img).data};
}

std::vector<EllipseSpec> read_ellipse_table(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot read ellipse table " + file.string());
  std::vector<EllipseSpec> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    EllipseSpec e;
    if (!(ss >> e.intensity >> e.cx >> e.cy >> e.a >> e.b >> e.angle_deg))
      throw Error("ellipse table line " + std::to_string(lineno) + ": expected 6 numbers");
    if (!(e.a > 0.0 && e.b > 0.0))
      throw Error("ellipse table line " + std::to_string(lineno) + ": semi-axes must be positive");
    out.push_back(e);
  }
  return out;
}

std::string format_ellipse_table(std::span<const EllipseSpec> ellipses) {
  std::string s = "# intensity cx cy a b angle_deg\n";
  for (const auto& e : ellipses) {
    s += fmt_number(e.intensity) + ' ' + fmt_number(e.cx) + ' ' + fmt_number(e.cy) + ' ' + fmt_number(e.a) + ' ' +
         fmt_number(e.b) + ' ' + fmt_number(e.angle_deg) + '\n';
  }
  return s;
}

void write_pgm(const std::filesystem::path& file, const ComplexImage& img) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write " + file.string());
  double lo = 0.0, hi = 0.0;
  if (!img.data.empty()) {
    lo = hi = img.data[0].real();
    for (const auto& v : img.data) lo = std::min(lo, v.real()), hi = std::max(hi, v.real());
  }
  out << "P5\n" << img.shape.cols << ' ' << img.shape.rows << "\n255\n";
  const double span = hi > lo ? hi - lo : 1.0;
  for (const auto& v : img.data) {
    const auto g = static_cast<unsigned char>(std::lround(255.0 * (v.real() - lo) / span));
    out.put(static_cast<char>(g));
  }
}

namespace {

constexpr char kRawMagic[8] = {'R', 'W', 'U', 'Q', 'I', 'M', 'G', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw Error("raw image: truncated file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

void write_raw_image(const std::filesystem::path& file, const ComplexImage& img) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write " + file.string());
  out.write(kRawMagic, 8);
  put_u64(out, img.shape.rows);
  put_u64(out, img.shape.cols);
  for (const auto& v : img.data) {
    put_u64(out, std::bit_cast<std::uint64_t>(v.real()));
    put_u64(out, std::bit_cast<std::uint64_t>(v.imag()));
  }
}

ComplexImage read_raw_image(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cannot read " + file.string());
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kRawMagic, 8) != 0) throw Error("raw image: bad magic");
  Shape shape{get_u64(in), get_u64(in)};
  ComplexImage img(shape);
  for (auto& v : img.data) {
    const double re = std::bit_cast<double>(get_u64(in));
    const double im = std::bit_cast<double>(get_u64(in));
    v = {re, im};
  }
  return img;
}

}  // namespace rwuq
