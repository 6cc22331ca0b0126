#pragma once

#include <filesystem>
#include <span>
#include <utility>

#include "rwuq/types.hpp"

namespace rwuq {

struct EllipseSpec {
  double intensity = 0.0;
  double cx = 0.0, cy = 0.0;  // center in [-1, 1]^2, y pointing up
  double a = 0.0, b = 0.0;    // semi-axes along the rotated x / y directions
  double angle_deg = 0.0;     // counter-clockwise rotation
};

/// The standard 10-ellipse high-contrast ("modified") Shepp-Logan table.
std::vector<EllipseSpec> modified_shepp_logan_table();

/// Center-of-pixel rasterization: pixel (r, c) sits at
/// ((2c+1)/cols - 1, 1 - (2r+1)/rows); overlapping intensities add.
ComplexImage rasterize(const Shape& shape, std::span<const EllipseSpec> ellipses);
ComplexImage shepp_logan(const Shape& shape);

/// x0 = vectorized image, z0 = its 2D Haar coefficients.
std::pair<ComplexVector, ComplexVector> ground_truth_pair(const ComplexImage& img);

/// Text table, one ellipse per line: intensity cx cy a b angle_deg.
/// Blank lines and lines starting with '#' are ignored.
std::vector<EllipseSpec> read_ellipse_table(const std::filesystem::path& file);
std::string format_ellipse_table(std::span<const EllipseSpec> ellipses);

/// 8-bit binary PGM of the real part, linearly mapped from [min, max].
void write_pgm(const std::filesystem::path& file, const ComplexImage& img);
/// Raw dump: "RWUQIMG1", uint64 rows, uint64 cols, then rows*cols pairs of
/// little-endian float64 (re, im).
void write_raw_image(const std::filesystem::path& file, const ComplexImage& img);
ComplexImage read_raw_image(const std::filesystem::path& file);

}  // namespace rwuq
