#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "oracles.hpp"
#include "rwuq/phantom.hpp"
#include "rwuq/transforms.hpp"

using namespace rwuq;
using namespace rwuq::testing;

namespace {

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "rwuq_test_phantom";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("phantom pixel values") {
  const auto img = shepp_logan(Shape{256, 256});
  CHECK(img.at(0, 0) == Complex(0.0, 0.0));
  CHECK(img.at(255, 255) == Complex(0.0, 0.0));
  CHECK(img.at(128, 128).real() == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(img.at(128, 128).imag() == 0.0);
  std::size_t nonzero = 0;
  double lo = 0.0, hi = 0.0;
  for (const auto& v : img.data) {
    nonzero += v != Complex(0.0);
    lo = std::min(lo, v.real());
    hi = std::max(hi, v.real());
  }
  CHECK(nonzero > 0);
  CHECK(nonzero < img.data.size());
  // Attainable sums of the table: at most the outer ellipse plus two small 0.1 blobs.
  CHECK(lo >= -1e-12);
  CHECK(hi <= 1.0 + 1e-12);
  CHECK(modified_shepp_logan_table().size() == 10);
  CHECK_THROWS_AS(shepp_logan(Shape{48, 64}), Error);
}

TEST_CASE("rasterization is deterministic and resolution consistent") {
  CHECK(shepp_logan(Shape{64, 64}).data == shepp_logan(Shape{64, 64}).data);
  // Mismatches sit on ellipse boundaries, so their fraction halves per octave:
  // about 7.9% at R = 64, 3.9% at 128, 2.0% at 256.
  double previous = 1.0;
  for (std::size_t R : {64u, 128u, 256u}) {
    const auto coarse = shepp_logan(Shape{R, R});
    const auto fine = shepp_logan(Shape{2 * R, 2 * R});
    std::size_t differ = 0;
    for (std::size_t r = 0; r < R; ++r)
      for (std::size_t c = 0; c < R; ++c) {
        const Complex avg = 0.25 * (fine.at(2 * r, 2 * c) + fine.at(2 * r + 1, 2 * c) + fine.at(2 * r, 2 * c + 1) +
                                    fine.at(2 * r + 1, 2 * c + 1));
        differ += std::abs(avg - coarse.at(r, c)) > 1e-12;
      }
    const double frac = static_cast<double>(differ) / static_cast<double>(R * R);
    if (R >= 128) CHECK(frac < 0.05);
    CHECK(frac < 0.6 * previous);
    CHECK(frac * static_cast<double>(R) < 6.0);
    previous = frac;
  }
}

TEST_CASE("ground truth pair") {
  ComplexImage flat(Shape{8, 8});
  for (auto& v : flat.data) v = 0.5;
  const auto [x, z] = ground_truth_pair(flat);
  std::size_t nz = 0;
  for (const auto& v : z) nz += std::abs(v) > 1e-12;
  CHECK(nz == 1);

  const auto img = shepp_logan(Shape{64, 64});
  const auto [x0, z0] = ground_truth_pair(img);
  CHECK(x0 == img.data);
  CHECK(std::abs(norm2(x0) - norm2(z0)) < 1e-12 * norm2(x0));
  CHECK(max_abs_diff(haar2d_adjoint(ComplexImage(img.shape, z0)).data, x0) < 1e-12);
  // Edge-limited: the significant fraction is about 0.31 at 64x64 with the
  // separable transform and drops below 0.25 from 128x128 on.
  auto significant = [](const ComplexVector& z) {
    std::size_t big = 0;
    for (const auto& v : z) big += std::abs(v) > 1e-8;
    return static_cast<double>(big) / static_cast<double>(z.size());
  };
  const double s64 = significant(z0);
  CHECK(s64 < 0.35);
  const double s128 = significant(ground_truth_pair(shepp_logan(Shape{128, 128})).second);
  CHECK(s128 < 0.25);
  CHECK(s128 < s64);
}

TEST_CASE("ellipse table text round trip") {
  const auto dir = scratch_dir();
  const auto table = modified_shepp_logan_table();
  {
    std::ofstream out(dir / "t.txt");
    out << format_ellipse_table(table) << "\n# trailing comment\n";
  }
  const auto back = read_ellipse_table(dir / "t.txt");
  REQUIRE(back.size() == table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    CHECK(back[i].intensity == table[i].intensity);
    CHECK(back[i].cx == table[i].cx);
    CHECK(back[i].cy == table[i].cy);
    CHECK(back[i].a == table[i].a);
    CHECK(back[i].b == table[i].b);
    CHECK(back[i].angle_deg == table[i].angle_deg);
  }
  CHECK(rasterize(Shape{32, 32}, back).data == shepp_logan(Shape{32, 32}).data);

  {
    std::ofstream out(dir / "bad.txt");
    out << "1 0 0 0.5\n";
  }
  CHECK_THROWS_AS(read_ellipse_table(dir / "bad.txt"), Error);
  {
    std::ofstream out(dir / "neg.txt");
    out << "1 0 0 -0.5 0.5 0\n";
  }
  CHECK_THROWS_AS(read_ellipse_table(dir / "neg.txt"), Error);
  CHECK_THROWS_AS(read_ellipse_table(dir / "missing.txt"), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("image dumps") {
  const auto dir = scratch_dir();
  ComplexImage img(Shape{4, 8}, random_vector(32, 9));
  write_raw_image(dir / "a.raw", img);
  const auto back = read_raw_image(dir / "a.raw");
  CHECK(back.shape == img.shape);
  CHECK(back.data == img.data);
  CHECK(std::filesystem::file_size(dir / "a.raw") == 8 + 16 + 32 * 16);

  const auto ph = shepp_logan(Shape{16, 32});
  write_pgm(dir / "p.pgm", ph);
  std::ifstream in(dir / "p.pgm", std::ios::binary);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string header = "P5\n32 16\n255\n";
  REQUIRE(bytes.size() == header.size() + 512);
  CHECK(bytes.substr(0, header.size()) == header);
  CHECK(static_cast<unsigned char>(bytes[header.size()]) == 0);  // background corner maps to the minimum

  {
    std::ofstream bad(dir / "bad.raw", std::ios::binary);
    bad << "NOTANIMG";
  }
  CHECK_THROWS_AS(read_raw_image(dir / "bad.raw"), Error);
  std::filesystem::remove_all(dir);
}
