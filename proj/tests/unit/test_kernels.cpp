#include <doctest.h>
#include <omp.h>

#include <cmath>

#include "oracles.hpp"
#include "rwuq/coherence.hpp"
#include "rwuq/kernels/kernels.hpp"
#include "rwuq/sampling.hpp"

using namespace rwuq;
using namespace rwuq::testing;

TEST_CASE("fourier and system rows against dense oracles") {
  const Shape s{4, 8};
  const DenseSquare F = kron(dense_dft(4), dense_dft(8));
  const DenseSquare A = dense_fourier_haar(s);
  ComplexVector row(32), scratch(8);
  for (std::size_t j = 0; j < 32; ++j) {
    kernels::fourier_row(s, j, row);
    for (std::size_t l = 0; l < 32; ++l) CHECK(std::abs(row[l] - F(j, l)) < 1e-13);
    kernels::system_row(s, j, Domain::haar, row, scratch);
    for (std::size_t i = 0; i < 32; ++i) CHECK(std::abs(row[i] - A(j, i)) < 1e-13);
    kernels::system_row(s, j, Domain::image, row, scratch);
    for (std::size_t l = 0; l < 32; ++l) CHECK(std::abs(row[l] - F(j, l)) < 1e-13);
  }
}

TEST_CASE("serial and parallel kernels agree bitwise for any thread count") {
  const int before = omp_get_max_threads();
  for (Shape s : {Shape{8, 8}, Shape{16, 32}, Shape::line(64)}) {
    const auto ref = kernels::serial::local_coherence(s);
    const auto nu = local_coherence(s).nu;
    const auto p = sample_reweighted(nu, s.size() / 3, 5);
    RealVector coeff(p.m());
    for (std::size_t t = 0; t < coeff.size(); ++t) coeff[t] = 0.5 + static_cast<double>(p.gamma[t]);
    RealVector energy_first;
    for (int threads : {1, 2, 4}) {
      omp_set_num_threads(threads);
      CHECK(kernels::parallel::local_coherence(s) == ref);
      for (Domain d : {Domain::haar, Domain::image}) {
        const auto par = kernels::parallel::weighted_row_energy(s, p.omega, coeff, d);
        const auto ser = kernels::serial::weighted_row_energy(s, p.omega, coeff, d);
        REQUIRE(par.size() == ser.size());
        for (std::size_t i = 0; i < par.size(); ++i) CHECK(std::abs(par[i] - ser[i]) <= 1e-13 * (1 + std::abs(ser[i])));
        if (d == Domain::haar) {
          if (energy_first.empty()) energy_first = par;
          CHECK(par == energy_first);  // independent of the thread count
        }
      }
    }
  }
  omp_set_num_threads(before);
}
