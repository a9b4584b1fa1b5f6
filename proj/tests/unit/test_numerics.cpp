// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#include "oracles.hpp"
#include "proxmri/error.hpp"
#include "proxmri/fft.hpp"
#include "proxmri/linalg.hpp"
#include "proxmri/rng.hpp"
#include "proxmri/wavelet.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

using namespace proxmri;
using proxmri::testing::max_abs_diff;
using proxmri::testing::random_image;

TEST_CASE("fft2_centered maps a centre impulse to a flat 0.25 grid")
{
  ComplexImage x(4, 4);
  x(2, 2) = 1.0;
  auto const k = fft2_centered(x);
  for (auto const &z : k.data()) {
    CHECK(z.real() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(std::abs(z.imag()) < 1e-15);
  }
}

TEST_CASE("ifft2_centered maps a constant to a scaled centre impulse")
{
  Cx const c(0.7, -0.2);
  ComplexImage x(8, 4, std::vector<Cx>(32, c));
  auto const img = ifft2_centered(x);
  for (int r = 0; r < 8; ++r) {
    for (int col = 0; col < 4; ++col) {
      Cx const expect = (r == 4 && col == 2) ? c * std::sqrt(32.0) : Cx{};
      CHECK(std::abs(img(r, col) - expect) < 1e-12);
    }
  }
}

TEST_CASE("centered FFT matches direct DFT summation")
{
  auto const x = random_image(8, 8, 11);
  CHECK(max_abs_diff(fft2_centered(x), testing::dft2_centered_direct(x, -1)) < 1e-10);
  CHECK(max_abs_diff(ifft2_centered(x), testing::dft2_centered_direct(x, +1)) < 1e-10);

  auto const rect = random_image(4, 16, 12);
  CHECK(max_abs_diff(fft2_centered(rect), testing::dft2_centered_direct(rect, -1)) < 1e-10);
}

TEST_CASE("centered FFT is unitary and self-inverse")
{
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto const x = random_image(32, 64, seed);
    auto const y = random_image(32, 64, seed + 100);
    auto const fx = fft2_centered(x);
    CHECK(std::abs(norm2(fx) - norm2(x)) < 1e-12 * norm2(x));
    CHECK(max_abs_diff(ifft2_centered(fx), x) < 1e-12);
    Cx const lhs = inner(fx, y);
    Cx const rhs = inner(x, ifft2_centered(y));
    CHECK(std::abs(lhs - rhs) < 1e-12 * norm2(x) * norm2(y));
  }
}

TEST_CASE("non-power-of-two grids are rejected")
{
  CHECK_THROWS_AS(ComplexImage(6, 8), DimensionError);
  CHECK_THROWS_AS(ComplexImage(8, 12), DimensionError);
}

TEST_CASE("Haar transform of a constant image has empty detail bands")
{
  ComplexImage x(16, 16, std::vector<Cx>(256, Cx(0.3, 0.1)));
  auto const w = haar2_forward(x, 3);
  for (int l = 1; l <= 3; ++l) {
    for (auto band : {Band::Horizontal, Band::Vertical, Band::Diagonal}) {
      auto const d = w.detail(l, band);
      for (auto const &z : d.data()) { CHECK(z == Cx{}); }
    }
  }
}

TEST_CASE("one-level Haar on a 2x2 block matches the analysis matrix")
{
  Cx const a(1.0, 0.5), b(-2.0, 0.0), c(0.25, 3.0), d(4.0, -1.0);
  ComplexImage x(2, 2, {a, b, c, d});
  auto const w = haar2_forward(x, 1);
  // Rows of the orthonormal 2x2 Haar analysis matrix (kron of [1 1; 1 -1]/sqrt2).
  CHECK(std::abs(w.approximation()(0, 0) - (a + b + c + d) / 2.0) < 1e-15);
  CHECK(std::abs(w.detail(1, Band::Horizontal)(0, 0) - (a + b - c - d) / 2.0) < 1e-15);
  CHECK(std::abs(w.detail(1, Band::Vertical)(0, 0) - (a - b + c - d) / 2.0) < 1e-15);
  CHECK(std::abs(w.detail(1, Band::Diagonal)(0, 0) - (a - b - c + d) / 2.0) < 1e-15);
}

TEST_CASE("Haar transform is orthonormal with perfect reconstruction")
{
  auto const x = random_image(64, 64, 5);
  for (int levels : {1, 3, 6}) {
    auto const w = haar2_forward(x, levels);
    CHECK(std::abs(norm2(w.packed()) - norm2(x)) < 1e-12 * norm2(x));
    CHECK(max_abs_diff(haar2_inverse(w), x) < 1e-12 * norm2(x));
  }
  auto const rect = random_image(16, 64, 6);
  CHECK(max_abs_diff(haar2_inverse(haar2_forward(rect, 4)), rect) < 1e-12 * norm2(rect));
}

TEST_CASE("Haar level count is bounded by the smaller side")
{
  ComplexImage x(16, 64);
  CHECK_NOTHROW(haar2_forward(x, 4));
  CHECK_THROWS_AS(haar2_forward(x, 5), DimensionError);
}

TEST_CASE("soft threshold closed form")
{
  CHECK(std::abs(soft_threshold(Cx(0.5, 0.0), 0.2) - Cx(0.3, 0.0)) < 1e-15);
  CHECK(soft_threshold(Cx(0.1, 0.1), 0.2) == Cx{});
  CHECK(soft_threshold(Cx(0.0, 0.0), 0.0) == Cx{});
  auto const shrunk = soft_threshold(Cx(3.0, 4.0), 1.0);
  CHECK(std::abs(shrunk - Cx(2.4, 3.2)) < 1e-15);

  WaveletCoeffs w(0, ComplexImage(2, 2));
  CHECK_THROWS_AS(soft_threshold(w, -0.1), ParameterError);
}

TEST_CASE("soft threshold agrees with a brute-force scalar prox")
{
  double const tau = 0.25;
  for (double v : {-1.3, 0.07, 0.9}) {
    double best_u = 0.0;
    double best = 1e300;
    for (int i = 0; i <= 40000; ++i) {
      double const u = -2.0 + 1e-4 * i;
      double const f = 0.5 * (u - v) * (u - v) + tau * std::abs(u);
      if (f < best) {
        best = f;
        best_u = u;
      }
    }
    CHECK(soft_threshold(Cx(v, 0.0), tau).real() == doctest::Approx(best_u).epsilon(1e-3));
    CHECK(std::abs(soft_threshold(Cx(v, 0.0), tau).real() - best_u) <= 1e-4);
  }
}

TEST_CASE("soft threshold is non-expansive")
{
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    Cx const a(rng.normal(), rng.normal());
    Cx const b(rng.normal(), rng.normal());
    double const tau = rng.uniform(0.0, 2.0);
    CHECK(std::abs(soft_threshold(a, tau) - soft_threshold(b, tau)) <= std::abs(a - b) + 1e-15);
  }
}

TEST_CASE("spectral norm of simple maps")
{
  auto identity = [](ComplexImage const &x) { return x; };
  CHECK(spectral_norm_estimate(identity, 8, 8, 5, 1) == doctest::Approx(1.0).epsilon(1e-6));

  std::vector<double> diag(64, 0.0);
  for (int i = 0; i < 64; i += 3) { diag[i] = 1.0; }
  auto masked = [&](ComplexImage const &x) {
    ComplexImage y = x;
    for (std::size_t i = 0; i < y.size(); ++i) { y[i] *= diag[i]; }
    return y;
  };
  CHECK(spectral_norm_estimate(masked, 8, 8, 5, 1) == doctest::Approx(1.0).epsilon(1e-12));

  auto zero = [](ComplexImage const &x) { return ComplexImage(x.height(), x.width()); };
  CHECK(spectral_norm_estimate(zero, 8, 8, 3, 1) == 0.0);
}

TEST_CASE("spectral norm matches a dense Hermitian eigensolve")
{
  Rng rng(2024);
  Eigen::MatrixXcd b(64, 64);
  for (int i = 0; i < 64; ++i) {
    for (int j = 0; j < 64; ++j) {
      double const re = rng.normal();
      double const im = rng.normal();
      b(i, j) = Cx(re, im);
    }
  }
  Eigen::MatrixXcd const hmat = b.adjoint() * b;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(hmat);
  double const top = eig.eigenvalues().maxCoeff();

  auto apply = [&](ComplexImage const &x) {
    Eigen::VectorXcd const y = hmat * testing::to_vector(x);
    ComplexImage out(8, 8);
    for (int i = 0; i < 64; ++i) { out[static_cast<std::size_t>(i)] = y(i); }
    return out;
  };
  double const est = spectral_norm_estimate(apply, 8, 8, 100, 3);
  CHECK(std::abs(est - top) / top < 1e-3);

  // Power iteration estimates never decrease with more iterations.
  double prev = 0.0;
  for (int it = 1; it <= 20; ++it) {
    double const e = spectral_norm_estimate(apply, 8, 8, it, 3);
    CHECK(e >= prev * (1.0 - 1e-12));
    prev = e;
  }
}
