// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 vradar contributors

#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "vradar/fft.hpp"

using namespace vradar;

namespace {

std::vector<std::complex<double>> random_signal(std::size_t n, unsigned seed) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<std::complex<double>> x(n);
  for (auto& v : x) v = {uni(eng), uni(eng)};
  return x;
}

double max_rel_error(const std::vector<std::complex<double>>& a,
                     const std::vector<std::complex<double>>& b) {
  double max_diff = 0.0, max_mag = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    max_diff = std::max(max_diff, std::abs(a[i] - b[i]));
    max_mag = std::max(max_mag, std::abs(b[i]));
  }
  return max_diff / std::max(max_mag, 1e-300);
}

}  // namespace

TEST_CASE("fft matches the naive DFT oracle on small sizes") {
  for (std::size_t n : {2u, 3u, 8u, 12u, 15u, 16u}) {
    const auto x = random_signal(n, 100 + static_cast<unsigned>(n));
    for (Window w : {Window::rect, Window::hann}) {
      const auto fast = windowed_spectrum(x, w);
      const auto slow = vradar::test::naive_windowed_spectrum(x, w);
      CHECK(max_rel_error(fast, slow) <= 1e-9);
    }
  }
}

TEST_CASE("full-scale sinusoid at a bin center peaks at 0 dBFS") {
  const std::size_t n = 64;
  const std::size_t bin = 9;
  std::vector<std::complex<double>> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ph = 2.0 * M_PI * static_cast<double>(bin) * static_cast<double>(i) /
                      static_cast<double>(n);
    x[i] = {std::cos(ph), std::sin(ph)};
  }
  const auto rect = windowed_spectrum(x, Window::rect);
  CHECK(std::abs(rect[bin]) == doctest::Approx(1.0).epsilon(1e-12));
  // hann normalization restores the 0 dBFS peak up to its leakage into +-1 bins
  const auto hann = windowed_spectrum(x, Window::hann);
  CHECK(std::abs(hann[bin]) == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("parseval holds per windowed stage") {
  for (Window window : {Window::rect, Window::hann}) {
    const std::size_t n = 96;
    const auto x = random_signal(n, 7);
    const auto w = make_window(n, window);
    double wsum = 0.0, time_energy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      wsum += w[i];
      time_energy += std::norm(x[i] * w[i]);
    }
    const auto spec = windowed_spectrum(x, window);
    double spec_energy = 0.0;
    for (const auto& v : spec) spec_energy += std::norm(v);
    // spectrum is scaled by 1/sum(w): undo it for the Parseval identity
    const double lhs = spec_energy * wsum * wsum / static_cast<double>(n);
    CHECK(std::abs(lhs - time_energy) <= 1e-6 * time_energy);
  }
}
