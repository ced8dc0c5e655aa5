// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 vradar contributors

#pragma once

#include <complex>
#include <span>
#include <vector>

namespace vradar {

enum class Window { rect, hann };

/// Symmetric window of length n with unit peak.
std::vector<double> make_window(std::size_t n, Window window);

/// Forward DFT, out = F(in). in and out must have equal size and not alias.
void fft_forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);

/// Windowed forward DFT scaled by 1/sum(window): a full-scale complex sinusoid
/// at a bin center maps to a unit-magnitude (0 dBFS) peak.
std::vector<std::complex<double>> windowed_spectrum(std::span<const std::complex<double>> x,
                                                    Window window);

}  // namespace vradar
