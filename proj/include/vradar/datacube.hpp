// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 vradar contributors

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "vradar/config.hpp"

namespace vradar {

/// One frame of raw complex baseband samples, indexed [chirp][rx][sample]
/// (slow-time, antenna, fast-time). Dimensions always match the config.
struct DataCube {
  WaveformConfig config;
  std::uint16_t sensor_id = 0;
  std::uint32_t frame = 0;  // in-memory only, not serialized
  double timestamp_s = 0.0;
  std::vector<std::complex<float>> samples;

  std::size_t sample_count() const { return config.n_chirps * config.n_rx * config.n_samples; }

  std::size_t index(std::size_t chirp, std::size_t rx, std::size_t sample) const {
    return (chirp * config.n_rx + rx) * config.n_samples + sample;
  }
  std::complex<float>& at(std::size_t chirp, std::size_t rx, std::size_t sample) {
    return samples[index(chirp, rx, sample)];
  }
  const std::complex<float>& at(std::size_t chirp, std::size_t rx, std::size_t sample) const {
    return samples[index(chirp, rx, sample)];
  }
};

/// Zero-filled cube with dimensions taken from the config.
DataCube make_cube(const WaveformConfig& config, std::uint16_t sensor_id = 0,
                   double timestamp_s = 0.0);

}  // namespace vradar
