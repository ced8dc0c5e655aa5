// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 vradar contributors

#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace vradar {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Chirp/frame/antenna parameters of one FMCW sensor. The bandwidth is swept
/// over the full chirp repetition interval; the ADC window n_samples/sample_rate
/// must fit inside it. All derived resolutions come from these fields.
struct WaveformConfig {
  double carrier_frequency_hz = 76.5e9;
  double bandwidth_hz = 1.8735e9;
  double chirp_duration_s = 51.2e-6;
  std::size_t n_samples = 2048;
  double sample_rate_hz = 40.0e6;
  std::size_t n_chirps = 384;
  std::size_t n_tx = 3;
  std::size_t n_rx = 4;
  double frame_rate_hz = 20.0;

  double wavelength_m() const { return kSpeedOfLight / carrier_frequency_hz; }
  double frame_period_s() const { return 1.0 / frame_rate_hz; }
  bool operator==(const WaveformConfig&) const = default;
};

/// TX/RX lateral element offsets in wavelength units. The virtual array is the
/// set of all pairwise sums (TX-major order). Defaults give a 12-element
/// half-wavelength uniform linear array.
struct ArrayGeometry {
  std::vector<double> tx_positions_lambda{0.0, 2.0, 4.0};
  std::vector<double> rx_positions_lambda{0.0, 0.5, 1.0, 1.5};

  std::vector<double> virtual_positions() const;
  bool operator==(const ArrayGeometry&) const = default;
};

struct ResolutionReport {
  double range_resolution_m = 0.0;
  double max_range_m = 0.0;
  double velocity_resolution_mps = 0.0;
  double max_unambiguous_velocity_per_tx_mps = 0.0;
  double azimuth_beamwidth_deg = 0.0;
};

/// One violated configuration invariant. `code` is stable and machine readable.
struct Violation {
  std::string code;
  std::string message;
};

/// Checks every config/geometry invariant; empty result means the pair is valid.
std::vector<Violation> validate(const WaveformConfig& config, const ArrayGeometry& geometry);

/// Resolution and ambiguity figures for a validated config. Throws ConfigError
/// (listing the violation codes) when validate() does not pass.
ResolutionReport derive_resolutions(const WaveformConfig& config, const ArrayGeometry& geometry);

/// Range covered by one fast-time FFT bin. Equals range resolution when the ADC
/// window spans the whole sweep, coarser when it covers only part of it.
double range_bin_m(const WaveformConfig& config);

struct SensorConfig {
  WaveformConfig waveform;
  ArrayGeometry geometry;
};

/// Plain-text `key = value` config file. Recognized keys: carrier_frequency_hz,
/// bandwidth_hz, chirp_duration_s, n_samples, sample_rate_hz, n_chirps, n_tx,
/// n_rx, frame_rate_hz, tx_positions_lambda, rx_positions_lambda (comma lists).
/// Unknown keys are a hard error.
SensorConfig load_sensor_config(const std::string& path);
void save_sensor_config(const SensorConfig& config, const std::string& path);

}  // namespace vradar
