// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 vradar contributors

#include "vradar/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "text_util.hpp"
#include "vradar/errors.hpp"

namespace vradar {

std::vector<double> ArrayGeometry::virtual_positions() const {
  std::vector<double> virt;
  virt.reserve(tx_positions_lambda.size() * rx_positions_lambda.size());
  for (double tx : tx_positions_lambda) {
    for (double rx : rx_positions_lambda) virt.push_back(tx + rx);
  }
  return virt;
}

std::vector<Violation> validate(const WaveformConfig& c, const ArrayGeometry& g) {
  std::vector<Violation> v;
  auto add = [&v](const char* code, std::string msg) { v.push_back({code, std::move(msg)}); };

  if (!(c.bandwidth_hz > 0)) add("bandwidth_nonpositive", "bandwidth must be > 0");
  if (!(c.chirp_duration_s > 0)) add("chirp_duration_nonpositive", "chirp duration must be > 0");
  if (!(c.sample_rate_hz > 0)) add("sample_rate_nonpositive", "sample rate must be > 0");
  if (!(c.carrier_frequency_hz > 0)) add("carrier_nonpositive", "carrier frequency must be > 0");
  if (!(c.frame_rate_hz > 0)) add("frame_rate_nonpositive", "frame rate must be > 0");
  if (c.n_samples < 8) add("n_samples_too_small", "need at least 8 fast-time samples");
  if (c.n_tx < 1) add("n_tx_zero", "need at least one TX");
  if (c.n_rx < 1) add("n_rx_zero", "need at least one RX");
  if (c.n_chirps < c.n_tx) add("n_chirps_lt_n_tx", "need at least n_tx chirps per frame");
  if (c.n_tx >= 1 && c.n_chirps % c.n_tx != 0) {
    add("ddma_divisibility",
        "n_chirps (" + std::to_string(c.n_chirps) + ") must be a multiple of n_tx (" +
            std::to_string(c.n_tx) + ") for DDMA sub-band demux");
  }
  if (c.sample_rate_hz > 0 && c.chirp_duration_s > 0) {
    const double window_s = static_cast<double>(c.n_samples) / c.sample_rate_hz;
    if (window_s > c.chirp_duration_s * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "ADC window " << window_s * 1e6 << " us exceeds chirp duration "
          << c.chirp_duration_s * 1e6 << " us";
      add("sampling_exceeds_chirp", msg.str());
    }
    if (c.frame_rate_hz > 0 &&
        static_cast<double>(c.n_chirps) * c.chirp_duration_s > 1.0 / c.frame_rate_hz * (1.0 + 1e-12)) {
      add("frame_exceeds_period", "n_chirps * chirp_duration does not fit in the frame period");
    }
  }
  if (g.tx_positions_lambda.size() != c.n_tx || g.rx_positions_lambda.size() != c.n_rx) {
    add("geometry_count_mismatch", "tx/rx position counts must equal n_tx/n_rx");
  } else {
    auto virt = g.virtual_positions();
    std::sort(virt.begin(), virt.end());
    for (std::size_t i = 1; i < virt.size(); ++i) {
      if (std::abs(virt[i] - virt[i - 1]) < 1e-9) {
        add("virtual_positions_collide", "virtual element positions are not distinct");
        break;
      }
    }
  }
  return v;
}

double range_bin_m(const WaveformConfig& c) {
  return c.sample_rate_hz * kSpeedOfLight * c.chirp_duration_s /
         (2.0 * c.bandwidth_hz * static_cast<double>(c.n_samples));
}

ResolutionReport derive_resolutions(const WaveformConfig& c, const ArrayGeometry& g) {
  const auto violations = validate(c, g);
  if (!violations.empty()) {
    std::string codes;
    for (const auto& v : violations) codes += (codes.empty() ? "" : ", ") + v.code;
    throw ConfigError("invalid config: " + codes);
  }
  const double lambda = c.wavelength_m();
  ResolutionReport r;
  r.range_resolution_m = kSpeedOfLight / (2.0 * c.bandwidth_hz);
  // Positive-frequency half of the fast-time spectrum is what the pipeline keeps.
  r.max_range_m = static_cast<double>(c.n_samples / 2) * range_bin_m(c);
  r.velocity_resolution_mps =
      lambda / (2.0 * static_cast<double>(c.n_chirps) * c.chirp_duration_s);
  r.max_unambiguous_velocity_per_tx_mps =
      lambda / (4.0 * c.chirp_duration_s * static_cast<double>(c.n_tx));
  const double n_virtual = static_cast<double>(c.n_tx * c.n_rx);
  r.azimuth_beamwidth_deg = (2.0 / n_virtual) * 180.0 / 3.14159265358979323846;
  return r;
}

namespace {

std::vector<double> parse_double_list(const std::string& value, const std::string& key) {
  std::vector<double> out;
  for (const auto& tok : detail::split(value, ',')) {
    out.push_back(detail::parse_double(tok, key));
  }
  return out;
}

}  // namespace

SensorConfig load_sensor_config(const std::string& path) {
  const auto kvs = detail::parse_key_values(detail::read_lines(path), path);
  SensorConfig cfg;
  std::set<std::string> seen;
  for (const auto& kv : kvs) {
    if (!seen.insert(kv.key).second) {
      throw ConfigError(path + ":" + std::to_string(kv.line_no) + ": duplicate key '" + kv.key + "'");
    }
    auto& w = cfg.waveform;
    if (kv.key == "carrier_frequency_hz") w.carrier_frequency_hz = detail::parse_double(kv.value, kv.key);
    else if (kv.key == "bandwidth_hz") w.bandwidth_hz = detail::parse_double(kv.value, kv.key);
    else if (kv.key == "chirp_duration_s") w.chirp_duration_s = detail::parse_double(kv.value, kv.key);
    else if (kv.key == "n_samples") w.n_samples = static_cast<std::size_t>(detail::parse_int(kv.value, kv.key));
    else if (kv.key == "sample_rate_hz") w.sample_rate_hz = detail::parse_double(kv.value, kv.key);
    else if (kv.key == "n_chirps") w.n_chirps = static_cast<std::size_t>(detail::parse_int(kv.value, kv.key));
    else if (kv.key == "n_tx") w.n_tx = static_cast<std::size_t>(detail::parse_int(kv.value, kv.key));
    else if (kv.key == "n_rx") w.n_rx = static_cast<std::size_t>(detail::parse_int(kv.value, kv.key));
    else if (kv.key == "frame_rate_hz") w.frame_rate_hz = detail::parse_double(kv.value, kv.key);
    else if (kv.key == "tx_positions_lambda") cfg.geometry.tx_positions_lambda = parse_double_list(kv.value, kv.key);
    else if (kv.key == "rx_positions_lambda") cfg.geometry.rx_positions_lambda = parse_double_list(kv.value, kv.key);
    else {
      throw ConfigError(path + ":" + std::to_string(kv.line_no) + ": unknown key '" + kv.key + "'");
    }
  }
  return cfg;
}

void save_sensor_config(const SensorConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  const auto& w = cfg.waveform;
  out.precision(17);
  out << "carrier_frequency_hz = " << w.carrier_frequency_hz << "\n"
      << "bandwidth_hz = " << w.bandwidth_hz << "\n"
      << "chirp_duration_s = " << w.chirp_duration_s << "\n"
      << "n_samples = " << w.n_samples << "\n"
      << "sample_rate_hz = " << w.sample_rate_hz << "\n"
      << "n_chirps = " << w.n_chirps << "\n"
      << "n_tx = " << w.n_tx << "\n"
      << "n_rx = " << w.n_rx << "\n"
      << "frame_rate_hz = " << w.frame_rate_hz << "\n";
  auto write_list = [&out](const char* key, const std::vector<double>& xs) {
    out << key << " = ";
    for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? "," : "") << xs[i];
    out << "\n";
  };
  write_list("tx_positions_lambda", cfg.geometry.tx_positions_lambda);
  write_list("rx_positions_lambda", cfg.geometry.rx_positions_lambda);
}

}  // namespace vradar
