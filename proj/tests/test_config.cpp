// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 vradar contributors

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "helpers.hpp"
#include "vradar/config.hpp"
#include "vradar/errors.hpp"

using namespace vradar;

namespace {

bool has_code(const std::vector<Violation>& vs, const std::string& code) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.code == code; });
}

}  // namespace

TEST_CASE("default config validates and yields the 12-element lambda/2 virtual ULA") {
  WaveformConfig cfg;
  ArrayGeometry geom;
  CHECK(validate(cfg, geom).empty());

  auto virt = geom.virtual_positions();
  REQUIRE(virt.size() == 12);
  std::sort(virt.begin(), virt.end());
  for (std::size_t i = 1; i < virt.size(); ++i) {
    CHECK(virt[i] - virt[i - 1] == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("ddma divisibility check") {
  WaveformConfig cfg;
  ArrayGeometry geom;
  cfg.n_chirps = 192;
  cfg.n_tx = 3;
  CHECK(validate(cfg, geom).empty());

  cfg.n_chirps = 128;
  CHECK(has_code(validate(cfg, geom), "ddma_divisibility"));
}

TEST_CASE("sampling window must fit inside the chirp") {
  WaveformConfig cfg;
  ArrayGeometry geom;
  cfg.n_samples = 1024;
  cfg.sample_rate_hz = 10e6;   // 102.4 us window
  cfg.chirp_duration_s = 50e-6;
  CHECK(has_code(validate(cfg, geom), "sampling_exceeds_chirp"));
}

TEST_CASE("geometry violations are reported") {
  WaveformConfig cfg;
  ArrayGeometry geom;
  geom.rx_positions_lambda = {0.0, 0.5};
  CHECK(has_code(validate(cfg, geom), "geometry_count_mismatch"));

  geom = ArrayGeometry{};
  geom.tx_positions_lambda = {0.0, 0.5, 4.0};  // tx1+rx0 collides with tx0+rx1
  CHECK(has_code(validate(cfg, geom), "virtual_positions_collide"));
}

TEST_CASE("range resolution hits the 0.08 m operating point") {
  WaveformConfig cfg;
  cfg.bandwidth_hz = 1.8735e9;
  const auto rep = derive_resolutions(cfg, ArrayGeometry{});
  CHECK(std::abs(rep.range_resolution_m - 0.08) < 1e-4);
  // exact formula inversion
  CHECK(std::abs(rep.range_resolution_m * 2.0 * cfg.bandwidth_hz - kSpeedOfLight) <
        1e-9 * kSpeedOfLight);
}

TEST_CASE("doubling bandwidth halves range resolution") {
  WaveformConfig cfg;
  const auto r1 = derive_resolutions(cfg, ArrayGeometry{});
  cfg.bandwidth_hz *= 2.0;
  const auto r2 = derive_resolutions(cfg, ArrayGeometry{});
  CHECK(r1.range_resolution_m / r2.range_resolution_m == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("velocity resolution at the 192-chirp / 102 us point") {
  WaveformConfig cfg;
  cfg.carrier_frequency_hz = 76.5e9;
  cfg.n_chirps = 192;
  cfg.chirp_duration_s = 102e-6;
  cfg.n_samples = 1024;
  cfg.sample_rate_hz = 20e6;  // 51.2 us window, fits
  const auto rep = derive_resolutions(cfg, ArrayGeometry{});

  // independent evaluation of lambda / (2 N T_c)
  const double lambda = kSpeedOfLight / 76.5e9;
  const double expected = lambda / (2.0 * 192.0 * 102e-6);
  CHECK(rep.velocity_resolution_mps == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(rep.velocity_resolution_mps - 0.100) < 1e-3);
}

TEST_CASE("derived figures are deterministic and positive") {
  WaveformConfig cfg;
  ArrayGeometry geom;
  const auto a = derive_resolutions(cfg, geom);
  const auto b = derive_resolutions(cfg, geom);
  CHECK(a.range_resolution_m == b.range_resolution_m);
  CHECK(a.max_range_m == b.max_range_m);
  CHECK(a.velocity_resolution_mps == b.velocity_resolution_mps);
  CHECK(a.max_unambiguous_velocity_per_tx_mps == b.max_unambiguous_velocity_per_tx_mps);
  CHECK(a.azimuth_beamwidth_deg == b.azimuth_beamwidth_deg);
  for (double v : {a.range_resolution_m, a.max_range_m, a.velocity_resolution_mps,
                   a.max_unambiguous_velocity_per_tx_mps, a.azimuth_beamwidth_deg}) {
    CHECK(v > 0.0);
  }
  // the per-TX ambiguity is the sub-band half-width in velocity units
  CHECK(a.max_unambiguous_velocity_per_tx_mps ==
        doctest::Approx(a.velocity_resolution_mps * 384.0 / 3.0 / 2.0).epsilon(1e-12));
}

TEST_CASE("derive_resolutions rejects invalid configs") {
  WaveformConfig cfg;
  cfg.n_chirps = 128;  // not divisible by 3
  CHECK_THROWS_AS(derive_resolutions(cfg, ArrayGeometry{}), ConfigError);
}

TEST_CASE("sensor config file round trip and strict keys") {
  vradar::test::TempDir dir("config");
  SensorConfig cfg;
  cfg.waveform.bandwidth_hz = 0.9e9;
  cfg.geometry.tx_positions_lambda = {0.0, 1.5, 3.0};
  save_sensor_config(cfg, dir.file("w.cfg"));
  const auto loaded = load_sensor_config(dir.file("w.cfg"));
  CHECK(loaded.waveform == cfg.waveform);
  CHECK(loaded.geometry == cfg.geometry);

  {
    std::ofstream bad(dir.file("bad.cfg"));
    bad << "bandwidth_hz = 1e9\nmystery_key = 3\n";
  }
  CHECK_THROWS_AS(load_sensor_config(dir.file("bad.cfg")), ConfigError);

  {
    std::ofstream dup(dir.file("dup.cfg"));
    dup << "n_tx = 3\nn_tx = 2\n";
  }
  CHECK_THROWS_AS(load_sensor_config(dir.file("dup.cfg")), ConfigError);
  CHECK_THROWS_AS(load_sensor_config(dir.file("missing.cfg")), IoError);
}
