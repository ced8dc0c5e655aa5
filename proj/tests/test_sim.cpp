// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 vradar contributors

#include <doctest.h>

#include <cmath>
#include <cstring>

#include "oracles.hpp"
#include "vradar/errors.hpp"
#include "vradar/sim.hpp"

using namespace vradar;
using vradar::test::short_config;

namespace {

Scene single_scatterer(double range, double azimuth_deg, double radial_velocity,
                       double reflectivity = 1.0) {
  const double az = azimuth_deg * M_PI / 180.0;
  Scene s;
  Scatterer sc;
  sc.position = {range * std::cos(az), range * std::sin(az), 0.0};
  sc.velocity = {radial_velocity * std::cos(az), radial_velocity * std::sin(az), 0.0};
  sc.reflectivity = reflectivity;
  s.scatterers.push_back(sc);
  return s;
}

double cube_energy(const DataCube& cube) {
  double e = 0.0;
  for (const auto& s : cube.samples) e += std::norm(std::complex<double>(s.real(), s.imag()));
  return e;
}

}  // namespace

TEST_CASE("empty scene with zero noise gives an all-zero cube") {
  const auto cube = synthesize_cube(Scene{}, SensorPose{}, short_config(), ArrayGeometry{}, 0.0, 1);
  for (const auto& s : cube.samples) {
    CHECK(s.real() == 0.0f);
    CHECK(s.imag() == 0.0f);
  }
}

TEST_CASE("static boresight target with one TX repeats identically over chirps and antennas") {
  auto cfg = short_config();
  cfg.n_tx = 1;
  ArrayGeometry geom;
  geom.tx_positions_lambda = {0.0};
  const auto scene = single_scatterer(20.0, 0.0, 0.0);
  const auto cube = synthesize_cube(scene, SensorPose{}, cfg, geom, 0.0, 1);

  const std::complex<float>* ref = cube.samples.data();
  for (std::size_t k = 0; k < cfg.n_chirps; ++k) {
    for (std::size_t rx = 0; rx < cfg.n_rx; ++rx) {
      const std::complex<float>* slice = cube.samples.data() + cube.index(k, rx, 0);
      CHECK(std::memcmp(slice, ref, cfg.n_samples * sizeof(std::complex<float>)) == 0);
    }
  }
}

TEST_CASE("cube matches a direct per-sample evaluation of the phase model") {
  const auto cfg = short_config();
  const ArrayGeometry geom;
  const double range = 20.48, az_deg = 25.0, v_r = 2.0;
  const auto cube =
      synthesize_cube(single_scatterer(range, az_deg, v_r), SensorPose{}, cfg, geom, 0.0, 1);

  auto reference = make_cube(cfg);
  vradar::test::add_scatterer_reference(reference, geom, range, v_r, az_deg * M_PI / 180.0, 1.0);

  float max_diff = 0.0f, max_mag = 0.0f;
  for (std::size_t i = 0; i < cube.samples.size(); ++i) {
    max_diff = std::max(max_diff, std::abs(cube.samples[i] - reference.samples[i]));
    max_mag = std::max(max_mag, std::abs(reference.samples[i]));
  }
  REQUIRE(max_mag > 0.0f);
  CHECK(max_diff <= 1e-6f * max_mag * 10);  // float storage, double accumulation

  // fast-time spectrum peaks at the bin nearest 2 R B / (c T_sweep) / fs * n
  std::vector<std::complex<double>> slice(cfg.n_samples);
  for (std::size_t n = 0; n < cfg.n_samples; ++n) {
    slice[n] = std::complex<double>(cube.at(0, 0, n).real(), cube.at(0, 0, n).imag());
  }
  const auto spectrum = vradar::test::naive_dft(slice);
  std::size_t argmax = 0;
  for (std::size_t r = 1; r < cfg.n_samples / 2; ++r) {
    if (std::abs(spectrum[r]) > std::abs(spectrum[argmax])) argmax = r;
  }
  CHECK(argmax == static_cast<std::size_t>(std::llround(range / range_bin_m(cfg))));
}

TEST_CASE("fast-time peak lands at the expected bin for the default config at 50 m") {
  WaveformConfig cfg;  // defaults: 2048 samples, 0.08 m bins
  const ArrayGeometry geom;
  const auto cube = synthesize_cube(single_scatterer(50.0, 0.0, 0.0), SensorPose{}, cfg, geom, 0.0, 1);
  std::vector<std::complex<double>> slice(cfg.n_samples);
  for (std::size_t n = 0; n < cfg.n_samples; ++n) {
    slice[n] = std::complex<double>(cube.at(0, 0, n).real(), cube.at(0, 0, n).imag());
  }
  const auto spectrum = vradar::test::naive_dft(slice);
  std::size_t argmax = 0;
  for (std::size_t r = 1; r < cfg.n_samples / 2; ++r) {
    if (std::abs(spectrum[r]) > std::abs(spectrum[argmax])) argmax = r;
  }
  CHECK(argmax == static_cast<std::size_t>(std::llround(50.0 / range_bin_m(cfg))));
}

TEST_CASE("synthesis is linear in the scatterer set") {
  const auto cfg = short_config();
  const ArrayGeometry geom;
  Scene a = single_scatterer(12.0, -10.0, 1.0);
  Scene b = single_scatterer(25.0, 30.0, -2.0, 0.5);
  b.scatterers.push_back({{8.0, 1.0, 0.0}, {0.0, 0.0, 0.0}, 2.0});

  Scene both = a;
  for (const auto& sc : b.scatterers) both.scatterers.push_back(sc);

  const auto cube_a = synthesize_cube(a, SensorPose{}, cfg, geom, 0.0, 1);
  const auto cube_b = synthesize_cube(b, SensorPose{}, cfg, geom, 0.0, 1);
  const auto cube_ab = synthesize_cube(both, SensorPose{}, cfg, geom, 0.0, 1);

  float max_diff = 0.0f, max_mag = 0.0f;
  for (std::size_t i = 0; i < cube_ab.samples.size(); ++i) {
    const auto sum = cube_a.samples[i] + cube_b.samples[i];
    max_diff = std::max(max_diff, std::abs(cube_ab.samples[i] - sum));
    max_mag = std::max(max_mag, std::abs(cube_ab.samples[i]));
  }
  CHECK(max_diff <= 1e-6f * max_mag);
}

TEST_CASE("fixed seed reproduces the cube bit for bit") {
  const auto cfg = short_config();
  const auto scene = single_scatterer(15.0, 5.0, 1.0);
  const auto c1 = synthesize_cube(scene, SensorPose{}, cfg, ArrayGeometry{}, 0.05, 42);
  const auto c2 = synthesize_cube(scene, SensorPose{}, cfg, ArrayGeometry{}, 0.05, 42);
  CHECK(std::memcmp(c1.samples.data(), c2.samples.data(),
                    c1.samples.size() * sizeof(std::complex<float>)) == 0);
  const auto c3 = synthesize_cube(scene, SensorPose{}, cfg, ArrayGeometry{}, 0.05, 43);
  CHECK(std::memcmp(c1.samples.data(), c3.samples.data(),
                    c1.samples.size() * sizeof(std::complex<float>)) != 0);
}

TEST_CASE("signal energy follows reflectivity^2 / R^4") {
  const auto cfg = short_config();
  const auto e10 = cube_energy(
      synthesize_cube(single_scatterer(10.0, 0.0, 0.0), SensorPose{}, cfg, ArrayGeometry{}, 0.0, 1));
  const auto e20 = cube_energy(
      synthesize_cube(single_scatterer(20.0, 0.0, 0.0), SensorPose{}, cfg, ArrayGeometry{}, 0.0, 1));
  CHECK(e10 / e20 == doctest::Approx(16.0).epsilon(1e-6));

  const auto e10r2 = cube_energy(synthesize_cube(single_scatterer(10.0, 0.0, 0.0, 2.0),
                                                 SensorPose{}, cfg, ArrayGeometry{}, 0.0, 1));
  CHECK(e10r2 / e10 == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("out-of-range and over-speed scatterers are rejected with diagnostics") {
  const auto cfg = short_config();  // max range 40.96 m, per-TX ambiguity 12.76 m/s
  SynthesisStats stats;

  auto cube = synthesize_cube(single_scatterer(50.0, 0.0, 0.0), SensorPose{}, cfg, ArrayGeometry{},
                              0.0, 1, false, &stats);
  CHECK(stats.rejected_range == 1);
  CHECK(stats.contributing == 0);
  CHECK(cube_energy(cube) == 0.0);

  cube = synthesize_cube(single_scatterer(20.0, 0.0, 15.0), SensorPose{}, cfg, ArrayGeometry{},
                         0.0, 1, false, &stats);
  CHECK(stats.rejected_velocity == 1);
  CHECK(cube_energy(cube) == 0.0);

  cube = synthesize_cube(single_scatterer(20.0, 0.0, 15.0), SensorPose{}, cfg, ArrayGeometry{},
                         0.0, 1, true, &stats);
  CHECK(stats.contributing == 1);
  CHECK(cube_energy(cube) > 0.0);
}

// ---------------------------------------------------------------------------
// lidar

namespace {

Scene wall_scene(double distance, double half_angle_deg, double height = 2.0) {
  const double half_y = distance * std::tan(half_angle_deg * M_PI / 180.0);
  Scene s;
  s.extended_targets.push_back({{{distance, -half_y}, {distance, half_y}}, height, 2.0});
  return s;
}

LidarSpec planar_lidar(double step_deg) {
  LidarSpec spec;
  spec.azimuth_step_deg = step_deg;
  spec.elevation_rays = 1;
  spec.range_noise_sigma_m = 0.0;
  return spec;
}

}  // namespace

TEST_CASE("wall at 10 m spanning +-10 degrees returns exactly 101 points at 0.2 deg steps") {
  // wall made marginally wider than +-10 deg so the boundary rays are robust hits
  const auto scene = wall_scene(10.0, 10.05);
  const auto cloud = simulate_lidar(scene, SensorPose{}, planar_lidar(0.2), 1);
  CHECK(cloud.points.size() == 101);

  // halving the step doubles the hit count up to edge effects
  const auto dense = simulate_lidar(scene, SensorPose{}, planar_lidar(0.1), 1);
  CHECK(dense.points.size() >= 2 * 101 - 1);
  CHECK(dense.points.size() <= 2 * 101 + 1);
}

TEST_CASE("empty scene gives an empty cloud") {
  const auto cloud = simulate_lidar(Scene{}, SensorPose{}, planar_lidar(0.2), 1);
  CHECK(cloud.points.empty());
}

TEST_CASE("noise-free lidar points lie exactly on the wall") {
  const auto scene = wall_scene(12.0, 30.0);
  const auto cloud = simulate_lidar(scene, SensorPose{}, planar_lidar(0.5), 1);
  REQUIRE(!cloud.points.empty());
  for (const auto& p : cloud.points) {
    CHECK(std::abs(p.x - 12.0) < 1e-9);  // wall plane x = 12
  }
}

TEST_CASE("lidar respects max range") {
  const auto scene = wall_scene(150.0, 20.0);
  auto spec = planar_lidar(0.2);
  spec.max_range_m = 100.0;
  CHECK(simulate_lidar(scene, SensorPose{}, spec, 1).points.empty());
}

TEST_CASE("scatterer discs are hit only by rays passing close enough") {
  Scene s;
  s.scatterers.push_back({{10.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, 1.0});
  // rays at 0, +-0.2 deg pass within the 5 cm disc at 10 m (offsets 0 and 3.5 cm)
  const auto cloud = simulate_lidar(s, SensorPose{}, planar_lidar(0.2), 1);
  REQUIRE(cloud.points.size() == 3);
  for (const auto& p : cloud.points) CHECK(p.range_m == doctest::Approx(10.0).epsilon(1e-4));

  Scene high;
  high.scatterers.push_back({{10.0, 0.0, 1.0}, {0.0, 0.0, 0.0}, 1.0});
  CHECK(simulate_lidar(high, SensorPose{}, planar_lidar(0.2), 1).points.empty());
}

TEST_CASE("elevation fan hits a wall once per ray that intersects its height band") {
  const auto scene = wall_scene(10.0, 10.0, 2.0);
  LidarSpec spec;
  spec.azimuth_step_deg = 1.0;
  spec.elevation_rays = 16;  // -15..15 deg, 2 deg apart
  spec.range_noise_sigma_m = 0.0;
  SensorPose pose;
  pose.z = 1.0;  // wall band is z in [-1, 1] sensor frame; |tan(e)| <= 0.1 qualifies
  const auto cloud = simulate_lidar(scene, pose, spec, 1);
  std::size_t boresight_hits = 0;
  for (const auto& p : cloud.points) {
    if (std::abs(p.azimuth_deg) < 1e-9) ++boresight_hits;
  }
  CHECK(boresight_hits == 6);
}

TEST_CASE("lidar is deterministic per seed") {
  const auto scene = wall_scene(15.0, 25.0);
  LidarSpec spec = planar_lidar(0.4);
  spec.range_noise_sigma_m = 0.05;
  const auto a = simulate_lidar(scene, SensorPose{}, spec, 9);
  const auto b = simulate_lidar(scene, SensorPose{}, spec, 9);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].x == b.points[i].x);
    CHECK(a.points[i].range_m == b.points[i].range_m);
  }
}
