// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 vradar contributors

#include "vradar/sim.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <set>

#include "text_util.hpp"
#include "vradar/errors.hpp"
#include "vradar/rng.hpp"

namespace vradar {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDegToRad = kPi / 180.0;

struct Frame2d {
  double cos_yaw, sin_yaw;
  Vec3 origin;

  // vessel frame -> sensor frame
  Vec3 to_sensor(const Vec3& p) const {
    const double dx = p.x - origin.x, dy = p.y - origin.y, dz = p.z - origin.z;
    return {cos_yaw * dx + sin_yaw * dy, -sin_yaw * dx + cos_yaw * dy, dz};
  }
  Vec3 rotate_to_sensor(const Vec3& v) const {
    return {cos_yaw * v.x + sin_yaw * v.y, -sin_yaw * v.x + cos_yaw * v.y, v.z};
  }
};

Frame2d make_frame(const SensorPose& pose) {
  const double yaw = pose.yaw_deg * kDegToRad;
  return {std::cos(yaw), std::sin(yaw), {pose.x, pose.y, pose.z}};
}

}  // namespace

DataCube make_cube(const WaveformConfig& config, std::uint16_t sensor_id, double timestamp_s) {
  DataCube cube;
  cube.config = config;
  cube.sensor_id = sensor_id;
  cube.timestamp_s = timestamp_s;
  cube.samples.assign(config.n_chirps * config.n_rx * config.n_samples, {0.0f, 0.0f});
  return cube;
}

DataCube synthesize_cube(const Scene& scene, const SensorPose& pose,
                         const WaveformConfig& config, const ArrayGeometry& geometry,
                         double noise_sigma, std::uint64_t seed, bool allow_aliasing,
                         SynthesisStats* stats) {
  {
    const auto violations = validate(config, geometry);
    if (!violations.empty()) {
      std::string codes;
      for (const auto& v : violations) codes += (codes.empty() ? "" : ", ") + v.code;
      throw ConfigError("synthesize_cube: invalid config: " + codes);
    }
  }
  validate_scene(scene);

  const std::size_t n_samples = config.n_samples;
  const std::size_t n_chirps = config.n_chirps;
  const std::size_t n_rx = config.n_rx;
  const std::size_t n_tx = config.n_tx;
  const double lambda = config.wavelength_m();
  const double bin_m = range_bin_m(config);
  const double max_range = static_cast<double>(n_samples / 2) * bin_m;
  const double max_v_per_tx = lambda / (4.0 * config.chirp_duration_s * static_cast<double>(n_tx));

  DataCube cube = make_cube(config, 0, scene.timestamp_s);
  std::vector<std::complex<double>> acc(cube.samples.size(), {0.0, 0.0});

  const Frame2d frame = make_frame(pose);
  SynthesisStats local;

  std::vector<std::complex<double>> fast(n_samples);
  std::vector<std::complex<double>> slow(n_chirps);  // per-RX combined TX tones

  for (const auto& sc : radar_scatterers(scene)) {
    const Vec3 rel = frame.to_sensor(sc.position);
    const Vec3 vel = frame.rotate_to_sensor(sc.velocity);
    const double range = std::sqrt(rel.x * rel.x + rel.y * rel.y + rel.z * rel.z);
    if (range < 1e-6) continue;
    const double v_r = (vel.x * rel.x + vel.y * rel.y + vel.z * rel.z) / range;
    const double sin_az = rel.y / std::max(std::hypot(rel.x, rel.y), 1e-12);

    if (range >= max_range && !allow_aliasing) {
      ++local.rejected_range;
      continue;
    }
    if (std::abs(v_r) > max_v_per_tx && !allow_aliasing) {
      ++local.rejected_velocity;
      continue;
    }
    ++local.contributing;

    const double amplitude = sc.reflectivity / (range * range);
    // beat tone: phase 2*pi * (2*R*B/(c*T_sweep)) * n/fs
    const double fast_cycles =
        2.0 * range * config.bandwidth_hz /
        (kSpeedOfLight * config.chirp_duration_s * config.sample_rate_hz);
    for (std::size_t n = 0; n < n_samples; ++n) {
      fast[n] = std::polar(amplitude, 2.0 * kPi * fast_cycles * static_cast<double>(n));
    }
    // Doppler tone per chirp: 2*v_r/lambda * T_c cycles/chirp, plus the DDMA
    // code i/n_tx cycles/chirp and the virtual-array phase per (tx, rx).
    const double doppler_cycles = 2.0 * v_r * config.chirp_duration_s / lambda;
    for (std::size_t rx = 0; rx < n_rx; ++rx) {
      for (std::size_t k = 0; k < n_chirps; ++k) slow[k] = {0.0, 0.0};
      for (std::size_t tx = 0; tx < n_tx; ++tx) {
        const double d_virtual =
            geometry.tx_positions_lambda[tx] + geometry.rx_positions_lambda[rx];
        const double array_phase = 2.0 * kPi * d_virtual * sin_az;
        const double cycles_per_chirp =
            doppler_cycles + static_cast<double>(tx) / static_cast<double>(n_tx);
        for (std::size_t k = 0; k < n_chirps; ++k) {
          slow[k] += std::polar(
              1.0, 2.0 * kPi * cycles_per_chirp * static_cast<double>(k) + array_phase);
        }
      }
      for (std::size_t k = 0; k < n_chirps; ++k) {
        const std::complex<double> g = slow[k];
        std::complex<double>* row = acc.data() + cube.index(k, rx, 0);
        for (std::size_t n = 0; n < n_samples; ++n) row[n] += g * fast[n];
      }
    }
  }

  if (noise_sigma > 0) {
    GaussianRng rng(seed);
    for (auto& v : acc) v += rng.complex_gaussian(noise_sigma);
  }

  for (std::size_t i = 0; i < acc.size(); ++i) {
    cube.samples[i] = {static_cast<float>(acc[i].real()), static_cast<float>(acc[i].imag())};
  }
  if (stats) *stats = local;
  return cube;
}

void validate_lidar_spec(const LidarSpec& spec) {
  if (!(spec.azimuth_step_deg > 0) || spec.azimuth_step_deg > spec.azimuth_fov_deg) {
    throw ConfigError("lidar: need 0 < azimuth_step <= azimuth_fov");
  }
  if (!(spec.max_range_m > 0)) throw ConfigError("lidar: max_range must be > 0");
  if (spec.elevation_rays < 1) throw ConfigError("lidar: need at least one elevation ray");
  if (spec.range_noise_sigma_m < 0) throw ConfigError("lidar: range noise sigma must be >= 0");
}

namespace {

struct AzimuthHit {
  double t_h;        // horizontal distance along the ray
  bool is_segment;
  double z_lo, z_hi; // valid sensor-frame z band at the hit
};

}  // namespace

PointCloud simulate_lidar(const Scene& scene, const SensorPose& pose, const LidarSpec& spec,
                          std::uint64_t seed, std::uint16_t sensor_id) {
  validate_lidar_spec(spec);
  validate_scene(scene);

  const Frame2d frame = make_frame(pose);

  // Sensor-frame copies of the geometry.
  struct Segment {
    double ax, ay, bx, by, z_lo, z_hi;
  };
  std::vector<Segment> segments;
  for (const auto& poly : scene.extended_targets) {
    for (std::size_t i = 0; i + 1 < poly.vertices.size(); ++i) {
      const Vec3 a = frame.to_sensor({poly.vertices[i][0], poly.vertices[i][1], 0.0});
      const Vec3 b = frame.to_sensor({poly.vertices[i + 1][0], poly.vertices[i + 1][1], 0.0});
      segments.push_back({a.x, a.y, b.x, b.y, a.z, a.z + poly.height});
    }
  }
  struct Disc {
    double x, y, z;
  };
  std::vector<Disc> discs;
  discs.reserve(scene.scatterers.size());
  for (const auto& sc : scene.scatterers) {
    const Vec3 p = frame.to_sensor(sc.position);
    discs.push_back({p.x, p.y, p.z});
  }

  const std::size_t n_az =
      spec.azimuth_fov_deg >= 360.0
          ? static_cast<std::size_t>(std::llround(360.0 / spec.azimuth_step_deg))
          : static_cast<std::size_t>(std::floor(spec.azimuth_fov_deg / spec.azimuth_step_deg +
                                                1e-9)) + 1;
  std::vector<double> elevations(spec.elevation_rays, 0.0);
  if (spec.elevation_rays > 1) {
    const double half = 0.5 * kLidarElevationSpanDeg * kDegToRad;
    for (std::size_t m = 0; m < spec.elevation_rays; ++m) {
      elevations[m] = -half + 2.0 * half * static_cast<double>(m) /
                                 static_cast<double>(spec.elevation_rays - 1);
    }
  }

  GaussianRng rng(seed);
  PointCloud cloud;
  cloud.sensor_id = sensor_id;
  cloud.timestamp_s = scene.timestamp_s;

  std::vector<AzimuthHit> hits;
  for (std::size_t a = 0; a < n_az; ++a) {
    const double az_deg = -0.5 * spec.azimuth_fov_deg +
                          static_cast<double>(a) * spec.azimuth_step_deg;
    const double az = az_deg * kDegToRad;
    const double dx = std::cos(az), dy = std::sin(az);

    hits.clear();
    for (const auto& seg : segments) {
      const double ex = seg.bx - seg.ax, ey = seg.by - seg.ay;
      const double denom = dx * ey - dy * ex;
      if (std::abs(denom) < 1e-15) continue;
      const double t = (seg.ax * ey - seg.ay * ex) / denom;
      const double u = (seg.ax * dy - seg.ay * dx) / denom;
      if (t > 1e-9 && u >= 0.0 && u <= 1.0) hits.push_back({t, true, seg.z_lo, seg.z_hi});
    }
    for (const auto& d : discs) {
      const double t = d.x * dx + d.y * dy;  // closest approach along the ray
      if (t <= 1e-9) continue;
      const double px = t * dx - d.x, py = t * dy - d.y;
      if (px * px + py * py > kLidarScattererDiscM * kLidarScattererDiscM) continue;
      hits.push_back({t, false, d.z - kLidarScattererDiscM, d.z + kLidarScattererDiscM});
    }
    if (hits.empty()) continue;
    std::sort(hits.begin(), hits.end(),
              [](const AzimuthHit& l, const AzimuthHit& r) { return l.t_h < r.t_h; });

    for (double elev : elevations) {
      const double tan_e = std::tan(elev);
      const double cos_e = std::cos(elev);
      for (const auto& hit : hits) {
        const double z_at = hit.t_h * tan_e;
        if (z_at < hit.z_lo || z_at > hit.z_hi) continue;
        const double slant = hit.t_h / cos_e;
        if (slant > spec.max_range_m) break;  // hits are sorted; all further are too
        double measured = slant;
        if (spec.range_noise_sigma_m > 0) {
          measured += spec.range_noise_sigma_m * rng.gaussian();
        }
        RadarPoint p;
        p.x = measured * cos_e * dx;
        p.y = measured * cos_e * dy;
        p.z = measured * std::sin(elev);
        p.range_m = measured;
        p.azimuth_deg = az_deg;
        p.v_r_mps = 0.0;
        p.power_db = 0.0;
        cloud.points.push_back(p);
        break;  // nearest hit only
      }
    }
  }
  return cloud;
}

LidarSpec load_lidar_config(const std::string& path) {
  const auto kvs = detail::parse_key_values(detail::read_lines(path), path);
  LidarSpec spec;
  std::set<std::string> seen;
  for (const auto& kv : kvs) {
    if (!seen.insert(kv.key).second) {
      throw ConfigError(path + ":" + std::to_string(kv.line_no) + ": duplicate key '" + kv.key + "'");
    }
    if (kv.key == "azimuth_fov_deg") spec.azimuth_fov_deg = detail::parse_double(kv.value, kv.key);
    else if (kv.key == "azimuth_step_deg") spec.azimuth_step_deg = detail::parse_double(kv.value, kv.key);
    else if (kv.key == "elevation_rays") spec.elevation_rays = static_cast<std::size_t>(detail::parse_int(kv.value, kv.key));
    else if (kv.key == "max_range_m") spec.max_range_m = detail::parse_double(kv.value, kv.key);
    else if (kv.key == "range_noise_sigma_m") spec.range_noise_sigma_m = detail::parse_double(kv.value, kv.key);
    else {
      throw ConfigError(path + ":" + std::to_string(kv.line_no) + ": unknown key '" + kv.key + "'");
    }
  }
  validate_lidar_spec(spec);
  return spec;
}

void save_lidar_config(const LidarSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  out.precision(17);
  out << "azimuth_fov_deg = " << spec.azimuth_fov_deg << "\n"
      << "azimuth_step_deg = " << spec.azimuth_step_deg << "\n"
      << "elevation_rays = " << spec.elevation_rays << "\n"
      << "max_range_m = " << spec.max_range_m << "\n"
      << "range_noise_sigma_m = " << spec.range_noise_sigma_m << "\n";
}

}  // namespace vradar
