// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 vradar contributors

#pragma once

#include <cstdint>
#include <string>

#include "vradar/config.hpp"
#include "vradar/datacube.hpp"
#include "vradar/pointcloud.hpp"
#include "vradar/scene.hpp"

namespace vradar {

/// Scanning lidar model used as the reference modality.
struct LidarSpec {
  double azimuth_fov_deg = 360.0;
  double azimuth_step_deg = 0.2;
  std::size_t elevation_rays = 16;
  double max_range_m = 100.0;
  double range_noise_sigma_m = 0.02;
};

/// Elevation rays are spread uniformly over +-15 degrees.
inline constexpr double kLidarElevationSpanDeg = 30.0;
/// Point scatterers are hit by lidar rays as discs of this radius.
inline constexpr double kLidarScattererDiscM = 0.05;

/// Per-cube synthesis diagnostics: scatterers excluded because they fall
/// outside the processable range or the per-TX unambiguous velocity.
struct SynthesisStats {
  std::size_t contributing = 0;
  std::size_t rejected_range = 0;
  std::size_t rejected_velocity = 0;
};

/// Synthesizes the raw DDMA MIMO data cube one sensor would record: for each
/// scatterer a fast-time beat tone, a slow-time Doppler tone with the per-TX
/// DDMA phase code (TX i advances 2*pi*i/n_tx per chirp), the virtual-array
/// phase, amplitude reflectivity/R^2, plus circular complex white noise of
/// std noise_sigma. Deterministic for a fixed seed. Out-of-range/velocity
/// scatterers are excluded and counted in `stats` unless allow_aliasing.
DataCube synthesize_cube(const Scene& scene, const SensorPose& pose,
                         const WaveformConfig& config, const ArrayGeometry& geometry,
                         double noise_sigma, std::uint64_t seed,
                         bool allow_aliasing = false, SynthesisStats* stats = nullptr);

/// Casts lidar rays over the configured field of view and returns one point per
/// nearest hit (extended-target walls or scatterer discs), with Gaussian range
/// noise. Output is in the lidar sensor frame.
PointCloud simulate_lidar(const Scene& scene, const SensorPose& pose, const LidarSpec& spec,
                          std::uint64_t seed, std::uint16_t sensor_id = 0);

void validate_lidar_spec(const LidarSpec& spec);

/// `key = value` file with keys azimuth_fov_deg, azimuth_step_deg,
/// elevation_rays, max_range_m, range_noise_sigma_m. Unknown keys are an error.
LidarSpec load_lidar_config(const std::string& path);
void save_lidar_config(const LidarSpec& spec, const std::string& path);

}  // namespace vradar
