// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 vradar contributors

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "vradar/pointcloud.hpp"

namespace vradar {

/// Wraps into (-180, 180].
double normalize_yaw_deg(double yaw_deg);

/// Rigid transform into the vessel frame: rotate by yaw, then translate.
/// v_r and power stay untouched; range/azimuth keep their sensor-frame meaning.
PointCloud transform_cloud(const PointCloud& cloud, const SensorPose& pose);

/// Time-aligned multi-sensor cloud in the vessel frame, with per-point
/// provenance. points and sensor_ids run in parallel.
struct NetworkCloud {
  double timestamp_s = 0.0;
  std::vector<RadarPoint> points;
  std::vector<std::uint16_t> sensor_ids;
  std::size_t rejected_clouds = 0;
  bool empty_warning = false;  // every input cloud fell outside the tolerance
};

/// Transforms each cloud by its pose and concatenates those whose timestamps
/// lie within `tolerance_s` of the median input timestamp. No deduplication.
/// Throws EmptyResultError when called with no clouds.
NetworkCloud fuse(const std::vector<std::pair<PointCloud, SensorPose>>& clouds,
                  double tolerance_s = 0.025);

enum class SensorKind { radar, lidar };

struct SensorMount {
  std::uint16_t id = 0;
  SensorKind kind = SensorKind::radar;
  SensorPose pose;
};

/// Extrinsics file: one `<id> <radar|lidar> <x> <y> <z> <yaw_deg>` line per
/// sensor, '#' comments. Duplicate ids are an error.
std::vector<SensorMount> load_extrinsics(const std::string& path);
void save_extrinsics(const std::vector<SensorMount>& mounts, const std::string& path);

}  // namespace vradar
