// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 vradar contributors

#pragma once

#include <cstdint>
#include <vector>

namespace vradar {

/// One detected target. x/y/z are in the frame the cloud currently lives in
/// (sensor frame out of the pipeline, vessel frame after transform_cloud);
/// range/azimuth always refer to the originating sensor. v_r is the relative
/// radial velocity along the sensor line of sight, negative for approaching
/// targets. power_db is the integrated detection power in dBFS.
struct RadarPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double range_m = 0.0;
  double azimuth_deg = 0.0;
  double v_r_mps = 0.0;
  double power_db = 0.0;
};

struct PointCloud {
  std::uint32_t frame = 0;
  double timestamp_s = 0.0;
  std::uint16_t sensor_id = 0;
  std::vector<RadarPoint> points;
};

/// Rigid sensor mounting in the vessel frame (bow = +x, port = +y, z up).
/// Pitch and roll are fixed to zero.
struct SensorPose {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double yaw_deg = 0.0;
};

}  // namespace vradar
