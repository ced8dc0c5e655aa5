// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 vradar contributors

#pragma once

#include <cstdint>
#include <string>

#include "vradar/datacube.hpp"
#include "vradar/pointcloud.hpp"

namespace vradar {

inline constexpr char kCubeMagic[4] = {'R', 'D', 'C', '1'};
inline constexpr std::uint32_t kCubeVersion = 1;

/// Binary cube container, everything little-endian:
///   magic "RDC1", version u32, timestamp_ns u64, sensor_id u16, n_tx u16,
///   n_rx u16, reserved u16, n_chirps u32, n_samples u32, carrier_frequency f64,
///   bandwidth f64, chirp_duration f64, sample_rate f64,
/// followed by interleaved (real, imag) float32 samples in [chirp][rx][sample]
/// order. read_cube(write_cube(x)) is bit-exact. Failures throw DataError with
/// a stable code prefix: bad_magic, bad_version, truncated_payload,
/// dim_overflow, trailing_bytes.
void write_cube(const DataCube& cube, const std::string& path);
DataCube read_cube(const std::string& path);

/// Point cloud CSV with header frame,time_s,sensor_id,x_m,y_m,z_m,v_r_mps,power_db.
/// Values round-trip to 1e-6; unknown columns are rejected; malformed rows
/// report their line number.
void write_cloud(const PointCloud& cloud, const std::string& path);
PointCloud read_cloud(const std::string& path);

}  // namespace vradar
