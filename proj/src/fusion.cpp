// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 vradar contributors

#include "vradar/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "text_util.hpp"
#include "vradar/errors.hpp"

namespace vradar {

double normalize_yaw_deg(double yaw_deg) {
  double y = std::fmod(yaw_deg, 360.0);
  if (y > 180.0) y -= 360.0;
  if (y <= -180.0) y += 360.0;
  return y;
}

PointCloud transform_cloud(const PointCloud& cloud, const SensorPose& pose) {
  const double yaw = pose.yaw_deg * 3.14159265358979323846 / 180.0;
  const double c = std::cos(yaw), s = std::sin(yaw);
  PointCloud out = cloud;
  for (auto& p : out.points) {
    const double x = p.x, y = p.y;
    p.x = c * x - s * y + pose.x;
    p.y = s * x + c * y + pose.y;
    p.z += pose.z;
  }
  return out;
}

NetworkCloud fuse(const std::vector<std::pair<PointCloud, SensorPose>>& clouds,
                  double tolerance_s) {
  if (clouds.empty()) throw EmptyResultError("fuse: no input clouds");

  std::vector<double> times;
  times.reserve(clouds.size());
  for (const auto& [cloud, pose] : clouds) times.push_back(cloud.timestamp_s);
  std::sort(times.begin(), times.end());
  const std::size_t n = times.size();
  const double median =
      n % 2 == 1 ? times[n / 2] : 0.5 * (times[n / 2 - 1] + times[n / 2]);

  NetworkCloud out;
  out.timestamp_s = median;
  for (const auto& [cloud, pose] : clouds) {
    if (std::abs(cloud.timestamp_s - median) > tolerance_s) {
      ++out.rejected_clouds;
      continue;
    }
    const PointCloud transformed = transform_cloud(cloud, pose);
    out.points.insert(out.points.end(), transformed.points.begin(), transformed.points.end());
    out.sensor_ids.insert(out.sensor_ids.end(), transformed.points.size(), cloud.sensor_id);
  }
  out.empty_warning = out.rejected_clouds == clouds.size();
  return out;
}

std::vector<SensorMount> load_extrinsics(const std::string& path) {
  const auto lines = detail::read_lines(path);
  std::vector<SensorMount> mounts;
  std::set<std::uint16_t> ids;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto loc = path + ":" + std::to_string(i + 1);
    const auto toks = detail::split_ws(detail::strip_comment(lines[i]));
    if (toks.empty()) continue;
    if (toks.size() != 6) throw ConfigError(loc + ": expected '<id> <radar|lidar> <x> <y> <z> <yaw_deg>'");
    SensorMount m;
    const long long id = detail::parse_int(toks[0], "sensor id");
    if (id < 0 || id > 0xffff) throw ConfigError(loc + ": sensor id out of range");
    m.id = static_cast<std::uint16_t>(id);
    if (!ids.insert(m.id).second) throw ConfigError(loc + ": duplicate sensor id " + toks[0]);
    if (toks[1] == "radar") m.kind = SensorKind::radar;
    else if (toks[1] == "lidar") m.kind = SensorKind::lidar;
    else throw ConfigError(loc + ": kind must be 'radar' or 'lidar'");
    m.pose.x = detail::parse_double(toks[2], "x");
    m.pose.y = detail::parse_double(toks[3], "y");
    m.pose.z = detail::parse_double(toks[4], "z");
    m.pose.yaw_deg = normalize_yaw_deg(detail::parse_double(toks[5], "yaw"));
    mounts.push_back(m);
  }
  return mounts;
}

void save_extrinsics(const std::vector<SensorMount>& mounts, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  out.precision(17);
  out << "# id kind x_m y_m z_m yaw_deg\n";
  for (const auto& m : mounts) {
    out << m.id << " " << (m.kind == SensorKind::radar ? "radar" : "lidar") << " " << m.pose.x
        << " " << m.pose.y << " " << m.pose.z << " " << m.pose.yaw_deg << "\n";
  }
}

}  // namespace vradar
