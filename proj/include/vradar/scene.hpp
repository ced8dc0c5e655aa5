// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 vradar contributors

#pragma once

#include <array>
#include <string>
#include <vector>

namespace vradar {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Point scatterer in the vessel frame. reflectivity is a dimensionless
/// amplitude scale (RCS-like, >= 0).
struct Scatterer {
  Vec3 position;
  Vec3 velocity;
  double reflectivity = 1.0;
};

/// Extended target: 2D polyline footprint extruded from z=0 up to `height`.
/// For radar synthesis it is sampled into scatterers at `sample_density`
/// scatterers per metre of run length; lidar intersects it exactly.
struct Polyline {
  std::vector<std::array<double, 2>> vertices;
  double height = 2.0;
  double sample_density = 2.0;
};

struct Scene {
  std::vector<Scatterer> scatterers;
  std::vector<Polyline> extended_targets;
  double timestamp_s = 0.0;
};

/// Throws ConfigError if any scene invariant is violated (polyline < 2 vertices,
/// density <= 0, reflectivity < 0).
void validate_scene(const Scene& scene);

/// Advances scatterers by velocity*dt and the timestamp by dt; extended targets
/// are static. dt must be >= 0.
Scene propagate(const Scene& scene, double dt);

/// Explicit scatterers plus the deterministic polyline samples (spacing
/// 1/density, centered per segment). This is what the radar synthesis sees.
std::vector<Scatterer> radar_scatterers(const Scene& scene);

/// Scene file: one record per line.
///   scatterer <x> <y> <z> <vx> <vy> <vz> <reflectivity>
///   polyline <height> <density> <x1,y1> <x2,y2> ...
///   timestamp <t>
/// '#' starts a comment. Unknown record kinds are a hard error.
Scene load_scene(const std::string& path);
void save_scene(const Scene& scene, const std::string& path);

}  // namespace vradar
