// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 vradar contributors

#include "vradar/scene.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "text_util.hpp"
#include "vradar/errors.hpp"

namespace vradar {

void validate_scene(const Scene& scene) {
  for (std::size_t i = 0; i < scene.scatterers.size(); ++i) {
    if (scene.scatterers[i].reflectivity < 0) {
      throw ConfigError("scatterer " + std::to_string(i) + ": reflectivity must be >= 0");
    }
  }
  for (std::size_t i = 0; i < scene.extended_targets.size(); ++i) {
    const auto& p = scene.extended_targets[i];
    if (p.vertices.size() < 2) {
      throw ConfigError("polyline " + std::to_string(i) + ": needs at least 2 vertices");
    }
    if (!(p.sample_density > 0)) {
      throw ConfigError("polyline " + std::to_string(i) + ": sample density must be > 0");
    }
  }
}

Scene propagate(const Scene& scene, double dt) {
  if (dt < 0) throw std::invalid_argument("propagate: dt must be >= 0");
  Scene out = scene;
  for (auto& s : out.scatterers) {
    s.position.x += s.velocity.x * dt;
    s.position.y += s.velocity.y * dt;
    s.position.z += s.velocity.z * dt;
  }
  out.timestamp_s += dt;
  return out;
}

std::vector<Scatterer> radar_scatterers(const Scene& scene) {
  std::vector<Scatterer> out = scene.scatterers;
  for (const auto& poly : scene.extended_targets) {
    const double spacing = 1.0 / poly.sample_density;
    for (std::size_t i = 0; i + 1 < poly.vertices.size(); ++i) {
      const double ax = poly.vertices[i][0], ay = poly.vertices[i][1];
      const double bx = poly.vertices[i + 1][0], by = poly.vertices[i + 1][1];
      const double len = std::hypot(bx - ax, by - ay);
      if (len <= 0) continue;
      const auto count = static_cast<std::size_t>(std::max(1.0, std::floor(len / spacing + 1e-9)));
      for (std::size_t k = 0; k < count; ++k) {
        const double t = (static_cast<double>(k) + 0.5) / static_cast<double>(count);
        Scatterer s;
        s.position = {ax + t * (bx - ax), ay + t * (by - ay), 0.0};
        s.velocity = {0.0, 0.0, 0.0};
        s.reflectivity = 1.0;
        out.push_back(s);
      }
    }
  }
  return out;
}

Scene load_scene(const std::string& path) {
  const auto lines = detail::read_lines(path);
  Scene scene;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto loc = path + ":" + std::to_string(i + 1);
    const auto toks = detail::split_ws(detail::strip_comment(lines[i]));
    if (toks.empty()) continue;
    if (toks[0] == "scatterer") {
      if (toks.size() != 8) throw ConfigError(loc + ": scatterer needs x y z vx vy vz reflectivity");
      Scatterer s;
      s.position = {detail::parse_double(toks[1], "x"), detail::parse_double(toks[2], "y"),
                    detail::parse_double(toks[3], "z")};
      s.velocity = {detail::parse_double(toks[4], "vx"), detail::parse_double(toks[5], "vy"),
                    detail::parse_double(toks[6], "vz")};
      s.reflectivity = detail::parse_double(toks[7], "reflectivity");
      scene.scatterers.push_back(s);
    } else if (toks[0] == "polyline") {
      if (toks.size() < 5) throw ConfigError(loc + ": polyline needs height density and >= 2 vertices");
      Polyline p;
      p.height = detail::parse_double(toks[1], "height");
      p.sample_density = detail::parse_double(toks[2], "density");
      for (std::size_t k = 3; k < toks.size(); ++k) {
        const auto xy = detail::split(toks[k], ',');
        if (xy.size() != 2) throw ConfigError(loc + ": vertex must be 'x,y'");
        p.vertices.push_back({detail::parse_double(xy[0], "vertex x"),
                              detail::parse_double(xy[1], "vertex y")});
      }
      scene.extended_targets.push_back(p);
    } else if (toks[0] == "timestamp") {
      if (toks.size() != 2) throw ConfigError(loc + ": timestamp needs one value");
      scene.timestamp_s = detail::parse_double(toks[1], "timestamp");
    } else {
      throw ConfigError(loc + ": unknown record '" + toks[0] + "'");
    }
  }
  validate_scene(scene);
  return scene;
}

void save_scene(const Scene& scene, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  out.precision(17);
  out << "timestamp " << scene.timestamp_s << "\n";
  for (const auto& s : scene.scatterers) {
    out << "scatterer " << s.position.x << " " << s.position.y << " " << s.position.z << " "
        << s.velocity.x << " " << s.velocity.y << " " << s.velocity.z << " " << s.reflectivity
        << "\n";
  }
  for (const auto& p : scene.extended_targets) {
    out << "polyline " << p.height << " " << p.sample_density;
    for (const auto& v : p.vertices) out << " " << v[0] << "," << v[1];
    out << "\n";
  }
}

}  // namespace vradar
