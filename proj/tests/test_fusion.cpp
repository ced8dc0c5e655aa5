// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 vradar contributors

#include <doctest.h>

#include <cmath>
#include <fstream>

#include "helpers.hpp"
#include "oracles.hpp"
#include "vradar/dsp.hpp"
#include "vradar/errors.hpp"
#include "vradar/fusion.hpp"
#include "vradar/rng.hpp"
#include "vradar/sim.hpp"

using namespace vradar;

namespace {

PointCloud cloud_of(std::vector<RadarPoint> pts, double t = 0.0, std::uint16_t id = 0) {
  PointCloud c;
  c.points = std::move(pts);
  c.timestamp_s = t;
  c.sensor_id = id;
  return c;
}

RadarPoint at(double x, double y, double z = 0.0) {
  RadarPoint p;
  p.x = x;
  p.y = y;
  p.z = z;
  return p;
}

}  // namespace

TEST_CASE("transform identities") {
  const auto cloud = cloud_of({at(1.0, 0.0)});

  const auto same = transform_cloud(cloud, SensorPose{});
  CHECK(same.points[0].x == 1.0);
  CHECK(same.points[0].y == 0.0);

  SensorPose quarter;
  quarter.yaw_deg = 90.0;
  const auto rotated = transform_cloud(cloud, quarter);
  CHECK(rotated.points[0].x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rotated.points[0].y == doctest::Approx(1.0).epsilon(1e-12));

  SensorPose flip;  // yaw 180 about a point 2 m ahead: (1,0) -> (-1,0)+(2,0)
  flip.x = 2.0;
  flip.yaw_deg = 180.0;
  const auto moved = transform_cloud(cloud, flip);
  CHECK(moved.points[0].x == doctest::Approx(1.0));
  CHECK(moved.points[0].y == doctest::Approx(0.0));
}

TEST_CASE("transform preserves pairwise distances and metadata") {
  GaussianRng rng(3);
  std::vector<RadarPoint> pts;
  for (int i = 0; i < 50; ++i) {
    auto p = at(rng.gaussian() * 10, rng.gaussian() * 10, rng.gaussian());
    p.v_r_mps = rng.gaussian();
    p.power_db = rng.gaussian();
    pts.push_back(p);
  }
  SensorPose pose{1.5, -2.0, 0.7, 37.0};
  const auto orig = cloud_of(pts);
  const auto moved = transform_cloud(orig, pose);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(moved.points[i].v_r_mps == orig.points[i].v_r_mps);
    CHECK(moved.points[i].power_db == orig.points[i].power_db);
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double before = std::hypot(orig.points[i].x - orig.points[j].x,
                                       orig.points[i].y - orig.points[j].y,
                                       orig.points[i].z - orig.points[j].z);
      const double after = std::hypot(moved.points[i].x - moved.points[j].x,
                                      moved.points[i].y - moved.points[j].y,
                                      moved.points[i].z - moved.points[j].z);
      CHECK(std::abs(before - after) <= 1e-9);
    }
  }
}

TEST_CASE("fuse keeps clouds inside the time gate and counts points exactly") {
  const auto a = cloud_of({at(1, 0), at(2, 0)}, 0.000, 0);
  const auto b = cloud_of({at(3, 0)}, 0.010, 1);
  const auto late = cloud_of({at(9, 9)}, 0.500, 2);

  const auto network = fuse({{a, SensorPose{}}, {b, SensorPose{}}, {late, SensorPose{}}}, 0.025);
  CHECK(network.points.size() == 3);
  CHECK(network.sensor_ids == std::vector<std::uint16_t>{0, 0, 1});
  CHECK(network.rejected_clouds == 1);
  CHECK(!network.empty_warning);

  // single cloud: the transformed cloud itself
  SensorPose pose;
  pose.yaw_deg = 90.0;
  const auto solo = fuse({{a, pose}}, 1.0);
  CHECK(solo.points.size() == 2);
  CHECK(solo.points[0].y == doctest::Approx(1.0));

  // all clouds stale -> empty with warning
  const auto empty = fuse({{late, SensorPose{}}, {cloud_of({at(1, 1)}, -0.5), SensorPose{}}}, 0.01);
  CHECK(empty.points.empty());
  CHECK(empty.empty_warning);

  CHECK_THROWS_AS(fuse({}, 0.025), EmptyResultError);
}

TEST_CASE("transform then fuse equals fuse of pre-transformed clouds") {
  const auto a = cloud_of({at(1, 2), at(-3, 4)}, 0.0, 0);
  const auto b = cloud_of({at(0, 5)}, 0.0, 1);
  SensorPose pa{2.0, 0.0, 0.0, 45.0};
  SensorPose pb{-1.0, 1.0, 0.0, -90.0};

  const auto direct = fuse({{a, pa}, {b, pb}}, 0.1);
  const auto pre = fuse({{transform_cloud(a, pa), SensorPose{}},
                         {transform_cloud(b, pb), SensorPose{}}},
                        0.1);
  REQUIRE(direct.points.size() == pre.points.size());
  for (std::size_t i = 0; i < direct.points.size(); ++i) {
    CHECK(direct.points[i].x == doctest::Approx(pre.points[i].x).epsilon(1e-12));
    CHECK(direct.points[i].y == doctest::Approx(pre.points[i].y).epsilon(1e-12));
  }
}

TEST_CASE("two sensors localize the same scatterer consistently") {
  const auto cfg = vradar::test::short_config();
  const ArrayGeometry geom;
  const auto rep = derive_resolutions(cfg, geom);

  Scene scene;
  scene.scatterers.push_back({{20.0, 5.0, 0.0}, {0.0, 0.0, 0.0}, 1.0});
  SensorPose front{3.0, 0.0, 0.5, 0.0};
  SensorPose side{1.0, 2.0, 0.5, 40.0};

  std::vector<std::pair<PointCloud, SensorPose>> inputs;
  for (const auto& pose : {front, side}) {
    const double sigma = vradar::test::sigma_for_map_snr(cfg, 1.0 / 400.0, 25.0);
    const auto cube = synthesize_cube(scene, pose, cfg, geom, sigma, 17);
    auto cloud = process_frame(cube, geom);
    REQUIRE(cloud.points.size() == 1);
    inputs.emplace_back(std::move(cloud), pose);
  }
  const auto network = fuse(inputs, 0.025);
  REQUIRE(network.points.size() == 2);
  const double dist = std::hypot(network.points[0].x - network.points[1].x,
                                 network.points[0].y - network.points[1].y);
  // per-sensor bound: half a range bin radially, ~1 degree across
  const double bound = std::hypot(0.5 * rep.range_resolution_m,
                                  20.0 * std::sin(1.0 * M_PI / 180.0));
  CHECK(dist <= 2.0 * bound);
  for (const auto& p : network.points) {
    CHECK(std::abs(p.x - 20.0) <= 2.0 * bound);
    CHECK(std::abs(p.y - 5.0) <= 2.0 * bound);
  }
}

TEST_CASE("yaw normalization and extrinsics file round trip") {
  CHECK(normalize_yaw_deg(270.0) == doctest::Approx(-90.0));
  CHECK(normalize_yaw_deg(-180.0) == doctest::Approx(180.0));
  CHECK(normalize_yaw_deg(540.0) == doctest::Approx(180.0));

  vradar::test::TempDir dir("extrinsics");
  std::vector<SensorMount> mounts{
      {0, SensorKind::radar, {3.2, 0.0, 0.5, 0.0}},
      {1, SensorKind::radar, {1.0, 1.2, 0.5, 90.0}},
      {100, SensorKind::lidar, {0.0, 0.0, 1.8, 0.0}},
  };
  save_extrinsics(mounts, dir.file("e.txt"));
  const auto loaded = load_extrinsics(dir.file("e.txt"));
  REQUIRE(loaded.size() == 3);
  CHECK(loaded[2].kind == SensorKind::lidar);
  CHECK(loaded[1].pose.yaw_deg == doctest::Approx(90.0));

  {
    std::ofstream bad(dir.file("dup.txt"));
    bad << "0 radar 0 0 0 0\n0 lidar 1 1 1 0\n";
  }
  CHECK_THROWS_AS(load_extrinsics(dir.file("dup.txt")), ConfigError);
  {
    std::ofstream bad(dir.file("kind.txt"));
    bad << "0 sonar 0 0 0 0\n";
  }
  CHECK_THROWS_AS(load_extrinsics(dir.file("kind.txt")), ConfigError);
}
