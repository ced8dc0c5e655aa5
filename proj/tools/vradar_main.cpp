// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 vradar contributors
//
// Command line front end: simulate -> process -> compare -> report, with
// files on disk as the stage boundaries. Exit codes: 0 success, 1 I/O,
// 2 config, 3 data, 4 empty result.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <regex>
#include <string>
#include <vector>

#include "vradar/config.hpp"
#include "vradar/dsp.hpp"
#include "vradar/errors.hpp"
#include "vradar/file_io.hpp"
#include "vradar/fusion.hpp"
#include "vradar/metrics.hpp"
#include "vradar/rng.hpp"
#include "vradar/scene.hpp"
#include "vradar/sim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vradar;

namespace {

int log_level() {
  static const int level = [] {
    const char* env = std::getenv("VRADAR_LOG");
    if (!env) return 2;
    const std::string v(env);
    if (v == "error") return 0;
    if (v == "warn") return 1;
    if (v == "info") return 2;
    if (v == "debug") return 3;
    return 2;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= 2) std::cerr << "vradar: " << msg << "\n";
}
void log_warn(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "vradar: warning: " << msg << "\n";
}

class StageTimer {
 public:
  StageTimer() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void write_manifest(const fs::path& path, json manifest) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write manifest: " + path.string());
  out << manifest.dump(2) << "\n";
}

std::string frame_name(const std::string& prefix, std::uint16_t sensor_id, std::uint32_t frame,
                       const std::string& ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_s%u_f%05u.%s", prefix.c_str(), sensor_id, frame,
                ext.c_str());
  return buf;
}

/// Frame index from a `..._f#####.` file name, or `fallback` when absent.
std::uint32_t frame_from_name(const fs::path& path, std::uint32_t fallback) {
  static const std::regex pattern("_f(\\d+)\\.");
  std::smatch match;
  const std::string name = path.filename().string();
  if (std::regex_search(name, match, pattern)) {
    return static_cast<std::uint32_t>(std::stoul(match[1].str()));
  }
  return fallback;
}

std::vector<fs::path> list_files(const fs::path& dir, const std::string& extension,
                                 const std::string& prefix) {
  if (!fs::exists(dir)) throw IoError("no such directory: " + dir.string());
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename().string();
    if (entry.path().extension() == extension &&
        (prefix.empty() || name.rfind(prefix, 0) == 0)) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

SensorConfig load_validated_config(const std::string& path) {
  const auto cfg = load_sensor_config(path);
  const auto violations = validate(cfg.waveform, cfg.geometry);
  if (!violations.empty()) {
    std::string msg = "invalid sensor config " + path + ":";
    for (const auto& v : violations) msg += "\n  [" + v.code + "] " + v.message;
    throw ConfigError(msg);
  }
  return cfg;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string scene, config, extrinsics, lidar_config, out;
  std::uint32_t frames = 1;
  std::uint64_t seed = 0;
  double noise_sigma = 0.01;
  bool allow_aliasing = false;
};

int run_simulate(const SimulateArgs& args) {
  const StageTimer total;
  const Scene scene0 = load_scene(args.scene);
  const SensorConfig sensor = load_validated_config(args.config);
  const auto mounts = load_extrinsics(args.extrinsics);
  LidarSpec lidar_spec;
  if (!args.lidar_config.empty()) lidar_spec = load_lidar_config(args.lidar_config);

  fs::create_directories(args.out);
  json frame_times = json::array();
  std::size_t cubes = 0, lidar_clouds = 0;

  for (std::uint32_t f = 0; f < args.frames; ++f) {
    const StageTimer frame_timer;
    const double t = static_cast<double>(f) * sensor.waveform.frame_period_s();
    const Scene scene = propagate(scene0, t);

    for (const auto& mount : mounts) {
      if (mount.kind == SensorKind::radar) {
        SynthesisStats stats;
        DataCube cube =
            synthesize_cube(scene, mount.pose, sensor.waveform, sensor.geometry,
                            args.noise_sigma, derive_seed(args.seed, mount.id, f),
                            args.allow_aliasing, &stats);
        cube.sensor_id = mount.id;
        cube.frame = f;
        if (stats.rejected_range + stats.rejected_velocity > 0) {
          log_info("sensor " + std::to_string(mount.id) + " frame " + std::to_string(f) + ": " +
                   std::to_string(stats.rejected_range) + " scatterers beyond range, " +
                   std::to_string(stats.rejected_velocity) + " beyond velocity ambiguity");
        }
        write_cube(cube, (fs::path(args.out) / frame_name("cube", mount.id, f, "rdc")).string());
        ++cubes;
      } else {
        PointCloud cloud = simulate_lidar(scene, mount.pose, lidar_spec,
                                          derive_seed(args.seed, mount.id, f), mount.id);
        cloud.frame = f;
        write_cloud(cloud,
                    (fs::path(args.out) / frame_name("lidar", mount.id, f, "csv")).string());
        ++lidar_clouds;
      }
    }
    frame_times.push_back(frame_timer.ms());
  }

  write_manifest(fs::path(args.out) / "manifest.json",
                 json{{"command", "simulate"},
                      {"scene", args.scene},
                      {"config", args.config},
                      {"extrinsics", args.extrinsics},
                      {"lidar_config", args.lidar_config},
                      {"seed", args.seed},
                      {"frames", args.frames},
                      {"noise_sigma", args.noise_sigma},
                      {"output_dir", args.out},
                      {"cube_files", cubes},
                      {"lidar_files", lidar_clouds},
                      {"timings_ms", {{"total", total.ms()}, {"per_frame", frame_times}}}});
  log_info("simulate: wrote " + std::to_string(cubes) + " cubes, " +
           std::to_string(lidar_clouds) + " lidar clouds");
  return 0;
}

// ---------------------------------------------------------------------------

struct ProcessArgs {
  std::string in, out, config;
  double pfa = 1e-4;
  std::string window = "hann";
  std::size_t zero_pad = 256;
  std::size_t merge_radius = 1;
  std::size_t subband_guard = 2;
};

int run_process(const ProcessArgs& args) {
  const StageTimer total;
  const SensorConfig sensor = load_validated_config(args.config);
  PipelineParams params;
  params.cfar.pfa = args.pfa;
  params.zero_pad = args.zero_pad;
  params.merge_radius = args.merge_radius;
  params.subband_guard = args.subband_guard;
  if (args.window == "hann") params.window = Window::hann;
  else if (args.window == "rect") params.window = Window::rect;
  else throw ConfigError("unknown window '" + args.window + "' (hann|rect)");

  const auto files = list_files(args.in, ".rdc", "");
  fs::create_directories(args.out);
  json frame_times = json::array();
  std::size_t points = 0;

  for (std::size_t i = 0; i < files.size(); ++i) {
    const StageTimer frame_timer;
    DataCube cube = read_cube(files[i].string());
    const auto& w = cube.config;
    const auto& expect = sensor.waveform;
    if (w.n_tx != expect.n_tx || w.n_rx != expect.n_rx || w.n_chirps != expect.n_chirps ||
        w.n_samples != expect.n_samples ||
        std::abs(w.carrier_frequency_hz - expect.carrier_frequency_hz) > 1.0 ||
        std::abs(w.bandwidth_hz - expect.bandwidth_hz) > 1.0) {
      throw ConfigError("cube " + files[i].string() + " does not match the sensor config");
    }
    cube.config.frame_rate_hz = expect.frame_rate_hz;
    cube.frame = frame_from_name(files[i], static_cast<std::uint32_t>(i));

    PointCloud cloud = process_frame(cube, sensor.geometry, params);
    points += cloud.points.size();

    std::string name = files[i].stem().string();
    if (name.rfind("cube_", 0) == 0) name = "cloud_" + name.substr(5);
    else name = "cloud_" + name;
    write_cloud(cloud, (fs::path(args.out) / (name + ".csv")).string());
    frame_times.push_back(frame_timer.ms());
  }

  write_manifest(fs::path(args.out) / "manifest.json",
                 json{{"command", "process"},
                      {"input_dir", args.in},
                      {"config", args.config},
                      {"output_dir", args.out},
                      {"pfa", args.pfa},
                      {"window", args.window},
                      {"zero_pad", args.zero_pad},
                      {"merge_radius", args.merge_radius},
                      {"subband_guard", args.subband_guard},
                      {"cubes", files.size()},
                      {"points", points},
                      {"timings_ms", {{"total", total.ms()}, {"per_frame", frame_times}}}});
  log_info("process: " + std::to_string(files.size()) + " cubes -> " + std::to_string(points) +
           " points");
  return 0;
}

// ---------------------------------------------------------------------------

struct CompareArgs {
  std::string radar, lidar, extrinsics, out;
  std::vector<double> cell_sizes{1.0};
  std::string area = "100x80";
  std::string origin;  // "x,y"; default: centered crop
  double fuse_tolerance = 0.025;
  double pair_tolerance = -1.0;
  bool joint_support = false;
  bool mean_above_one = false;
};

GridSpec parse_grid(const std::string& area, const std::string& origin) {
  GridSpec spec;
  const auto x = area.find('x');
  if (x == std::string::npos) throw ConfigError("--area must look like 100x80");
  try {
    spec.extent_x = std::stod(area.substr(0, x));
    spec.extent_y = std::stod(area.substr(x + 1));
  } catch (const std::exception&) {
    throw ConfigError("--area must look like 100x80");
  }
  if (origin.empty()) {
    spec.origin_x = -0.5 * spec.extent_x;
    spec.origin_y = -0.5 * spec.extent_y;
  } else {
    const auto comma = origin.find(',');
    if (comma == std::string::npos) throw ConfigError("--origin must look like -50,-40");
    try {
      spec.origin_x = std::stod(origin.substr(0, comma));
      spec.origin_y = std::stod(origin.substr(comma + 1));
    } catch (const std::exception&) {
      throw ConfigError("--origin must look like -50,-40");
    }
  }
  return spec;
}

int run_compare(const CompareArgs& args) {
  const StageTimer total;
  const auto mounts = load_extrinsics(args.extrinsics);
  std::map<std::uint16_t, SensorMount> by_id;
  for (const auto& m : mounts) by_id[m.id] = m;

  auto pose_of = [&](std::uint16_t id, SensorKind kind, const std::string& file) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw ConfigError("sensor " + std::to_string(id) + " from " + file +
                        " is missing from the extrinsics file");
    }
    if (it->second.kind != kind) {
      throw ConfigError("sensor " + std::to_string(id) + " from " + file +
                        " has the wrong kind in the extrinsics file");
    }
    return it->second.pose;
  };

  // radar clouds grouped by frame, then fused into the vessel frame
  auto radar_files = list_files(args.radar, ".csv", "cloud_");
  if (radar_files.empty()) radar_files = list_files(args.radar, ".csv", "");
  std::map<std::uint32_t, std::vector<std::pair<PointCloud, SensorPose>>> radar_frames;
  for (const auto& file : radar_files) {
    PointCloud cloud = read_cloud(file.string());
    cloud.frame = frame_from_name(file, cloud.frame);
    const auto pose = pose_of(cloud.sensor_id, SensorKind::radar, file.filename().string());
    radar_frames[cloud.frame].emplace_back(std::move(cloud), pose);
  }

  auto lidar_files = list_files(args.lidar, ".csv", "lidar_");
  if (lidar_files.empty()) lidar_files = list_files(args.lidar, ".csv", "");
  std::vector<TimedCloud> lidar_clouds;
  for (const auto& file : lidar_files) {
    PointCloud cloud = read_cloud(file.string());
    const auto pose = pose_of(cloud.sensor_id, SensorKind::lidar, file.filename().string());
    const PointCloud vessel = transform_cloud(cloud, pose);
    lidar_clouds.push_back({vessel.timestamp_s, vessel.points});
  }

  std::vector<TimedCloud> radar_clouds;
  std::size_t stale = 0;
  for (auto& [frame, clouds] : radar_frames) {
    NetworkCloud network = fuse(clouds, args.fuse_tolerance);
    if (network.empty_warning) {
      log_warn("frame " + std::to_string(frame) + ": all radar clouds outside the fuse gate");
    }
    stale += network.rejected_clouds;
    radar_clouds.push_back({network.timestamp_s, std::move(network.points)});
  }
  if (stale > 0) log_warn(std::to_string(stale) + " radar clouds fell outside the fuse gate");
  if (radar_clouds.empty() || lidar_clouds.empty()) {
    throw EmptyResultError("compare: no radar or lidar frames found");
  }

  TimeseriesOptions opts;
  opts.base = parse_grid(args.area, args.origin);
  opts.cell_sizes = args.cell_sizes;
  opts.pair_tolerance_s = args.pair_tolerance;
  opts.joint_support = args.joint_support;
  opts.mean_mode =
      args.mean_above_one ? MeanCountMode::above_one_cells : MeanCountMode::zero_cell_formula;
  const auto result = metric_timeseries(radar_clouds, lidar_clouds, opts);
  if (result.unpaired_radar + result.unpaired_lidar > 0) {
    log_warn(std::to_string(result.unpaired_radar) + " radar / " +
             std::to_string(result.unpaired_lidar) + " lidar frames had no time-paired partner");
  }
  write_metrics_csv(result.rows, args.out);

  write_manifest(fs::path(args.out + ".manifest.json"),
                 json{{"command", "compare"},
                      {"radar_dir", args.radar},
                      {"lidar_dir", args.lidar},
                      {"extrinsics", args.extrinsics},
                      {"area", args.area},
                      {"cell_sizes", args.cell_sizes},
                      {"fuse_tolerance_s", args.fuse_tolerance},
                      {"rows", result.rows.size()},
                      {"unpaired_radar", result.unpaired_radar},
                      {"unpaired_lidar", result.unpaired_lidar},
                      {"output", args.out},
                      {"timings_ms", {{"total", total.ms()}}}});
  log_info("compare: " + std::to_string(result.rows.size()) + " metric rows -> " + args.out);
  return 0;
}

// ---------------------------------------------------------------------------

struct ReportArgs {
  std::string metrics, out;
};

int run_report(const ReportArgs& args) {
  const StageTimer total;
  const auto rows = read_metrics_csv(args.metrics);
  if (rows.empty()) throw EmptyResultError("report: metrics csv has no rows");

  std::map<double, std::vector<const MetricRow*>> by_cell;
  for (const auto& row : rows) by_cell[row.cell_size_m].push_back(&row);

  std::ofstream out(args.out);
  if (!out) throw IoError("cannot write file: " + args.out);
  out.precision(6);
  out << "# vradar metrics report\n";
  out << "rows " << rows.size() << "  cell_sizes " << by_cell.size() << "\n";

  auto print_stats = [&out](const std::string& label, const std::vector<double>& values) {
    if (values.empty()) {
      out << label << ": no finite values\n";
      return;
    }
    const auto s = boxplot_stats(values);
    out << label << ": min=" << s.min << " q1=" << s.q1 << " median=" << s.median
        << " q3=" << s.q3 << " max=" << s.max << "\n";
  };

  for (const auto& [cell, cell_rows] : by_cell) {
    std::vector<double> radar, lidar, jac;
    for (const auto* r : cell_rows) {
      if (std::isfinite(r->mean_count_radar)) radar.push_back(r->mean_count_radar);
      if (std::isfinite(r->mean_count_lidar)) lidar.push_back(r->mean_count_lidar);
      jac.push_back(r->jaccard);
    }
    const std::string tag = "[cell " + std::to_string(cell) + " m] ";
    print_stats(tag + "radar mean count", radar);
    print_stats(tag + "lidar mean count", lidar);
    print_stats(tag + "jaccard", jac);
    out << tag << "density ratio lidar/radar per frame:\n";
    for (const auto* r : cell_rows) {
      out << "  t=" << r->time_s;
      if (std::isfinite(r->mean_count_radar) && std::isfinite(r->mean_count_lidar) &&
          r->mean_count_radar > 0) {
        out << " ratio=" << r->mean_count_lidar / r->mean_count_radar << "\n";
      } else {
        out << " ratio=undefined\n";
      }
    }
  }
  if (!out) throw IoError("write failed: " + args.out);

  write_manifest(fs::path(args.out + ".manifest.json"),
                 json{{"command", "report"},
                      {"metrics", args.metrics},
                      {"output", args.out},
                      {"rows", rows.size()},
                      {"timings_ms", {{"total", total.ms()}}}});
  log_info("report: " + args.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FMCW MIMO radar network simulation, processing and lidar comparison"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "synthesize raw cubes and lidar clouds");
  simulate->add_option("--scene", sim.scene, "scene file")->required();
  simulate->add_option("--config", sim.config, "sensor waveform/geometry config")->required();
  simulate->add_option("--extrinsics", sim.extrinsics, "sensor mount file")->required();
  simulate->add_option("--lidar-config", sim.lidar_config, "lidar spec file");
  simulate->add_option("--frames", sim.frames, "number of frames");
  simulate->add_option("--seed", sim.seed, "run seed");
  simulate->add_option("--noise-sigma", sim.noise_sigma, "complex noise std per sample");
  simulate->add_flag("--allow-aliasing", sim.allow_aliasing,
                     "keep out-of-range/velocity scatterers (aliased)");
  simulate->add_option("--out", sim.out, "output directory")->required();

  ProcessArgs proc;
  auto* process = app.add_subcommand("process", "raw cubes to point clouds");
  process->add_option("--in", proc.in, "directory with .rdc cubes")->required();
  process->add_option("--out", proc.out, "output directory")->required();
  process->add_option("--config", proc.config, "sensor waveform/geometry config")->required();
  process->add_option("--pfa", proc.pfa, "CFAR false-alarm probability");
  process->add_option("--window", proc.window, "taper: hann|rect");
  process->add_option("--zero-pad", proc.zero_pad, "angle FFT length");
  process->add_option("--merge-radius", proc.merge_radius, "detection merge radius, bins");
  process->add_option("--subband-guard", proc.subband_guard, "Doppler ambiguity guard, bins");

  CompareArgs cmp;
  auto* compare = app.add_subcommand("compare", "grid metrics between radar and lidar clouds");
  compare->add_option("--radar", cmp.radar, "directory with radar cloud CSVs")->required();
  compare->add_option("--lidar", cmp.lidar, "directory with lidar cloud CSVs")->required();
  compare->add_option("--extrinsics", cmp.extrinsics, "sensor mount file")->required();
  compare->add_option("--cell-size", cmp.cell_sizes, "grid cell sizes in metres")
      ->delimiter(',');
  compare->add_option("--area", cmp.area, "crop extent, e.g. 100x80");
  compare->add_option("--origin", cmp.origin, "crop origin 'x,y' (default: centered)");
  compare->add_option("--fuse-tolerance", cmp.fuse_tolerance, "network time gate, seconds");
  compare->add_option("--pair-tolerance", cmp.pair_tolerance,
                      "frame pairing tolerance, seconds (<0: auto)");
  compare->add_flag("--joint-support", cmp.joint_support,
                    "average counts over cells occupied in both modalities");
  compare->add_flag("--mean-above-one", cmp.mean_above_one,
                    "average only cells with more than one point");
  compare->add_option("--out", cmp.out, "metrics CSV path")->required();

  ReportArgs rep;
  auto* report = app.add_subcommand("report", "box-plot statistics from a metrics CSV");
  report->add_option("--metrics", rep.metrics, "metrics CSV")->required();
  report->add_option("--out", rep.out, "report text file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (process->parsed()) return run_process(proc);
    if (compare->parsed()) return run_compare(cmp);
    if (report->parsed()) return run_report(rep);
  } catch (const IoError& e) {
    std::cerr << "vradar: i/o error: " << e.what() << "\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "vradar: config error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "vradar: data error: " << e.what() << "\n";
    return 3;
  } catch (const EmptyResultError& e) {
    std::cerr << "vradar: empty result: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "vradar: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "vradar: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
