// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 vradar contributors

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <cstring>

#include "vradar/config.hpp"
#include "vradar/datacube.hpp"
#include "vradar/dsp.hpp"
#include "vradar/errors.hpp"
#include "vradar/file_io.hpp"
#include "vradar/fusion.hpp"
#include "vradar/metrics.hpp"
#include "vradar/rng.hpp"
#include "vradar/scene.hpp"
#include "vradar/sim.hpp"

namespace py = pybind11;
using namespace vradar;

namespace {

py::array_t<std::complex<float>> cube_samples(const DataCube& cube) {
  const auto& c = cube.config;
  py::array_t<std::complex<float>> out(
      {static_cast<py::ssize_t>(c.n_chirps), static_cast<py::ssize_t>(c.n_rx),
       static_cast<py::ssize_t>(c.n_samples)});
  std::memcpy(out.mutable_data(), cube.samples.data(),
              cube.samples.size() * sizeof(std::complex<float>));
  return out;
}

void set_cube_samples(DataCube& cube, const py::array_t<std::complex<float>,
                                                        py::array::c_style | py::array::forcecast>& arr) {
  if (arr.ndim() != 3 ||
      arr.shape(0) != static_cast<py::ssize_t>(cube.config.n_chirps) ||
      arr.shape(1) != static_cast<py::ssize_t>(cube.config.n_rx) ||
      arr.shape(2) != static_cast<py::ssize_t>(cube.config.n_samples)) {
    throw DataError("samples must have shape (n_chirps, n_rx, n_samples)");
  }
  cube.samples.resize(static_cast<std::size_t>(arr.size()));
  std::memcpy(cube.samples.data(), arr.data(), cube.samples.size() * sizeof(std::complex<float>));
}

py::array_t<double> cloud_xyz(const PointCloud& cloud) {
  py::array_t<double> out({static_cast<py::ssize_t>(cloud.points.size()), py::ssize_t{3}});
  auto view = out.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < view.shape(0); ++i) {
    const auto& p = cloud.points[static_cast<std::size_t>(i)];
    view(i, 0) = p.x;
    view(i, 1) = p.y;
    view(i, 2) = p.z;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "FMCW MIMO radar network simulator, processing pipeline and grid metrics";

  py::register_exception<IoError>(m, "IoError");
  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<DataError>(m, "DataError");
  py::register_exception<EmptyResultError>(m, "EmptyResultError");

  m.attr("SPEED_OF_LIGHT") = kSpeedOfLight;

  py::class_<WaveformConfig>(m, "WaveformConfig")
      .def(py::init<>())
      .def_readwrite("carrier_frequency_hz", &WaveformConfig::carrier_frequency_hz)
      .def_readwrite("bandwidth_hz", &WaveformConfig::bandwidth_hz)
      .def_readwrite("chirp_duration_s", &WaveformConfig::chirp_duration_s)
      .def_readwrite("n_samples", &WaveformConfig::n_samples)
      .def_readwrite("sample_rate_hz", &WaveformConfig::sample_rate_hz)
      .def_readwrite("n_chirps", &WaveformConfig::n_chirps)
      .def_readwrite("n_tx", &WaveformConfig::n_tx)
      .def_readwrite("n_rx", &WaveformConfig::n_rx)
      .def_readwrite("frame_rate_hz", &WaveformConfig::frame_rate_hz)
      .def("wavelength_m", &WaveformConfig::wavelength_m)
      .def("frame_period_s", &WaveformConfig::frame_period_s);

  py::class_<ArrayGeometry>(m, "ArrayGeometry")
      .def(py::init<>())
      .def_readwrite("tx_positions_lambda", &ArrayGeometry::tx_positions_lambda)
      .def_readwrite("rx_positions_lambda", &ArrayGeometry::rx_positions_lambda)
      .def("virtual_positions", &ArrayGeometry::virtual_positions);

  py::class_<ResolutionReport>(m, "ResolutionReport")
      .def_readonly("range_resolution_m", &ResolutionReport::range_resolution_m)
      .def_readonly("max_range_m", &ResolutionReport::max_range_m)
      .def_readonly("velocity_resolution_mps", &ResolutionReport::velocity_resolution_mps)
      .def_readonly("max_unambiguous_velocity_per_tx_mps",
                    &ResolutionReport::max_unambiguous_velocity_per_tx_mps)
      .def_readonly("azimuth_beamwidth_deg", &ResolutionReport::azimuth_beamwidth_deg);

  py::class_<Violation>(m, "Violation")
      .def_readonly("code", &Violation::code)
      .def_readonly("message", &Violation::message)
      .def("__repr__", [](const Violation& v) { return "<Violation " + v.code + ">"; });

  py::class_<SensorConfig>(m, "SensorConfig")
      .def(py::init<>())
      .def_readwrite("waveform", &SensorConfig::waveform)
      .def_readwrite("geometry", &SensorConfig::geometry);

  m.def("validate", &validate, py::arg("config"), py::arg("geometry"));
  m.def("derive_resolutions", &derive_resolutions, py::arg("config"), py::arg("geometry"));
  m.def("range_bin_m", &range_bin_m, py::arg("config"));
  m.def("load_sensor_config", &load_sensor_config, py::arg("path"));
  m.def("save_sensor_config", &save_sensor_config, py::arg("config"), py::arg("path"));

  py::class_<Vec3>(m, "Vec3")
      .def(py::init<>())
      .def(py::init([](double x, double y, double z) { return Vec3{x, y, z}; }),
           py::arg("x"), py::arg("y"), py::arg("z"))
      .def_readwrite("x", &Vec3::x)
      .def_readwrite("y", &Vec3::y)
      .def_readwrite("z", &Vec3::z);

  py::class_<Scatterer>(m, "Scatterer")
      .def(py::init<>())
      .def_readwrite("position", &Scatterer::position)
      .def_readwrite("velocity", &Scatterer::velocity)
      .def_readwrite("reflectivity", &Scatterer::reflectivity);

  py::class_<Polyline>(m, "Polyline")
      .def(py::init<>())
      .def_readwrite("vertices", &Polyline::vertices)
      .def_readwrite("height", &Polyline::height)
      .def_readwrite("sample_density", &Polyline::sample_density);

  py::class_<Scene>(m, "Scene")
      .def(py::init<>())
      .def_readwrite("scatterers", &Scene::scatterers)
      .def_readwrite("extended_targets", &Scene::extended_targets)
      .def_readwrite("timestamp_s", &Scene::timestamp_s);

  m.def("validate_scene", &validate_scene, py::arg("scene"));
  m.def("propagate", &propagate, py::arg("scene"), py::arg("dt"));
  m.def("radar_scatterers", &radar_scatterers, py::arg("scene"));
  m.def("load_scene", &load_scene, py::arg("path"));
  m.def("save_scene", &save_scene, py::arg("scene"), py::arg("path"));

  py::class_<SensorPose>(m, "SensorPose")
      .def(py::init<>())
      .def(py::init([](double x, double y, double z, double yaw_deg) {
             return SensorPose{x, y, z, yaw_deg};
           }),
           py::arg("x") = 0.0, py::arg("y") = 0.0, py::arg("z") = 0.0, py::arg("yaw_deg") = 0.0)
      .def_readwrite("x", &SensorPose::x)
      .def_readwrite("y", &SensorPose::y)
      .def_readwrite("z", &SensorPose::z)
      .def_readwrite("yaw_deg", &SensorPose::yaw_deg);

  py::class_<RadarPoint>(m, "RadarPoint")
      .def(py::init<>())
      .def_readwrite("x", &RadarPoint::x)
      .def_readwrite("y", &RadarPoint::y)
      .def_readwrite("z", &RadarPoint::z)
      .def_readwrite("range_m", &RadarPoint::range_m)
      .def_readwrite("azimuth_deg", &RadarPoint::azimuth_deg)
      .def_readwrite("v_r_mps", &RadarPoint::v_r_mps)
      .def_readwrite("power_db", &RadarPoint::power_db);

  py::class_<PointCloud>(m, "PointCloud")
      .def(py::init<>())
      .def_readwrite("frame", &PointCloud::frame)
      .def_readwrite("timestamp_s", &PointCloud::timestamp_s)
      .def_readwrite("sensor_id", &PointCloud::sensor_id)
      .def_readwrite("points", &PointCloud::points)
      .def("xyz", &cloud_xyz)
      .def("__len__", [](const PointCloud& c) { return c.points.size(); });

  py::class_<DataCube>(m, "DataCube")
      .def(py::init<>())
      .def_readwrite("config", &DataCube::config)
      .def_readwrite("sensor_id", &DataCube::sensor_id)
      .def_readwrite("frame", &DataCube::frame)
      .def_readwrite("timestamp_s", &DataCube::timestamp_s)
      .def_property("samples", &cube_samples, &set_cube_samples);

  m.def("make_cube", &make_cube, py::arg("config"), py::arg("sensor_id") = 0,
        py::arg("timestamp_s") = 0.0);

  py::class_<LidarSpec>(m, "LidarSpec")
      .def(py::init<>())
      .def_readwrite("azimuth_fov_deg", &LidarSpec::azimuth_fov_deg)
      .def_readwrite("azimuth_step_deg", &LidarSpec::azimuth_step_deg)
      .def_readwrite("elevation_rays", &LidarSpec::elevation_rays)
      .def_readwrite("max_range_m", &LidarSpec::max_range_m)
      .def_readwrite("range_noise_sigma_m", &LidarSpec::range_noise_sigma_m);

  py::class_<SynthesisStats>(m, "SynthesisStats")
      .def_readonly("contributing", &SynthesisStats::contributing)
      .def_readonly("rejected_range", &SynthesisStats::rejected_range)
      .def_readonly("rejected_velocity", &SynthesisStats::rejected_velocity);

  m.def(
      "synthesize_cube",
      [](const Scene& scene, const SensorPose& pose, const WaveformConfig& config,
         const ArrayGeometry& geometry, double noise_sigma, std::uint64_t seed,
         bool allow_aliasing) {
        SynthesisStats stats;
        DataCube cube =
            synthesize_cube(scene, pose, config, geometry, noise_sigma, seed, allow_aliasing,
                            &stats);
        return py::make_tuple(std::move(cube), stats);
      },
      py::arg("scene"), py::arg("pose"), py::arg("config"), py::arg("geometry"),
      py::arg("noise_sigma"), py::arg("seed"), py::arg("allow_aliasing") = false,
      "Returns (cube, stats)");
  m.def("simulate_lidar", &simulate_lidar, py::arg("scene"), py::arg("pose"), py::arg("spec"),
        py::arg("seed"), py::arg("sensor_id") = 0);
  m.def("load_lidar_config", &load_lidar_config, py::arg("path"));
  m.def("save_lidar_config", &save_lidar_config, py::arg("spec"), py::arg("path"));

  py::enum_<Window>(m, "Window").value("rect", Window::rect).value("hann", Window::hann);

  py::class_<RangeDopplerMap>(m, "RangeDopplerMap")
      .def_readonly("n_doppler", &RangeDopplerMap::n_doppler)
      .def_readonly("n_rx", &RangeDopplerMap::n_rx)
      .def_readonly("n_range", &RangeDopplerMap::n_range)
      .def_readonly("range_bin_m", &RangeDopplerMap::range_bin_m)
      .def_readonly("doppler_bin_mps", &RangeDopplerMap::doppler_bin_mps)
      .def("values", [](const RangeDopplerMap& map) {
        py::array_t<std::complex<double>> out(
            {static_cast<py::ssize_t>(map.n_doppler), static_cast<py::ssize_t>(map.n_rx),
             static_cast<py::ssize_t>(map.n_range)});
        std::memcpy(out.mutable_data(), map.values.data(),
                    map.values.size() * sizeof(std::complex<double>));
        return out;
      });

  py::class_<CfarParams>(m, "CfarParams")
      .def(py::init<>())
      .def_readwrite("train_range", &CfarParams::train_range)
      .def_readwrite("train_doppler", &CfarParams::train_doppler)
      .def_readwrite("guard_range", &CfarParams::guard_range)
      .def_readwrite("guard_doppler", &CfarParams::guard_doppler)
      .def_readwrite("pfa", &CfarParams::pfa);

  py::class_<CfarDetection>(m, "CfarDetection")
      .def_readonly("range_bin", &CfarDetection::range_bin)
      .def_readonly("doppler_bin", &CfarDetection::doppler_bin)
      .def_readonly("snr_db", &CfarDetection::snr_db);

  py::class_<CfarResult>(m, "CfarResult")
      .def_readonly("detections", &CfarResult::detections)
      .def_readonly("threshold_crossings", &CfarResult::threshold_crossings);

  m.def(
      "cfar_detect",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& power,
         const CfarParams& params) {
        if (power.ndim() != 2) throw ConfigError("power must be 2D [doppler][range]");
        const std::span<const double> view(power.data(),
                                           static_cast<std::size_t>(power.size()));
        return cfar_detect(view, static_cast<std::size_t>(power.shape(0)),
                           static_cast<std::size_t>(power.shape(1)), params);
      },
      py::arg("power"), py::arg("params") = CfarParams{});

  m.def("range_doppler", &range_doppler, py::arg("cube"), py::arg("window") = Window::hann);
  m.def("integrate_rx", [](const RangeDopplerMap& map) {
    const auto power = integrate_rx(map);
    py::array_t<double> out(
        {static_cast<py::ssize_t>(map.n_doppler), static_cast<py::ssize_t>(map.n_range)});
    std::memcpy(out.mutable_data(), power.data(), power.size() * sizeof(double));
    return out;
  });
  m.def("interpolate_peak", &interpolate_peak, py::arg("m_left"), py::arg("m_center"),
        py::arg("m_right"));

  py::class_<DemuxResult>(m, "DemuxResult")
      .def_readonly("doppler_bin", &DemuxResult::doppler_bin)
      .def_readonly("ambiguous", &DemuxResult::ambiguous)
      .def_readonly("snapshot", &DemuxResult::snapshot);

  m.def("ddma_demux", &ddma_demux, py::arg("map"), py::arg("range_bin"), py::arg("doppler_bin"),
        py::arg("n_tx"), py::arg("edge_guard_bins") = 2);

  py::class_<AngleEstimate>(m, "AngleEstimate")
      .def_readonly("azimuth_deg", &AngleEstimate::azimuth_deg)
      .def_readonly("confidence", &AngleEstimate::confidence);

  m.def(
      "estimate_angle",
      [](const std::vector<std::complex<double>>& snapshot, const ArrayGeometry& geometry,
         std::size_t zero_pad, Window window) {
        return estimate_angle(snapshot, geometry, zero_pad, window);
      },
      py::arg("snapshot"), py::arg("geometry"), py::arg("zero_pad") = 256,
      py::arg("window") = Window::hann);

  py::class_<PipelineParams>(m, "PipelineParams")
      .def(py::init<>())
      .def_readwrite("window", &PipelineParams::window)
      .def_readwrite("cfar", &PipelineParams::cfar)
      .def_readwrite("zero_pad", &PipelineParams::zero_pad)
      .def_readwrite("merge_radius", &PipelineParams::merge_radius)
      .def_readwrite("subband_guard", &PipelineParams::subband_guard);

  m.def("process_frame", &process_frame, py::arg("cube"), py::arg("geometry"),
        py::arg("params") = PipelineParams{});

  m.def("normalize_yaw_deg", &normalize_yaw_deg, py::arg("yaw_deg"));
  m.def("transform_cloud", &transform_cloud, py::arg("cloud"), py::arg("pose"));

  py::class_<NetworkCloud>(m, "NetworkCloud")
      .def_readonly("timestamp_s", &NetworkCloud::timestamp_s)
      .def_readonly("points", &NetworkCloud::points)
      .def_readonly("sensor_ids", &NetworkCloud::sensor_ids)
      .def_readonly("rejected_clouds", &NetworkCloud::rejected_clouds)
      .def_readonly("empty_warning", &NetworkCloud::empty_warning)
      .def("__len__", [](const NetworkCloud& c) { return c.points.size(); });

  m.def("fuse", &fuse, py::arg("clouds"), py::arg("tolerance_s") = 0.025);

  py::enum_<SensorKind>(m, "SensorKind")
      .value("radar", SensorKind::radar)
      .value("lidar", SensorKind::lidar);

  py::class_<SensorMount>(m, "SensorMount")
      .def(py::init<>())
      .def_readwrite("id", &SensorMount::id)
      .def_readwrite("kind", &SensorMount::kind)
      .def_readwrite("pose", &SensorMount::pose);

  m.def("load_extrinsics", &load_extrinsics, py::arg("path"));
  m.def("save_extrinsics", &save_extrinsics, py::arg("mounts"), py::arg("path"));

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init<>())
      .def_readwrite("origin_x", &GridSpec::origin_x)
      .def_readwrite("origin_y", &GridSpec::origin_y)
      .def_readwrite("extent_x", &GridSpec::extent_x)
      .def_readwrite("extent_y", &GridSpec::extent_y)
      .def_readwrite("cell_size_m", &GridSpec::cell_size_m)
      .def("nx", &GridSpec::nx)
      .def("ny", &GridSpec::ny);

  py::class_<OccupancyGrid>(m, "OccupancyGrid")
      .def_readonly("spec", &OccupancyGrid::spec)
      .def_readonly("dropped_points", &OccupancyGrid::dropped_points)
      .def("total_points", &OccupancyGrid::total_points)
      .def("occupied_cells", &OccupancyGrid::occupied_cells)
      .def("zero_cells", &OccupancyGrid::zero_cells)
      .def("counts", [](const OccupancyGrid& g) {
        py::array_t<std::uint32_t> out(
            {static_cast<py::ssize_t>(g.spec.ny()), static_cast<py::ssize_t>(g.spec.nx())});
        std::memcpy(out.mutable_data(), g.counts.data(),
                    g.counts.size() * sizeof(std::uint32_t));
        return out;
      });

  m.def(
      "rasterize",
      [](const std::vector<RadarPoint>& points, const GridSpec& spec) {
        return rasterize(points, spec);
      },
      py::arg("points"), py::arg("spec"));

  py::enum_<MeanCountMode>(m, "MeanCountMode")
      .value("zero_cell_formula", MeanCountMode::zero_cell_formula)
      .value("above_one_cells", MeanCountMode::above_one_cells);

  m.def("mean_cell_count", &mean_cell_count, py::arg("grid"),
        py::arg("mode") = MeanCountMode::zero_cell_formula);
  m.def("mean_cell_count_joint", &mean_cell_count_joint, py::arg("grid"), py::arg("other"));

  py::class_<JaccardResult>(m, "JaccardResult")
      .def_readonly("value", &JaccardResult::value)
      .def_readonly("degenerate", &JaccardResult::degenerate);

  m.def("jaccard", &jaccard, py::arg("a"), py::arg("b"));

  py::class_<BoxStats>(m, "BoxStats")
      .def_readonly("min", &BoxStats::min)
      .def_readonly("q1", &BoxStats::q1)
      .def_readonly("median", &BoxStats::median)
      .def_readonly("q3", &BoxStats::q3)
      .def_readonly("max", &BoxStats::max);

  m.def(
      "boxplot_stats",
      [](const std::vector<double>& values) { return boxplot_stats(values); },
      py::arg("values"));

  py::class_<TimedCloud>(m, "TimedCloud")
      .def(py::init<>())
      .def_readwrite("time_s", &TimedCloud::time_s)
      .def_readwrite("points", &TimedCloud::points);

  py::class_<MetricRow>(m, "MetricRow")
      .def_readonly("time_s", &MetricRow::time_s)
      .def_readonly("cell_size_m", &MetricRow::cell_size_m)
      .def_readonly("jaccard", &MetricRow::jaccard)
      .def_readonly("jaccard_degenerate", &MetricRow::jaccard_degenerate)
      .def_readonly("mean_count_radar", &MetricRow::mean_count_radar)
      .def_readonly("mean_count_lidar", &MetricRow::mean_count_lidar)
      .def_readonly("dropped_radar", &MetricRow::dropped_radar)
      .def_readonly("dropped_lidar", &MetricRow::dropped_lidar)
      .def_readonly("zero_cells", &MetricRow::zero_cells);

  py::class_<TimeseriesOptions>(m, "TimeseriesOptions")
      .def(py::init<>())
      .def_readwrite("base", &TimeseriesOptions::base)
      .def_readwrite("cell_sizes", &TimeseriesOptions::cell_sizes)
      .def_readwrite("pair_tolerance_s", &TimeseriesOptions::pair_tolerance_s)
      .def_readwrite("mean_mode", &TimeseriesOptions::mean_mode)
      .def_readwrite("joint_support", &TimeseriesOptions::joint_support);

  py::class_<TimeseriesResult>(m, "TimeseriesResult")
      .def_readonly("rows", &TimeseriesResult::rows)
      .def_readonly("unpaired_radar", &TimeseriesResult::unpaired_radar)
      .def_readonly("unpaired_lidar", &TimeseriesResult::unpaired_lidar);

  m.def(
      "metric_timeseries",
      [](const std::vector<TimedCloud>& radar, const std::vector<TimedCloud>& lidar,
         const TimeseriesOptions& options) { return metric_timeseries(radar, lidar, options); },
      py::arg("radar_frames"), py::arg("lidar_frames"), py::arg("options"));

  m.def(
      "write_metrics_csv",
      [](const std::vector<MetricRow>& rows, const std::string& path) {
        write_metrics_csv(rows, path);
      },
      py::arg("rows"), py::arg("path"));
  m.def("read_metrics_csv", &read_metrics_csv, py::arg("path"));

  m.def("write_cube", &write_cube, py::arg("cube"), py::arg("path"));
  m.def("read_cube", &read_cube, py::arg("path"));
  m.def("write_cloud", &write_cloud, py::arg("cloud"), py::arg("path"));
  m.def("read_cloud", &read_cloud, py::arg("path"));

  m.def("derive_seed", &derive_seed, py::arg("base"), py::arg("a"), py::arg("b"));

#ifdef VRADAR_VERSION
  m.attr("__version__") = VRADAR_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
