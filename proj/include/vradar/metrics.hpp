// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 vradar contributors

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vradar/pointcloud.hpp"

namespace vradar {

/// Axis-aligned 2D crop divided into square cells. The extent must divide into
/// whole cells. Defaults to the 100 m x 80 m / 1 m^2 comparison grid centered
/// on the vessel.
struct GridSpec {
  double origin_x = -50.0;
  double origin_y = -40.0;
  double extent_x = 100.0;
  double extent_y = 80.0;
  double cell_size_m = 1.0;

  std::size_t nx() const;
  std::size_t ny() const;
  std::size_t cell_count() const { return nx() * ny(); }
  bool operator==(const GridSpec&) const = default;
};

void validate_grid(const GridSpec& spec);

/// Per-cell point counts N_m over the crop. Points outside the crop are dropped
/// and counted.
struct OccupancyGrid {
  GridSpec spec;
  std::vector<std::uint32_t> counts;
  std::size_t dropped_points = 0;

  std::uint32_t at(std::size_t ix, std::size_t iy) const { return counts[iy * spec.nx() + ix]; }
  std::size_t total_points() const;
  std::size_t occupied_cells() const;
  std::size_t zero_cells() const { return counts.size() - occupied_cells(); }
};

/// Cells are half-open intervals [edge, edge + cell): a point exactly on an
/// interior edge belongs to the higher cell. z is ignored.
OccupancyGrid rasterize(std::span<const RadarPoint> points, const GridSpec& spec);

enum class MeanCountMode {
  zero_cell_formula,  // sum(N_m) / (M - K), K = zero-count cells
  above_one_cells,    // average over cells with N_m > 1
};

/// Mean cell count per square metre. Throws DataError on an all-zero grid
/// (the denominator M - K vanishes).
double mean_cell_count(const OccupancyGrid& grid,
                       MeanCountMode mode = MeanCountMode::zero_cell_formula);

/// Joint-support variant: averages `grid`'s counts over the cells occupied in
/// both grids. Throws DataError when the joint support is empty.
double mean_cell_count_joint(const OccupancyGrid& grid, const OccupancyGrid& other);

struct JaccardResult {
  double value = 0.0;
  bool degenerate = false;  // both occupied sets empty; value defined as 1
};

/// |A intersect B| / |A union B| over occupied-cell sets. Grids must share the
/// same spec (ConfigError otherwise).
JaccardResult jaccard(const OccupancyGrid& a, const OccupancyGrid& b);

struct BoxStats {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

/// Five-number summary; quartiles by linear interpolation between order
/// statistics. Throws DataError on empty input.
BoxStats boxplot_stats(std::span<const double> values);

/// One cloud with its frame timestamp, already in the comparison frame.
struct TimedCloud {
  double time_s = 0.0;
  std::vector<RadarPoint> points;
};

/// One metrics CSV row: a (paired frame, cell size) combination. Undefined mean
/// counts (all-zero grid) are reported as NaN rather than an error so a single
/// empty frame does not abort a run.
struct MetricRow {
  double time_s = 0.0;
  double cell_size_m = 0.0;
  double jaccard = 0.0;
  bool jaccard_degenerate = false;
  double mean_count_radar = 0.0;
  double mean_count_lidar = 0.0;
  std::size_t dropped_radar = 0;
  std::size_t dropped_lidar = 0;
  std::size_t zero_cells = 0;  // cells empty in both modalities
};

struct TimeseriesOptions {
  GridSpec base;                        // cell_size_m is overridden per entry below
  std::vector<double> cell_sizes{1.0};
  double pair_tolerance_s = -1.0;       // < 0: half the slower modality's frame period
  MeanCountMode mean_mode = MeanCountMode::zero_cell_formula;
  bool joint_support = false;
};

struct TimeseriesResult {
  std::vector<MetricRow> rows;
  std::size_t unpaired_radar = 0;
  std::size_t unpaired_lidar = 0;
};

/// Pairs radar and lidar frames by timestamp and evaluates the metrics per pair
/// and cell size. Throws EmptyResultError when no frames pair up.
TimeseriesResult metric_timeseries(std::span<const TimedCloud> radar_frames,
                                   std::span<const TimedCloud> lidar_frames,
                                   const TimeseriesOptions& options);

/// CSV with header time_s,cell_size_m,jaccard,mean_count_radar,mean_count_lidar,
/// dropped_points_radar,dropped_points_lidar.
void write_metrics_csv(std::span<const MetricRow> rows, const std::string& path);
std::vector<MetricRow> read_metrics_csv(const std::string& path);

}  // namespace vradar
