// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 vradar contributors

#include "vradar/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "text_util.hpp"
#include "vradar/errors.hpp"

namespace vradar {

namespace {

std::size_t axis_cells(double extent, double cell) {
  return static_cast<std::size_t>(std::llround(extent / cell));
}

}  // namespace

std::size_t GridSpec::nx() const { return axis_cells(extent_x, cell_size_m); }
std::size_t GridSpec::ny() const { return axis_cells(extent_y, cell_size_m); }

void validate_grid(const GridSpec& spec) {
  if (!(spec.cell_size_m > 0)) throw ConfigError("grid: cell size must be > 0");
  if (!(spec.extent_x > 0) || !(spec.extent_y > 0)) throw ConfigError("grid: extent must be > 0");
  for (double extent : {spec.extent_x, spec.extent_y}) {
    const double cells = extent / spec.cell_size_m;
    if (std::abs(cells - std::llround(cells)) > 1e-9 * std::max(1.0, cells)) {
      throw ConfigError("grid: extent must divide into whole cells");
    }
  }
}

std::size_t OccupancyGrid::total_points() const {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

std::size_t OccupancyGrid::occupied_cells() const {
  return static_cast<std::size_t>(
      std::count_if(counts.begin(), counts.end(), [](std::uint32_t c) { return c > 0; }));
}

OccupancyGrid rasterize(std::span<const RadarPoint> points, const GridSpec& spec) {
  validate_grid(spec);
  OccupancyGrid grid;
  grid.spec = spec;
  grid.counts.assign(spec.cell_count(), 0);
  const auto nx = static_cast<long long>(spec.nx());
  const auto ny = static_cast<long long>(spec.ny());
  for (const auto& p : points) {
    const auto ix = static_cast<long long>(std::floor((p.x - spec.origin_x) / spec.cell_size_m));
    const auto iy = static_cast<long long>(std::floor((p.y - spec.origin_y) / spec.cell_size_m));
    if (ix < 0 || ix >= nx || iy < 0 || iy >= ny) {
      ++grid.dropped_points;
      continue;
    }
    ++grid.counts[static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx) +
                  static_cast<std::size_t>(ix)];
  }
  return grid;
}

double mean_cell_count(const OccupancyGrid& grid, MeanCountMode mode) {
  const double cell_area = grid.spec.cell_size_m * grid.spec.cell_size_m;
  if (mode == MeanCountMode::zero_cell_formula) {
    const std::size_t occupied = grid.occupied_cells();  // M - K
    if (occupied == 0) throw DataError("mean_cell_count: all cells empty (M - K = 0)");
    return static_cast<double>(grid.total_points()) / static_cast<double>(occupied) / cell_area;
  }
  std::size_t points = 0, cells = 0;
  for (const auto c : grid.counts) {
    if (c > 1) {
      points += c;
      ++cells;
    }
  }
  if (cells == 0) throw DataError("mean_cell_count: no cells with more than one point");
  return static_cast<double>(points) / static_cast<double>(cells) / cell_area;
}

double mean_cell_count_joint(const OccupancyGrid& grid, const OccupancyGrid& other) {
  if (!(grid.spec == other.spec)) throw ConfigError("mean_cell_count_joint: grid specs differ");
  const double cell_area = grid.spec.cell_size_m * grid.spec.cell_size_m;
  std::size_t points = 0, cells = 0;
  for (std::size_t i = 0; i < grid.counts.size(); ++i) {
    if (grid.counts[i] > 0 && other.counts[i] > 0) {
      points += grid.counts[i];
      ++cells;
    }
  }
  if (cells == 0) throw DataError("mean_cell_count_joint: joint support is empty");
  return static_cast<double>(points) / static_cast<double>(cells) / cell_area;
}

JaccardResult jaccard(const OccupancyGrid& a, const OccupancyGrid& b) {
  if (!(a.spec == b.spec)) throw ConfigError("jaccard: grid specs differ");
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.counts.size(); ++i) {
    const bool in_a = a.counts[i] > 0, in_b = b.counts[i] > 0;
    if (in_a && in_b) ++inter;
    if (in_a || in_b) ++uni;
  }
  if (uni == 0) return {1.0, true};
  return {static_cast<double>(inter) / static_cast<double>(uni), false};
}

BoxStats boxplot_stats(std::span<const double> values) {
  if (values.empty()) throw DataError("boxplot_stats: empty input");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&sorted](double q) {
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
  };
  return {sorted.front(), quantile(0.25), quantile(0.5), quantile(0.75), sorted.back()};
}

TimeseriesResult metric_timeseries(std::span<const TimedCloud> radar_frames,
                                   std::span<const TimedCloud> lidar_frames,
                                   const TimeseriesOptions& options) {
  if (options.cell_sizes.empty()) throw ConfigError("metric_timeseries: no cell sizes");

  // Default pairing tolerance: half the slower modality's median frame period.
  double tolerance = options.pair_tolerance_s;
  if (tolerance < 0) {
    auto median_period = [](std::span<const TimedCloud> frames) {
      if (frames.size() < 2) return 0.0;
      std::vector<double> gaps;
      for (std::size_t i = 1; i < frames.size(); ++i) {
        gaps.push_back(frames[i].time_s - frames[i - 1].time_s);
      }
      std::sort(gaps.begin(), gaps.end());
      return gaps[gaps.size() / 2];
    };
    tolerance = 0.5 * std::max(median_period(radar_frames), median_period(lidar_frames));
    if (tolerance <= 0) tolerance = 0.025;
  }

  // Greedy nearest-time pairing over sorted frames.
  std::vector<std::size_t> radar_order(radar_frames.size()), lidar_order(lidar_frames.size());
  std::iota(radar_order.begin(), radar_order.end(), 0);
  std::iota(lidar_order.begin(), lidar_order.end(), 0);
  auto by_time = [](std::span<const TimedCloud> frames) {
    return [frames](std::size_t a, std::size_t b) { return frames[a].time_s < frames[b].time_s; };
  };
  std::sort(radar_order.begin(), radar_order.end(), by_time(radar_frames));
  std::sort(lidar_order.begin(), lidar_order.end(), by_time(lidar_frames));

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t li = 0;
  for (const std::size_t ri : radar_order) {
    if (li >= lidar_order.size()) break;
    const double t = radar_frames[ri].time_s;
    while (li + 1 < lidar_order.size() &&
           std::abs(lidar_frames[lidar_order[li + 1]].time_s - t) <=
               std::abs(lidar_frames[lidar_order[li]].time_s - t)) {
      ++li;
    }
    if (std::abs(lidar_frames[lidar_order[li]].time_s - t) <= tolerance) {
      pairs.emplace_back(ri, lidar_order[li]);
      ++li;
    }
  }

  TimeseriesResult result;
  result.unpaired_radar = radar_frames.size() - pairs.size();
  result.unpaired_lidar = lidar_frames.size() - pairs.size();
  if (pairs.empty()) throw EmptyResultError("metric_timeseries: no time-paired frames");

  const auto nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& [ri, lidx] : pairs) {
    for (const double cell : options.cell_sizes) {
      GridSpec spec = options.base;
      spec.cell_size_m = cell;
      const auto radar_grid = rasterize(radar_frames[ri].points, spec);
      const auto lidar_grid = rasterize(lidar_frames[lidx].points, spec);
      const auto j = jaccard(radar_grid, lidar_grid);

      MetricRow row;
      row.time_s = radar_frames[ri].time_s;
      row.cell_size_m = cell;
      row.jaccard = j.value;
      row.jaccard_degenerate = j.degenerate;
      auto safe_mean = [&](const OccupancyGrid& g, const OccupancyGrid& support) {
        try {
          return options.joint_support ? mean_cell_count_joint(g, support)
                                       : mean_cell_count(g, options.mean_mode);
        } catch (const DataError&) {
          return nan;
        }
      };
      row.mean_count_radar = safe_mean(radar_grid, lidar_grid);
      row.mean_count_lidar = safe_mean(lidar_grid, radar_grid);
      row.dropped_radar = radar_grid.dropped_points;
      row.dropped_lidar = lidar_grid.dropped_points;
      std::size_t zero_both = 0;
      for (std::size_t i = 0; i < radar_grid.counts.size(); ++i) {
        if (radar_grid.counts[i] == 0 && lidar_grid.counts[i] == 0) ++zero_both;
      }
      row.zero_cells = zero_both;
      result.rows.push_back(row);
    }
  }
  return result;
}

void write_metrics_csv(std::span<const MetricRow> rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  out << "time_s,cell_size_m,jaccard,mean_count_radar,mean_count_lidar,"
         "dropped_points_radar,dropped_points_lidar\n";
  out.precision(10);
  for (const auto& r : rows) {
    out << r.time_s << "," << r.cell_size_m << "," << r.jaccard << "," << r.mean_count_radar
        << "," << r.mean_count_lidar << "," << r.dropped_radar << "," << r.dropped_lidar << "\n";
  }
}

std::vector<MetricRow> read_metrics_csv(const std::string& path) {
  const auto lines = detail::read_lines(path);
  if (lines.empty()) throw EmptyResultError("metrics csv: empty file: " + path);
  const std::string expected =
      "time_s,cell_size_m,jaccard,mean_count_radar,mean_count_lidar,"
      "dropped_points_radar,dropped_points_lidar";
  if (detail::trim(lines[0]) != expected) {
    throw DataError("metrics csv: unexpected header in " + path);
  }
  std::vector<MetricRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto t = detail::trim(lines[i]);
    if (t.empty()) continue;
    const auto cols = detail::split(t, ',');
    if (cols.size() != 7) {
      throw DataError("metrics csv: malformed row at " + path + ":" + std::to_string(i + 1));
    }
    MetricRow row;
    const std::string what = "metrics row " + std::to_string(i + 1);
    row.time_s = detail::parse_double<DataError>(cols[0], what);
    row.cell_size_m = detail::parse_double<DataError>(cols[1], what);
    row.jaccard = detail::parse_double<DataError>(cols[2], what);
    row.mean_count_radar = detail::parse_double<DataError>(cols[3], what);
    row.mean_count_lidar = detail::parse_double<DataError>(cols[4], what);
    row.dropped_radar = static_cast<std::size_t>(detail::parse_int<DataError>(cols[5], what));
    row.dropped_lidar = static_cast<std::size_t>(detail::parse_int<DataError>(cols[6], what));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace vradar
