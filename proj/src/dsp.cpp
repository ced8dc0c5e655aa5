// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 vradar contributors

#include "vradar/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vradar/errors.hpp"

namespace vradar {

namespace {

constexpr double kPi = 3.14159265358979323846;

double log_power(double p) { return std::log10(p + 1e-300); }

std::size_t circ_dist(std::size_t a, std::size_t b, std::size_t m) {
  const std::size_t d = a > b ? a - b : b - a;
  return std::min(d, m - d);
}

}  // namespace

RangeDopplerMap range_doppler(const DataCube& cube, Window window) {
  const auto& c = cube.config;
  if (cube.samples.size() != cube.sample_count()) {
    throw DataError("range_doppler: cube dimensions do not match its config");
  }
  const std::size_t n_samples = c.n_samples;
  const std::size_t n_chirps = c.n_chirps;
  const std::size_t n_rx = c.n_rx;
  const std::size_t n_range = n_samples / 2;

  RangeDopplerMap map;
  map.n_doppler = n_chirps;
  map.n_rx = n_rx;
  map.n_range = n_range;
  map.range_bin_m = range_bin_m(c);
  map.doppler_bin_mps =
      c.wavelength_m() / (2.0 * static_cast<double>(n_chirps) * c.chirp_duration_s);
  map.values.assign(n_chirps * n_rx * n_range, {0.0, 0.0});

  const auto w_fast = make_window(n_samples, window);
  const auto w_slow = make_window(n_chirps, window);
  const double fast_scale = 1.0 / std::accumulate(w_fast.begin(), w_fast.end(), 0.0);
  const double slow_scale = 1.0 / std::accumulate(w_slow.begin(), w_slow.end(), 0.0);

  // Fast-time transform, positive-frequency half kept: stage1[k][rx][r].
  std::vector<std::complex<double>> stage1(n_chirps * n_rx * n_range);
  std::vector<std::complex<double>> in(n_samples), out(n_samples);
  for (std::size_t k = 0; k < n_chirps; ++k) {
    for (std::size_t rx = 0; rx < n_rx; ++rx) {
      const std::complex<float>* src = cube.samples.data() + cube.index(k, rx, 0);
      for (std::size_t n = 0; n < n_samples; ++n) {
        in[n] = std::complex<double>(src[n].real(), src[n].imag()) * w_fast[n];
      }
      fft_forward(in, out);
      std::complex<double>* dst = stage1.data() + (k * n_rx + rx) * n_range;
      for (std::size_t r = 0; r < n_range; ++r) dst[r] = out[r] * fast_scale;
    }
  }

  // Slow-time transform per (rx, range bin).
  std::vector<std::complex<double>> in2(n_chirps), out2(n_chirps);
  for (std::size_t rx = 0; rx < n_rx; ++rx) {
    for (std::size_t r = 0; r < n_range; ++r) {
      for (std::size_t k = 0; k < n_chirps; ++k) {
        in2[k] = stage1[(k * n_rx + rx) * n_range + r] * w_slow[k];
      }
      fft_forward(in2, out2);
      for (std::size_t d = 0; d < n_chirps; ++d) {
        map.at(d, rx, r) = out2[d] * slow_scale;
      }
    }
  }
  return map;
}

std::vector<double> integrate_rx(const RangeDopplerMap& map) {
  std::vector<double> power(map.n_doppler * map.n_range, 0.0);
  for (std::size_t d = 0; d < map.n_doppler; ++d) {
    for (std::size_t rx = 0; rx < map.n_rx; ++rx) {
      const std::complex<double>* row = map.values.data() + (d * map.n_rx + rx) * map.n_range;
      double* dst = power.data() + d * map.n_range;
      for (std::size_t r = 0; r < map.n_range; ++r) dst[r] += std::norm(row[r]);
    }
  }
  return power;
}

CfarResult cfar_detect(std::span<const double> power, std::size_t n_doppler,
                       std::size_t n_range, const CfarParams& params) {
  if (power.size() != n_doppler * n_range) {
    throw ConfigError("cfar_detect: power size does not match dimensions");
  }
  if (!(params.pfa > 0.0 && params.pfa < 1.0)) {
    throw ConfigError("cfar_detect: pfa must lie in (0, 1)");
  }
  const std::size_t wd = params.train_doppler + params.guard_doppler;
  const std::size_t wr = params.train_range + params.guard_range;
  if (params.train_doppler == 0 || params.train_range == 0) {
    throw ConfigError("cfar_detect: need at least one training cell per side");
  }
  if (n_doppler < 2 * wd + 1 || n_range < wr + 1) {
    throw ConfigError("cfar_detect: map smaller than the CFAR window");
  }

  const std::size_t gd = params.guard_doppler;
  const std::size_t gr = params.guard_range;
  auto p = [&](std::size_t d, std::size_t r) { return power[d * n_range + r]; };

  // Circular column sums over the doppler axis for the outer and inner
  // (guard+cell) windows, then prefix sums along range: O(cells) total.
  std::vector<double> col_outer(n_doppler * n_range, 0.0), col_inner(n_doppler * n_range, 0.0);
  auto build_columns = [&](std::vector<double>& dst, std::size_t half) {
    for (std::size_t r = 0; r < n_range; ++r) {
      double s = 0.0;
      for (std::size_t k = 0; k <= 2 * half; ++k) {
        s += p((n_doppler - half + k) % n_doppler, r);
      }
      dst[0 * n_range + r] = s;
      for (std::size_t d = 1; d < n_doppler; ++d) {
        s += p((d + half) % n_doppler, r);
        s -= p((d - 1 + n_doppler - half) % n_doppler, r);
        dst[d * n_range + r] = s;
      }
    }
  };
  build_columns(col_outer, wd);
  build_columns(col_inner, gd);

  // Prefix along range (in place, per doppler row).
  for (std::size_t d = 0; d < n_doppler; ++d) {
    for (std::size_t r = 1; r < n_range; ++r) {
      col_outer[d * n_range + r] += col_outer[d * n_range + r - 1];
      col_inner[d * n_range + r] += col_inner[d * n_range + r - 1];
    }
  }
  auto box = [&](const std::vector<double>& pre, std::size_t d, std::size_t lo, std::size_t hi) {
    const double right = pre[d * n_range + hi];
    return lo == 0 ? right : right - pre[d * n_range + lo - 1];
  };

  // Training-cell count varies only along range (doppler wraps); precompute the
  // per-column count and threshold scale alpha = N * (pfa^(-1/N) - 1).
  std::vector<double> alpha_col(n_range, 0.0);
  std::vector<double> count_col(n_range, 0.0);
  std::vector<std::size_t> lo_o(n_range), hi_o(n_range), lo_i(n_range), hi_i(n_range);
  for (std::size_t r = 0; r < n_range; ++r) {
    lo_o[r] = r >= wr ? r - wr : 0;
    hi_o[r] = std::min(n_range - 1, r + wr);
    lo_i[r] = r >= gr ? r - gr : 0;
    hi_i[r] = std::min(n_range - 1, r + gr);
    const double n_train =
        static_cast<double>((2 * wd + 1) * (hi_o[r] - lo_o[r] + 1)) -
        static_cast<double>((2 * gd + 1) * (hi_i[r] - lo_i[r] + 1));
    count_col[r] = n_train;
    alpha_col[r] = n_train * (std::pow(params.pfa, -1.0 / n_train) - 1.0);
  }

  CfarResult result;
  std::vector<std::uint8_t> mask(n_doppler * n_range, 0);
  for (std::size_t d = 0; d < n_doppler; ++d) {
    for (std::size_t r = 0; r < n_range; ++r) {
      const double train_sum =
          box(col_outer, d, lo_o[r], hi_o[r]) - box(col_inner, d, lo_i[r], hi_i[r]);
      if (train_sum <= 0.0) continue;
      const double noise = train_sum / count_col[r];
      if (p(d, r) > alpha_col[r] * noise) {
        mask[d * n_range + r] = 1;
        ++result.threshold_crossings;
      }
    }
  }

  // Merge adjacent crossings to local maxima: keep a crossing only when it
  // dominates its 8-neighborhood (doppler wraps, range clamps). Ties resolve
  // to the earlier cell in scan order so flat plateaus yield one detection.
  for (std::size_t cur = 0; cur < mask.size(); ++cur) {
    if (!mask[cur]) continue;
    const auto d = static_cast<long long>(cur / n_range);
    const auto r = static_cast<long long>(cur % n_range);
    bool is_peak = true;
    for (long long dd = -1; dd <= 1 && is_peak; ++dd) {
      for (long long dr = -1; dr <= 1 && is_peak; ++dr) {
        if (dd == 0 && dr == 0) continue;
        if (r + dr < 0 || r + dr >= static_cast<long long>(n_range)) continue;
        const auto nd = static_cast<std::size_t>(
            (d + dd + static_cast<long long>(n_doppler)) % static_cast<long long>(n_doppler));
        const std::size_t ni = nd * n_range + static_cast<std::size_t>(r + dr);
        if (power[ni] > power[cur] || (power[ni] == power[cur] && ni < cur)) is_peak = false;
      }
    }
    if (!is_peak) continue;
    const auto dc = static_cast<std::size_t>(d);
    const auto rc = static_cast<std::size_t>(r);
    const double train_sum =
        box(col_outer, dc, lo_o[rc], hi_o[rc]) - box(col_inner, dc, lo_i[rc], hi_i[rc]);
    const double noise = train_sum / count_col[rc];
    result.detections.push_back({rc, dc, 10.0 * std::log10(power[cur] / noise)});
  }
  std::sort(result.detections.begin(), result.detections.end(),
            [](const CfarDetection& a, const CfarDetection& b) {
              return a.range_bin != b.range_bin ? a.range_bin < b.range_bin
                                                : a.doppler_bin < b.doppler_bin;
            });
  return result;
}

double interpolate_peak(double m_left, double m_center, double m_right) {
  const double denom = m_left - 2.0 * m_center + m_right;
  const double scale = std::max({std::abs(m_left), std::abs(m_center), std::abs(m_right), 1.0});
  if (std::abs(denom) < 1e-12 * scale) return 0.0;
  const double delta = 0.5 * (m_left - m_right) / denom;
  return std::clamp(delta, -0.5, 0.5);
}

DemuxResult ddma_demux(const RangeDopplerMap& map, std::size_t range_bin,
                       std::size_t doppler_bin, std::size_t n_tx,
                       std::size_t edge_guard_bins) {
  if (n_tx == 0 || map.n_doppler % n_tx != 0) {
    throw ConfigError("ddma_demux: doppler bin count must be a multiple of n_tx");
  }
  if (range_bin >= map.n_range || doppler_bin >= map.n_doppler) {
    throw DataError("ddma_demux: detection outside the map");
  }
  const std::size_t n = map.n_doppler;
  const std::size_t sub = n / n_tx;  // sub-band width in bins

  const std::size_t pos = doppler_bin % sub;
  const int signed_bin = pos < (sub + 1) / 2 ? static_cast<int>(pos)
                                             : static_cast<int>(pos) - static_cast<int>(sub);

  DemuxResult result;
  result.doppler_bin = signed_bin;
  // The sub-band edge sits at +-sub/2 (one circular point, pos == sub/2).
  result.ambiguous =
      std::abs(static_cast<double>(pos) - static_cast<double>(sub) / 2.0) <=
      static_cast<double>(edge_guard_bins);

  const std::size_t base = static_cast<std::size_t>(
      (signed_bin + static_cast<int>(n)) % static_cast<int>(n));
  result.snapshot.resize(n_tx * map.n_rx);
  for (std::size_t tx = 0; tx < n_tx; ++tx) {
    const std::size_t alias = (base + tx * sub) % n;
    for (std::size_t rx = 0; rx < map.n_rx; ++rx) {
      result.snapshot[tx * map.n_rx + rx] = map.at(alias, rx, range_bin);
    }
  }
  return result;
}

AngleEstimate estimate_angle(std::span<const std::complex<double>> snapshot,
                             const ArrayGeometry& geometry, std::size_t zero_pad,
                             Window window) {
  const auto positions = geometry.virtual_positions();
  if (snapshot.size() != positions.size()) {
    throw ConfigError("estimate_angle: snapshot length must equal the virtual element count");
  }
  double energy = 0.0;
  for (const auto& v : snapshot) energy += std::norm(v);
  if (energy <= 0.0) throw DataError("estimate_angle: all-zero snapshot");

  // Sort elements by position and require a uniform linear array.
  std::vector<std::size_t> order(positions.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return positions[a] < positions[b]; });
  const std::size_t n_elem = order.size();
  double spacing = 0.0;
  if (n_elem > 1) {
    spacing = positions[order[1]] - positions[order[0]];
    for (std::size_t i = 1; i + 1 < n_elem; ++i) {
      const double step = positions[order[i + 1]] - positions[order[i]];
      if (std::abs(step - spacing) > 1e-9) {
        throw ConfigError("estimate_angle: virtual array is not a uniform linear array");
      }
    }
  }
  if (spacing <= 0.0) throw ConfigError("estimate_angle: need at least two virtual elements");

  const auto w = make_window(n_elem, window);
  const std::size_t n_fft = std::max(zero_pad, n_elem);
  std::vector<std::complex<double>> in(n_fft, {0.0, 0.0}), out(n_fft);
  for (std::size_t i = 0; i < n_elem; ++i) in[i] = snapshot[order[i]] * w[i];
  fft_forward(in, out);

  std::size_t peak = 0;
  double peak_power = 0.0, total_power = 0.0;
  for (std::size_t i = 0; i < n_fft; ++i) {
    const double pw = std::norm(out[i]);
    total_power += pw;
    if (pw > peak_power) {
      peak_power = pw;
      peak = i;
    }
  }
  const double left = std::norm(out[(peak + n_fft - 1) % n_fft]);
  const double right = std::norm(out[(peak + 1) % n_fft]);
  double delta = 0.0;
  if (peak_power >= left && peak_power >= right) {
    delta = interpolate_peak(log_power(left), log_power(peak_power), log_power(right));
  }

  double bin = static_cast<double>(peak) + delta;
  if (bin > static_cast<double>(n_fft) / 2.0) bin -= static_cast<double>(n_fft);
  const double f_spatial = bin / static_cast<double>(n_fft);  // cycles per element
  const double sin_az = std::clamp(f_spatial / spacing, -1.0, 1.0);

  AngleEstimate est;
  est.azimuth_deg = std::asin(sin_az) * 180.0 / kPi;
  est.confidence = total_power > 0 ? peak_power / total_power : 0.0;
  return est;
}

std::vector<Detection> extract_detections(const RangeDopplerMap& map, std::size_t n_tx,
                                          const PipelineParams& params) {
  if (n_tx == 0 || map.n_doppler % n_tx != 0) {
    throw ConfigError("extract_detections: doppler bins must divide into n_tx sub-bands");
  }
  const std::size_t sub = map.n_doppler / n_tx;
  const auto power = integrate_rx(map);
  const auto cfar = cfar_detect(power, map.n_doppler, map.n_range, params.cfar);

  // A target transmitted by n_tx TXs shows up as n_tx equal-power Doppler
  // aliases; fold representatives that agree in range and in position within
  // the sub-band into one detection anchored at the strongest alias.
  struct Candidate {
    CfarDetection det;
    double power;
    bool claimed = false;
  };
  std::vector<Candidate> cands;
  cands.reserve(cfar.detections.size());
  for (const auto& d : cfar.detections) {
    cands.push_back({d, power[d.doppler_bin * map.n_range + d.range_bin], false});
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.power != b.power) return a.power > b.power;
    if (a.det.range_bin != b.det.range_bin) return a.det.range_bin < b.det.range_bin;
    return a.det.doppler_bin < b.det.doppler_bin;
  });

  std::vector<Detection> detections;
  for (auto& anchor : cands) {
    if (anchor.claimed) continue;
    anchor.claimed = true;
    const std::size_t ar = anchor.det.range_bin;
    const std::size_t ap = anchor.det.doppler_bin % sub;
    for (auto& other : cands) {
      if (other.claimed) continue;
      const std::size_t dr = other.det.range_bin > ar ? other.det.range_bin - ar
                                                      : ar - other.det.range_bin;
      if (dr <= params.merge_radius &&
          circ_dist(other.det.doppler_bin % sub, ap, sub) <= params.merge_radius) {
        other.claimed = true;
      }
    }

    const std::size_t d = anchor.det.doppler_bin;
    const std::size_t r = anchor.det.range_bin;
    auto demux = ddma_demux(map, r, d, n_tx, params.subband_guard);

    auto fractional = [&](double l, double c, double rr) {
      return (c >= l && c >= rr) ? interpolate_peak(log_power(l), log_power(c), log_power(rr))
                                 : 0.0;
    };
    double delta_r = 0.0;
    if (r > 0 && r + 1 < map.n_range) {
      delta_r = fractional(power[d * map.n_range + r - 1], power[d * map.n_range + r],
                           power[d * map.n_range + r + 1]);
    }
    const std::size_t d_prev = (d + map.n_doppler - 1) % map.n_doppler;
    const std::size_t d_next = (d + 1) % map.n_doppler;
    const double delta_d = fractional(power[d_prev * map.n_range + r],
                                      power[d * map.n_range + r],
                                      power[d_next * map.n_range + r]);

    Detection det;
    det.range_bin = static_cast<double>(r) + delta_r;
    det.doppler_bin = static_cast<double>(demux.doppler_bin) + delta_d;
    det.snr_db = anchor.det.snr_db;
    det.power_db = 10.0 * std::log10(anchor.power / static_cast<double>(map.n_rx) + 1e-300);
    det.doppler_ambiguous = demux.ambiguous;
    det.snapshot = std::move(demux.snapshot);
    detections.push_back(std::move(det));
  }

  std::sort(detections.begin(), detections.end(), [](const Detection& a, const Detection& b) {
    return a.range_bin != b.range_bin ? a.range_bin < b.range_bin : a.doppler_bin < b.doppler_bin;
  });
  return detections;
}

PointCloud process_frame(const DataCube& cube, const ArrayGeometry& geometry,
                         const PipelineParams& params) {
  {
    const auto violations = validate(cube.config, geometry);
    if (!violations.empty()) {
      std::string codes;
      for (const auto& v : violations) codes += (codes.empty() ? "" : ", ") + v.code;
      throw ConfigError("process_frame: invalid config: " + codes);
    }
  }
  const auto map = range_doppler(cube, params.window);
  const auto detections = extract_detections(map, cube.config.n_tx, params);

  PointCloud cloud;
  cloud.frame = cube.frame;
  cloud.timestamp_s = cube.timestamp_s;
  cloud.sensor_id = cube.sensor_id;
  cloud.points.reserve(detections.size());
  for (const auto& det : detections) {
    const auto angle = estimate_angle(det.snapshot, geometry, params.zero_pad, params.window);
    RadarPoint p;
    p.range_m = det.range_bin * map.range_bin_m;
    p.azimuth_deg = angle.azimuth_deg;
    p.v_r_mps = det.doppler_bin * map.doppler_bin_mps;
    const double az = angle.azimuth_deg * kPi / 180.0;
    p.x = p.range_m * std::cos(az);
    p.y = p.range_m * std::sin(az);
    p.z = 0.0;
    p.power_db = det.power_db;
    cloud.points.push_back(p);
  }
  return cloud;
}

}  // namespace vradar
