// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 vradar contributors

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "vradar/config.hpp"
#include "vradar/datacube.hpp"
#include "vradar/fft.hpp"
#include "vradar/pointcloud.hpp"

namespace vradar {

/// 2D spectrum per receive antenna, indexed [doppler][rx][range]. The fast-time
/// transform keeps the positive-frequency half (n_samples/2 range bins); the
/// Doppler axis keeps all n_chirps bins in FFT order (wrap-around, not shifted).
struct RangeDopplerMap {
  std::size_t n_doppler = 0;
  std::size_t n_rx = 0;
  std::size_t n_range = 0;
  double range_bin_m = 0.0;
  double doppler_bin_mps = 0.0;
  std::vector<std::complex<double>> values;

  std::size_t index(std::size_t d, std::size_t rx, std::size_t r) const {
    return (d * n_rx + rx) * n_range + r;
  }
  const std::complex<double>& at(std::size_t d, std::size_t rx, std::size_t r) const {
    return values[index(d, rx, r)];
  }
  std::complex<double>& at(std::size_t d, std::size_t rx, std::size_t r) {
    return values[index(d, rx, r)];
  }
};

/// Windowed fast-time FFT then windowed slow-time FFT, both scaled so a
/// full-scale sinusoid peaks at 0 dBFS.
RangeDopplerMap range_doppler(const DataCube& cube, Window window = Window::hann);

/// Noncoherent power integration over the physical RX channels: |.|^2 summed,
/// flattened [doppler][range].
std::vector<double> integrate_rx(const RangeDopplerMap& map);

struct CfarParams {
  std::size_t train_range = 8;    // training cells per side, range axis
  std::size_t train_doppler = 4;  // training cells per side, doppler axis
  std::size_t guard_range = 2;
  std::size_t guard_doppler = 2;
  double pfa = 1e-4;
};

struct CfarDetection {
  std::size_t range_bin = 0;
  std::size_t doppler_bin = 0;
  double snr_db = 0.0;
};

struct CfarResult {
  std::vector<CfarDetection> detections;  // adjacent crossings merged to local maxima
  std::size_t threshold_crossings = 0;    // raw count before merging
};

/// Cell-averaging CFAR on a power map (typically integrate_rx output). The
/// scale factor alpha = N*(pfa^(-1/N)-1) is recomputed per cell from the actual
/// training-cell count: doppler wraps, range truncates at the edges.
CfarResult cfar_detect(std::span<const double> power, std::size_t n_doppler,
                       std::size_t n_range, const CfarParams& params);

/// Quadratic three-point peak interpolation on log-magnitudes. Returns the
/// fractional offset clamped to [-0.5, 0.5]; a flat triple yields 0.
double interpolate_peak(double m_left, double m_center, double m_right);

struct DemuxResult {
  int doppler_bin = 0;       // true Doppler bin, signed, within the per-TX sub-band
  bool ambiguous = false;    // within the guard distance of a sub-band edge
  std::vector<std::complex<double>> snapshot;  // n_tx*n_rx values, TX-major
};

/// Doppler-division demultiplex: the spectrum splits into n_tx sub-bands of
/// n_chirps/n_tx bins and TX i appears shifted by i*n_chirps/n_tx bins. Gathers
/// the virtual-array snapshot for the detection at (range_bin, doppler_bin) and
/// maps the peak back to the signed true Doppler bin.
DemuxResult ddma_demux(const RangeDopplerMap& map, std::size_t range_bin,
                       std::size_t doppler_bin, std::size_t n_tx,
                       std::size_t edge_guard_bins = 2);

struct AngleEstimate {
  double azimuth_deg = 0.0;
  double confidence = 0.0;  // peak power over total spectrum power, in (0, 1]
};

/// Windowed zero-padded FFT over the virtual array (must be a uniform linear
/// array); the interpolated peak gives sin(azimuth) = f_spatial / spacing.
AngleEstimate estimate_angle(std::span<const std::complex<double>> snapshot,
                             const ArrayGeometry& geometry, std::size_t zero_pad = 256,
                             Window window = Window::hann);

/// A detected target after CFAR, alias grouping and DDMA demux.
struct Detection {
  double range_bin = 0.0;    // integer bin + fractional offset
  double doppler_bin = 0.0;  // signed true Doppler bin + fractional offset
  double snr_db = 0.0;
  double power_db = 0.0;     // integrated power at the peak, dBFS per channel
  bool doppler_ambiguous = false;
  std::vector<std::complex<double>> snapshot;
};

struct PipelineParams {
  Window window = Window::hann;
  CfarParams cfar;
  std::size_t zero_pad = 256;       // angle FFT length
  std::size_t merge_radius = 1;     // bins, for alias/cluster grouping
  std::size_t subband_guard = 2;    // bins, Doppler ambiguity flagging
};

/// CFAR detections grouped across DDMA aliases (same range, same Doppler
/// position modulo the sub-band width) and refined by peak interpolation.
std::vector<Detection> extract_detections(const RangeDopplerMap& map, std::size_t n_tx,
                                          const PipelineParams& params);

/// Full single-frame pipeline: range/Doppler transform, noncoherent RX
/// integration, CFAR, DDMA demux, angle estimation, point construction.
PointCloud process_frame(const DataCube& cube, const ArrayGeometry& geometry,
                         const PipelineParams& params = {});

}  // namespace vradar
