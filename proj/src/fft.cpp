// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 vradar contributors

#include "vradar/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace vradar {

std::vector<double> make_window(std::size_t n, Window window) {
  std::vector<double> w(n, 1.0);
  if (window == Window::hann && n > 1) {
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.5 * (1.0 - std::cos(2.0 * 3.14159265358979323846 * static_cast<double>(i) /
                                   static_cast<double>(n - 1)));
    }
  }
  return w;
}

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is. Plans are
// created FFTW_UNALIGNED so they stay valid for any std::vector storage.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t n) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::vector<std::complex<double>> in(n), out(n);
    fftw_plan plan = fftw_plan_dft_1d(
        static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
        reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw std::runtime_error("fftw_plan_dft_1d failed");
    plans_.emplace(n, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::unordered_map<std::size_t, fftw_plan> plans_;
};

}  // namespace

void fft_forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
  if (in.size() != out.size()) throw std::invalid_argument("fft_forward: size mismatch");
  if (in.empty()) return;
  fftw_plan plan = PlanCache::instance().get(in.size());
  // fftw_execute_dft does not modify the input for out-of-place c2c plans.
  fftw_execute_dft(plan,
                   reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

std::vector<std::complex<double>> windowed_spectrum(std::span<const std::complex<double>> x,
                                                    Window window) {
  const auto w = make_window(x.size(), window);
  double wsum = 0.0;
  for (double v : w) wsum += v;
  std::vector<std::complex<double>> buf(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) buf[i] = x[i] * w[i];
  std::vector<std::complex<double>> spec(x.size());
  fft_forward(buf, spec);
  const double scale = wsum > 0 ? 1.0 / wsum : 1.0;
  for (auto& v : spec) v *= scale;
  return spec;
}

}  // namespace vradar
