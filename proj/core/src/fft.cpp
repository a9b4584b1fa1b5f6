// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#include "proxmri/fft.hpp"

#include "proxmri/error.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace proxmri {

namespace {

// FFTW's planner is not thread-safe, execution of an existing plan on new
// arrays is. Plans are built once per (H, W, direction) and kept for the
// lifetime of the process.
class PlanCache
{
public:
  ~PlanCache()
  {
    for (auto &[key, plan] : plans_) { fftw_destroy_plan(plan); }
  }

  fftw_plan get(int height, int width, int sign)
  {
    std::lock_guard lock(mutex_);
    auto const key = std::make_tuple(height, width, sign);
    if (auto it = plans_.find(key); it != plans_.end()) { return it->second; }
    std::vector<Cx> in(static_cast<std::size_t>(height) * width), out(in.size());
    auto plan = fftw_plan_dft_2d(height, width, reinterpret_cast<fftw_complex *>(in.data()),
                                 reinterpret_cast<fftw_complex *>(out.data()), sign,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache &plan_cache()
{
  static PlanCache cache;
  return cache;
}

// Circular shift by half the extent on both axes. For even (power-of-two)
// sizes fftshift and ifftshift coincide.
std::vector<Cx> half_roll(ComplexImage const &img)
{
  int const h = img.height();
  int const w = img.width();
  int const sh = h / 2;
  int const sw = w / 2;
  std::vector<Cx> out(img.size());
  for (int r = 0; r < h; ++r) {
    int const rr = (r + sh) % h;
    for (int c = 0; c < w; ++c) { out[static_cast<std::size_t>(rr) * w + (c + sw) % w] = img(r, c); }
  }
  return out;
}

ComplexImage transform(ComplexImage const &img, int sign)
{
  if (!is_power_of_two(img.height()) || !is_power_of_two(img.width())) {
    throw DimensionError("FFT requires power-of-two dimensions");
  }
  auto in = half_roll(img);
  std::vector<Cx> out(in.size());
  fftw_execute_dft(plan_cache().get(img.height(), img.width(), sign), reinterpret_cast<fftw_complex *>(in.data()),
                   reinterpret_cast<fftw_complex *>(out.data()));
  double const scale = 1.0 / std::sqrt(static_cast<double>(img.size()));
  for (auto &z : out) { z *= scale; }
  return ComplexImage(img.height(), img.width(), half_roll(ComplexImage(img.height(), img.width(), std::move(out))));
}

} // namespace

ComplexImage fft2_centered(ComplexImage const &img) { return transform(img, FFTW_FORWARD); }

ComplexImage ifft2_centered(ComplexImage const &img) { return transform(img, FFTW_BACKWARD); }

} // namespace proxmri
