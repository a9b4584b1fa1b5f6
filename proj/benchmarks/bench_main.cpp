// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#include "proxmri/denoiser.hpp"
#include "proxmri/fft.hpp"
#include "proxmri/forward.hpp"
#include "proxmri/metrics.hpp"
#include "proxmri/phantom.hpp"
#include "proxmri/recon.hpp"
#include "proxmri/sampling.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace proxmri;

namespace {

ComplexImage phantom_of(int n) { return generate_phantom(1, n); }

void BM_Fft2(benchmark::State &state)
{
  int const n = static_cast<int>(state.range(0));
  auto const x = phantom_of(n);
  for (auto _ : state) { benchmark::DoNotOptimize(fft2_centered(x)); }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Fft2)->Arg(32)->Arg(64)->Arg(128)->Arg(256);

void BM_ApplyA(benchmark::State &state)
{
  int const n = static_cast<int>(state.range(0));
  ForwardModel const model(radial_mask(n, n, 40), generate_coil_maps(3, 4, n));
  auto const x = phantom_of(n);
  for (auto _ : state) { benchmark::DoNotOptimize(apply_A(model, x)); }
}
BENCHMARK(BM_ApplyA)->Arg(64)->Arg(128);

void BM_ApplyAHA(benchmark::State &state)
{
  int const n = static_cast<int>(state.range(0));
  ForwardModel const model(radial_mask(n, n, 40), generate_coil_maps(3, 4, n));
  auto const x = phantom_of(n);
  for (auto _ : state) { benchmark::DoNotOptimize(apply_AHA(model, x)); }
}
BENCHMARK(BM_ApplyAHA)->Arg(64)->Arg(128);

void BM_NetForward(benchmark::State &state)
{
  int const n = static_cast<int>(state.range(0));
  auto const w = DenoiserWeights::random(NetConfig{}, 5);
  auto const x = phantom_of(n);
  for (auto _ : state) { benchmark::DoNotOptimize(net_forward(w, x)); }
}
BENCHMARK(BM_NetForward)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_Proximator(benchmark::State &state)
{
  auto const w = DenoiserWeights::random(NetConfig{}, 5);
  auto const x = phantom_of(64);
  for (auto _ : state) { benchmark::DoNotOptimize(proximator_forward(w, x)); }
}
BENCHMARK(BM_Proximator)->Unit(benchmark::kMillisecond);

void BM_TrainItem(benchmark::State &state)
{
  auto const w = DenoiserWeights::random(NetConfig{}, 5);
  auto const clean = phantom_of(32);
  auto const noisy = add_gaussian_noise(clean, 0.03, 9);
  std::vector<double> grad(w.params().size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(item_loss_and_gradient(w, clean, noisy, 0.01, 1, 1e-3, 11, grad));
  }
}
BENCHMARK(BM_TrainItem)->Unit(benchmark::kMillisecond);

void BM_Ssim(benchmark::State &state)
{
  int const n = static_cast<int>(state.range(0));
  auto const ref = phantom_of(n);
  auto const x = add_gaussian_noise(ref, 0.05, 2);
  for (auto _ : state) { benchmark::DoNotOptimize(ssim(x, ref)); }
}
BENCHMARK(BM_Ssim)->Arg(64)->Arg(256);

void BM_PgdIteration(benchmark::State &state)
{
  int const n = 64;
  ForwardModel const model(radial_mask(n, n, 40), generate_coil_maps(3, 4, n));
  auto const y = simulate_acquisition(phantom_of(n), model.maps(), model.mask(), 0.0, 4);
  auto const w = DenoiserWeights::random(NetConfig{}, 5);
  ReconConfig rc;
  rc.iterations = 1;
  for (auto _ : state) { benchmark::DoNotOptimize(recon_pgd(model, y, &w, rc).image); }
}
BENCHMARK(BM_PgdIteration)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
