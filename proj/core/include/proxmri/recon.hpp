// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#pragma once

#include "proxmri/denoiser.hpp"
#include "proxmri/forward.hpp"

#include <span>
#include <string>
#include <vector>

namespace proxmri {

enum class ReconMethod
{
  Pgd,
  Sense,
  Fista,
  ZeroFilled
};

std::string to_string(ReconMethod method);
ReconMethod parse_recon_method(std::string const &name);

struct ReconConfig
{
  /// Mixing weight of the learned proximal step, in [0, 1].
  double lambda = 0.1;
  /// Gradient step alpha, in (0, 2).
  double step_size = 1.0;
  int iterations = 100;
  /// Replace step_size by 1 / ||A^H A|| estimated by power iteration.
  bool safe_step = false;

  void validate() const;
};

struct TracePoint
{
  int iteration;
  double psnr;
  double ssim;
};

struct ReconResult
{
  ComplexImage image;
  std::vector<TracePoint> trace; // filled when a reference is supplied
};

/// A^H y.
ComplexImage recon_zero_filled(ForwardModel const &model, KSpaceData const &y);

/// Learned proximal gradient descent, starting from x = A^H y:
///   m = x + alpha A^H (y - A x)
///   x = (1 - lambda) m + lambda r_theta(m)
/// With lambda == 0 the network is never evaluated and the loop is the plain
/// gradient (SENSE-type) iteration; `weights` may then be null.
ReconResult recon_pgd(ForwardModel const &model, KSpaceData const &y, DenoiserWeights const *weights,
                      ReconConfig const &cfg, ComplexImage const *reference = nullptr);

/// recon_pgd with lambda = 0.
ReconResult recon_sense(ForwardModel const &model, KSpaceData const &y, ReconConfig const &cfg,
                        ComplexImage const *reference = nullptr);

struct FistaResult
{
  ComplexImage image;
  std::vector<double> objective; // F(x_k) after each iteration
};

inline constexpr int kDefaultWaveletLevels = 4;

/// 0.5 ||A x - y||^2 + l1_lambda * ||W x||_1 with W the orthonormal Haar
/// transform.
double l1_wavelet_objective(ForwardModel const &model, KSpaceData const &y, ComplexImage const &x, double l1_lambda,
                            int levels = kDefaultWaveletLevels);

/// Monotone FISTA on the l1-wavelet objective with unit step, initialized at
/// A^H y. The objective trace is nonincreasing.
FistaResult recon_fista_l1wavelet(ForwardModel const &model, KSpaceData const &y, double l1_lambda, int iterations,
                                  int levels = kDefaultWaveletLevels);

struct SweepRow
{
  double lambda;
  int iteration;
  double psnr;
  double ssim;
};

/// Per-iteration PSNR/SSIM traces of recon_pgd for each lambda.
std::vector<SweepRow> lambda_sweep(ForwardModel const &model, KSpaceData const &y, DenoiserWeights const *weights,
                                   std::span<double const> lambdas, int iterations, ComplexImage const &reference,
                                   double step_size = 1.0);

} // namespace proxmri
