// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#include "proxmri/recon.hpp"

#include "proxmri/error.hpp"
#include "proxmri/linalg.hpp"
#include "proxmri/metrics.hpp"
#include "proxmri/wavelet.hpp"

#include <cmath>

namespace proxmri {

std::string to_string(ReconMethod method)
{
  switch (method) {
  case ReconMethod::Pgd: return "pgd";
  case ReconMethod::Sense: return "sense";
  case ReconMethod::Fista: return "fista";
  case ReconMethod::ZeroFilled: return "zerofill";
  }
  return "unknown";
}

ReconMethod parse_recon_method(std::string const &name)
{
  if (name == "pgd") { return ReconMethod::Pgd; }
  if (name == "sense") { return ReconMethod::Sense; }
  if (name == "fista") { return ReconMethod::Fista; }
  if (name == "zerofill") { return ReconMethod::ZeroFilled; }
  throw ParameterError("unknown reconstruction method '" + name + "' (expected pgd, sense, fista or zerofill)");
}

void ReconConfig::validate() const
{
  if (!(lambda >= 0.0 && lambda <= 1.0)) { throw ParameterError("lambda must lie in [0, 1]"); }
  if (!(step_size > 0.0 && step_size < 2.0)) { throw ParameterError("step size must lie in (0, 2)"); }
  if (iterations < 1) { throw ParameterError("iterations must be positive"); }
}

ComplexImage recon_zero_filled(ForwardModel const &model, KSpaceData const &y) { return apply_AH(model, y); }

ReconResult recon_pgd(ForwardModel const &model, KSpaceData const &y, DenoiserWeights const *weights,
                      ReconConfig const &cfg, ComplexImage const *reference)
{
  cfg.validate();
  double const lambda = cfg.lambda;
  if (lambda > 0.0 && weights == nullptr) { throw ParameterError("lambda > 0 requires denoiser weights"); }
  double alpha = cfg.step_size;
  if (cfg.safe_step) {
    double const norm = spectral_norm_estimate([&](ComplexImage const &v) { return apply_AHA(model, v); },
                                               model.height(), model.width(), 50, 0);
    if (norm > 0.0) { alpha = 1.0 / norm; }
  }

  ReconResult result;
  ComplexImage x = apply_AH(model, y);
  ComplexImage m(x.height(), x.width());
  for (int it = 1; it <= cfg.iterations; ++it) {
    KSpaceData residual = apply_A(model, x);
    for (std::size_t i = 0; i < residual.data().size(); ++i) { residual.data()[i] = y.data()[i] - residual.data()[i]; }
    ComplexImage const g = apply_AH(model, residual);
    for (std::size_t i = 0; i < m.size(); ++i) { m[i] = x[i] + alpha * g[i]; }
    if (lambda == 0.0) {
      x = m;
    } else {
      if (!m.all_finite()) { throw DivergenceError("reconstruction produced non-finite values", it); }
      ComplexImage const prox = proximator_forward(*weights, m);
      for (std::size_t i = 0; i < x.size(); ++i) { x[i] = (1.0 - lambda) * m[i] + lambda * prox[i]; }
    }
    if (!x.all_finite()) { throw DivergenceError("reconstruction produced non-finite values", it); }
    if (reference) { result.trace.push_back({it, psnr(x, *reference), ssim(x, *reference)}); }
  }
  result.image = std::move(x);
  return result;
}

ReconResult recon_sense(ForwardModel const &model, KSpaceData const &y, ReconConfig const &cfg,
                        ComplexImage const *reference)
{
  ReconConfig sense = cfg;
  sense.lambda = 0.0;
  return recon_pgd(model, y, nullptr, sense, reference);
}

double l1_wavelet_objective(ForwardModel const &model, KSpaceData const &y, ComplexImage const &x, double l1_lambda,
                            int levels)
{
  KSpaceData r = apply_A(model, x);
  double fidelity = 0.0;
  for (std::size_t i = 0; i < r.data().size(); ++i) { fidelity += std::norm(r.data()[i] - y.data()[i]); }
  return 0.5 * fidelity + l1_lambda * l1_norm(haar2_forward(x, levels));
}

FistaResult recon_fista_l1wavelet(ForwardModel const &model, KSpaceData const &y, double l1_lambda, int iterations,
                                  int levels)
{
  if (!(l1_lambda >= 0.0)) { throw ParameterError("l1 lambda must be nonnegative"); }
  if (iterations < 1) { throw ParameterError("iterations must be positive"); }
  constexpr double step = 1.0;

  // Monotone variant (Beck & Teboulle): the iterate only moves when the
  // objective does not increase, the momentum still follows the prox point.
  FistaResult result;
  ComplexImage x = apply_AH(model, y);
  ComplexImage z = x;
  double fx = l1_wavelet_objective(model, y, x, l1_lambda, levels);
  double t = 1.0;
  for (int it = 1; it <= iterations; ++it) {
    ComplexImage const g = dc_gradient(model, z, y);
    ComplexImage u = z;
    axpy(Cx(-step, 0.0), g, u);
    ComplexImage const p = haar2_inverse(soft_threshold(haar2_forward(u, levels), l1_lambda * step));
    if (!p.all_finite()) { throw DivergenceError("FISTA produced non-finite values", it); }
    double const fp = l1_wavelet_objective(model, y, p, l1_lambda, levels);
    ComplexImage const x_prev = x;
    if (fp <= fx) {
      x = p;
      fx = fp;
    }
    double const t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    double const to_prox = t / t_next;
    double const to_prev = (t - 1.0) / t_next;
    for (std::size_t i = 0; i < z.size(); ++i) { z[i] = x[i] + to_prox * (p[i] - x[i]) + to_prev * (x[i] - x_prev[i]); }
    t = t_next;
    result.objective.push_back(fx);
  }
  result.image = std::move(x);
  return result;
}

std::vector<SweepRow> lambda_sweep(ForwardModel const &model, KSpaceData const &y, DenoiserWeights const *weights,
                                   std::span<double const> lambdas, int iterations, ComplexImage const &reference,
                                   double step_size)
{
  std::vector<SweepRow> rows;
  rows.reserve(lambdas.size() * static_cast<std::size_t>(iterations));
  for (double lambda : lambdas) {
    ReconConfig cfg;
    cfg.lambda = lambda;
    cfg.iterations = iterations;
    cfg.step_size = step_size;
    auto const res = recon_pgd(model, y, weights, cfg, &reference);
    for (auto const &p : res.trace) { rows.push_back({lambda, p.iteration, p.psnr, p.ssim}); }
  }
  return rows;
}

} // namespace proxmri
