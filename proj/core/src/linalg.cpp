// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#include "proxmri/linalg.hpp"

#include "proxmri/error.hpp"
#include "proxmri/rng.hpp"

namespace proxmri {

double spectral_norm_estimate(LinearMap const &apply, int height, int width, int iters, std::uint64_t seed)
{
  if (iters < 1) { throw ParameterError("power iteration needs at least one iteration"); }
  Rng rng(derive_seed(seed, "power-iteration"));
  ComplexImage x(height, width);
  for (auto &z : x.data()) { z = Cx(rng.normal(), rng.normal()); }
  double n = norm2(x);
  x = (1.0 / n) * x;

  // For a PSD map ||A x_k|| with x_k = A^k x_0 / ||A^k x_0|| is nondecreasing.
  double estimate = 0.0;
  for (int it = 0; it < iters; ++it) {
    ComplexImage y = apply(x);
    n = norm2(y);
    if (n == 0.0) { return 0.0; }
    estimate = n;
    x = (1.0 / n) * y;
  }
  return estimate;
}

} // namespace proxmri
