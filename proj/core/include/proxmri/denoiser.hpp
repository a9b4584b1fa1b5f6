// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#pragma once

#include "proxmri/image.hpp"
#include "proxmri/phantom.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

namespace proxmri {

/// Architecture of the denoising block and its unrolled wrapper.
///
/// The block is a fully convolutional residual network on the
/// two-channel (real, imaginary) split of the image:
///   conv(2->F)+ReLU, (depth-2) x [conv(F->F)+ReLU], conv(F->2), plus the
///   input added back at the end.
/// The unrolled proximal operator runs `unroll_steps` iterations of
///   g = x + alpha * (v - x),  x = block(g)
/// starting from x = v, with the block weights shared across iterations.
struct NetConfig
{
  int filters = 16;
  int depth = 4;
  int kernel = 3;
  int unroll_steps = 3;
  double inner_alpha = 0.5;

  void validate() const;
  friend bool operator==(NetConfig const &, NetConfig const &) = default;
};

struct TrainingMeta
{
  double sigma = 0.0;
  int epochs = 0;
  std::uint64_t seed = 0;
  friend bool operator==(TrainingMeta const &, TrainingMeta const &) = default;
};

/// Shape of conv layer `index` for a given config.
struct LayerShape
{
  int in_channels;
  int out_channels;
  std::size_t offset; // into the flat parameter vector
  std::size_t kernel_size() const { return static_cast<std::size_t>(out_channels) * in_channels * 9; }
  std::size_t size() const { return kernel_size() + static_cast<std::size_t>(out_channels); }
};

std::vector<LayerShape> layer_shapes(NetConfig const &config);
std::size_t parameter_count(NetConfig const &config);

/// Network parameters in one flat vector. Layer order is input to output;
/// within a layer the kernel is stored [out][in][ky][kx] followed by the
/// `out` biases.
class DenoiserWeights
{
public:
  DenoiserWeights() = default;
  DenoiserWeights(NetConfig config, std::vector<double> params, TrainingMeta meta = {});

  static DenoiserWeights zeros(NetConfig const &config);
  /// He-normal hidden layers, last layer scaled down so the block starts
  /// close to the identity. Biases zero.
  static DenoiserWeights random(NetConfig const &config, std::uint64_t seed);

  NetConfig const &config() const noexcept { return config_; }
  TrainingMeta const &meta() const noexcept { return meta_; }
  void set_meta(TrainingMeta meta) { meta_ = meta; }
  std::span<double const> params() const noexcept { return params_; }
  std::span<double> params() noexcept { return params_; }
  std::vector<LayerShape> const &layers() const noexcept { return layers_; }

  std::span<double const> kernel(int layer) const;
  std::span<double const> bias(int layer) const;
  std::span<double> kernel(int layer);
  std::span<double> bias(int layer);

  bool all_finite() const noexcept;

  friend bool operator==(DenoiserWeights const &a, DenoiserWeights const &b)
  {
    return a.config_ == b.config_ && a.meta_ == b.meta_ && a.params_ == b.params_;
  }

private:
  NetConfig config_;
  TrainingMeta meta_;
  std::vector<double> params_;
  std::vector<LayerShape> layers_;
};

/// Activations recorded by a forward pass of the block: acts[0] is the
/// two-channel input, acts[l + 1] the output of conv layer l (after ReLU for
/// hidden layers). cols[l] holds the unfolded 3x3 patches fed to layer l.
struct NetTape
{
  int height = 0;
  int width = 0;
  std::vector<std::vector<double>> acts;
  std::vector<std::vector<double>> cols;
};

ComplexImage net_forward(DenoiserWeights const &weights, ComplexImage const &img, NetTape *tape = nullptr);

/// Gradient w.r.t. every parameter (flat layout matching the weights) and
/// w.r.t. the input. Complex images carry d/dRe in the real part and d/dIm
/// in the imaginary part.
struct NetGradients
{
  std::vector<double> weights;
  ComplexImage input;
};

NetGradients net_backward(DenoiserWeights const &weights, ComplexImage const &img, ComplexImage const &upstream);

/// Backward pass from a recorded tape. Parameter gradients are added into
/// `weight_grad`; the input gradient is returned.
ComplexImage net_backward(DenoiserWeights const &weights, NetTape const &tape, ComplexImage const &upstream,
                          std::span<double> weight_grad);

struct ProximatorTape
{
  std::vector<NetTape> steps;
};

/// The unrolled learned proximal operator r_theta(v).
ComplexImage proximator_forward(DenoiserWeights const &weights, ComplexImage const &v, ProximatorTape *tape = nullptr);

NetGradients proximator_backward(DenoiserWeights const &weights, ComplexImage const &v, ComplexImage const &upstream);
ComplexImage proximator_backward(DenoiserWeights const &weights, ProximatorTape const &tape, ComplexImage const &upstream,
                                 std::span<double> weight_grad);

/// Monte-Carlo estimate of ||d r_theta / dx||_F^2 at x:
///   (1/n) sum_i ||(r(x + eps d_i) - r(x)) / eps||^2,  d_i ~ N(0, I)
/// over the 2HW real components. Bias is O(eps).
double jacobian_penalty_estimate(DenoiserWeights const &weights, ComplexImage const &x, double eps, int probes,
                                 std::uint64_t seed);

struct TrainConfig
{
  double noise_sigma = 0.03;
  /// Weight of the Jacobian term; negative means "use noise_sigma^2".
  double penalty_weight = -1.0;
  int probes = 1;
  double probe_eps = 1e-3;
  double learning_rate = 1e-3;
  int batch_size = 8;
  int epochs = 200;
  /// Side of the random square crop taken from each image per step; 0 uses
  /// the whole image.
  int patch_size = 32;
  int workers = 1;
  std::uint64_t seed = 0;

  double effective_penalty_weight() const { return penalty_weight < 0.0 ? noise_sigma * noise_sigma : penalty_weight; }
  void validate() const;
};

struct EpochStats
{
  int epoch;
  double loss;
  double data_term;
  double penalty_term;
};

struct TrainResult
{
  DenoiserWeights weights;
  std::vector<EpochStats> trace;
};

using EpochCallback = std::function<void(EpochStats const &)>;

/// Training objective for one clean/noisy pair, with gradients added into
/// `grad`: ||r(noisy) - clean||^2 + w * jacobian_penalty(clean). Probe
/// directions are drawn from `probe_seed`.
struct ItemLoss
{
  double data_term = 0.0;
  double penalty_term = 0.0; // unweighted Jacobian estimate
  double total = 0.0;
};

ItemLoss item_loss_and_gradient(DenoiserWeights const &weights, ComplexImage const &clean, ComplexImage const &noisy,
                                double penalty_weight, int probes, double eps, std::uint64_t probe_seed,
                                std::span<double> grad);

TrainResult train(Dataset const &dataset, NetConfig const &net_config, TrainConfig const &train_config,
                  EpochCallback const &on_epoch = {});

void save_weights(DenoiserWeights const &weights, std::filesystem::path const &path);
DenoiserWeights load_weights(std::filesystem::path const &path);

} // namespace proxmri
