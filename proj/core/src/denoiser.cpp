// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#include "proxmri/denoiser.hpp"

#include "proxmri/error.hpp"
#include "proxmri/rng.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>
#include <thread>

namespace proxmri {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<RowMat>;
using ConstMatMap = Eigen::Map<RowMat const>;

void NetConfig::validate() const
{
  if (filters < 1) { throw ParameterError("filters must be positive"); }
  if (depth < 2) { throw ParameterError("network depth must be at least 2"); }
  if (kernel != 3) { throw ParameterError("only 3x3 kernels are supported"); }
  if (unroll_steps < 1) { throw ParameterError("unroll_steps must be positive"); }
  if (!(inner_alpha > 0.0 && inner_alpha < 1.0)) { throw ParameterError("inner_alpha must lie in (0, 1)"); }
}

std::vector<LayerShape> layer_shapes(NetConfig const &config)
{
  std::vector<LayerShape> shapes;
  std::size_t offset = 0;
  for (int l = 0; l < config.depth; ++l) {
    LayerShape s{l == 0 ? 2 : config.filters, l == config.depth - 1 ? 2 : config.filters, offset};
    offset += s.size();
    shapes.push_back(s);
  }
  return shapes;
}

std::size_t parameter_count(NetConfig const &config)
{
  auto const shapes = layer_shapes(config);
  return shapes.back().offset + shapes.back().size();
}

DenoiserWeights::DenoiserWeights(NetConfig config, std::vector<double> params, TrainingMeta meta)
  : config_(config)
  , meta_(meta)
  , params_(std::move(params))
{
  config_.validate();
  layers_ = layer_shapes(config_);
  if (params_.size() != parameter_count(config_)) {
    throw ShapeError("parameter vector has " + std::to_string(params_.size()) + " entries, architecture needs " +
                     std::to_string(parameter_count(config_)));
  }
}

DenoiserWeights DenoiserWeights::zeros(NetConfig const &config)
{
  config.validate();
  return DenoiserWeights(config, std::vector<double>(parameter_count(config), 0.0));
}

DenoiserWeights DenoiserWeights::random(NetConfig const &config, std::uint64_t seed)
{
  auto w = zeros(config);
  Rng rng(derive_seed(seed, "weight-init"));
  for (int l = 0; l < config.depth; ++l) {
    auto const &s = w.layers_[l];
    double std = std::sqrt(2.0 / (s.in_channels * 9.0));
    if (l == config.depth - 1) { std *= 0.1; }
    for (auto &k : w.kernel(l)) { k = std * rng.normal(); }
  }
  return w;
}

std::span<double const> DenoiserWeights::kernel(int layer) const
{
  auto const &s = layers_.at(layer);
  return std::span<double const>(params_).subspan(s.offset, s.kernel_size());
}

std::span<double const> DenoiserWeights::bias(int layer) const
{
  auto const &s = layers_.at(layer);
  return std::span<double const>(params_).subspan(s.offset + s.kernel_size(), s.out_channels);
}

std::span<double> DenoiserWeights::kernel(int layer)
{
  auto const &s = layers_.at(layer);
  return std::span<double>(params_).subspan(s.offset, s.kernel_size());
}

std::span<double> DenoiserWeights::bias(int layer)
{
  auto const &s = layers_.at(layer);
  return std::span<double>(params_).subspan(s.offset + s.kernel_size(), s.out_channels);
}

bool DenoiserWeights::all_finite() const noexcept
{
  return std::all_of(params_.begin(), params_.end(), [](double v) { return std::isfinite(v); });
}

namespace {

// 3x3 zero-padded patches as a (channels*9) x (h*w) row-major matrix.
void im2col(double const *in, int channels, int h, int w, double *cols)
{
  std::size_t const hw = static_cast<std::size_t>(h) * w;
  for (int ci = 0; ci < channels; ++ci) {
    double const *plane = in + ci * hw;
    for (int ky = 0; ky < 3; ++ky) {
      for (int kx = 0; kx < 3; ++kx) {
        double *row = cols + (static_cast<std::size_t>(ci) * 9 + ky * 3 + kx) * hw;
        int const dy = ky - 1;
        int const dx = kx - 1;
        for (int r = 0; r < h; ++r) {
          double *dst = row + static_cast<std::size_t>(r) * w;
          int const rr = r + dy;
          if (rr < 0 || rr >= h) {
            std::fill_n(dst, w, 0.0);
            continue;
          }
          double const *src = plane + static_cast<std::size_t>(rr) * w;
          int const c_lo = std::max(0, -dx);
          int const c_hi = std::min(w, w - dx);
          for (int c = 0; c < c_lo; ++c) { dst[c] = 0.0; }
          for (int c = c_lo; c < c_hi; ++c) { dst[c] = src[c + dx]; }
          for (int c = c_hi; c < w; ++c) { dst[c] = 0.0; }
        }
      }
    }
  }
}

// Adjoint of im2col: scatter-add patch gradients back onto the image.
void col2im(double const *cols, int channels, int h, int w, double *out)
{
  std::size_t const hw = static_cast<std::size_t>(h) * w;
  std::fill_n(out, channels * hw, 0.0);
  for (int ci = 0; ci < channels; ++ci) {
    double *plane = out + ci * hw;
    for (int ky = 0; ky < 3; ++ky) {
      for (int kx = 0; kx < 3; ++kx) {
        double const *row = cols + (static_cast<std::size_t>(ci) * 9 + ky * 3 + kx) * hw;
        int const dy = ky - 1;
        int const dx = kx - 1;
        for (int r = 0; r < h; ++r) {
          int const rr = r + dy;
          if (rr < 0 || rr >= h) { continue; }
          double const *src = row + static_cast<std::size_t>(r) * w;
          double *dst = plane + static_cast<std::size_t>(rr) * w;
          int const c_lo = std::max(0, -dx);
          int const c_hi = std::min(w, w - dx);
          for (int c = c_lo; c < c_hi; ++c) { dst[c + dx] += src[c]; }
        }
      }
    }
  }
}

void split_channels(ComplexImage const &img, std::vector<double> &x)
{
  std::size_t const hw = img.size();
  x.resize(2 * hw);
  for (std::size_t i = 0; i < hw; ++i) {
    x[i] = img[i].real();
    x[hw + i] = img[i].imag();
  }
}

ComplexImage join_channels(std::vector<double> const &x, int h, int w)
{
  ComplexImage img(h, w);
  std::size_t const hw = img.size();
  for (std::size_t i = 0; i < hw; ++i) { img[i] = Cx(x[i], x[hw + i]); }
  return img;
}

void conv_forward(DenoiserWeights const &weights, int layer, std::vector<double> const &in, int h, int w,
                  std::vector<double> &out, std::vector<double> &cols)
{
  auto const &s = weights.layers()[layer];
  auto const hw = static_cast<Eigen::Index>(h) * w;
  cols.resize(static_cast<std::size_t>(s.in_channels) * 9 * hw);
  im2col(in.data(), s.in_channels, h, w, cols.data());
  out.resize(static_cast<std::size_t>(s.out_channels) * hw);
  ConstMatMap k(weights.kernel(layer).data(), s.out_channels, s.in_channels * 9);
  ConstMatMap c(cols.data(), s.in_channels * 9, hw);
  MatMap y(out.data(), s.out_channels, hw);
  y.noalias() = k * c;
  auto const b = weights.bias(layer);
  for (int o = 0; o < s.out_channels; ++o) { y.row(o).array() += b[o]; }
}

} // namespace

ComplexImage net_forward(DenoiserWeights const &weights, ComplexImage const &img, NetTape *tape)
{
  if (!img.all_finite()) { throw ParameterError("denoiser input contains non-finite values"); }
  int const h = img.height();
  int const w = img.width();
  int const depth = weights.config().depth;

  // Buffers are reused across calls; large fresh allocations cost more in
  // page faults than the convolutions themselves at these sizes.
  thread_local NetTape scratch;
  NetTape &t = tape ? *tape : scratch;
  t.height = h;
  t.width = w;
  t.acts.resize(static_cast<std::size_t>(depth) + 1);
  t.cols.resize(static_cast<std::size_t>(depth));
  split_channels(img, t.acts[0]);
  for (int l = 0; l < depth; ++l) {
    auto &out = t.acts[l + 1];
    conv_forward(weights, l, t.acts[l], h, w, out, t.cols[l]);
    if (l != depth - 1) {
      for (auto &v : out) { v = v > 0.0 ? v : 0.0; }
    }
  }
  auto const &input = t.acts[0];
  auto const &last = t.acts[depth];
  ComplexImage out(h, w);
  std::size_t const hw = out.size();
  for (std::size_t i = 0; i < hw; ++i) { out[i] = Cx(last[i] + input[i], last[hw + i] + input[hw + i]); }
  return out;
}

ComplexImage net_backward(DenoiserWeights const &weights, NetTape const &tape, ComplexImage const &upstream,
                          std::span<double> weight_grad)
{
  int const h = tape.height;
  int const w = tape.width;
  if (upstream.height() != h || upstream.width() != w) { throw ShapeError("upstream gradient shape mismatch"); }
  if (weight_grad.size() != weights.params().size()) { throw ShapeError("weight gradient buffer has wrong size"); }
  int const depth = weights.config().depth;
  auto const hw = static_cast<Eigen::Index>(h) * w;

  thread_local std::vector<double> d_out, d, cols, dcols, d_prev;
  split_channels(upstream, d_out);
  d = d_out;
  for (int l = depth - 1; l >= 0; --l) {
    auto const &s = weights.layers()[l];
    auto const &in = tape.acts[l];
    if (l != depth - 1) {
      auto const &act = tape.acts[l + 1];
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (!(act[i] > 0.0)) { d[i] = 0.0; }
      }
    }
    auto const n_cols = static_cast<std::size_t>(s.in_channels) * 9 * hw;
    double const *patches = nullptr;
    if (tape.cols.size() == static_cast<std::size_t>(depth) && tape.cols[l].size() == n_cols) {
      patches = tape.cols[l].data();
    } else {
      cols.resize(n_cols);
      im2col(in.data(), s.in_channels, h, w, cols.data());
      patches = cols.data();
    }
    ConstMatMap dy(d.data(), s.out_channels, hw);
    ConstMatMap c(patches, s.in_channels * 9, hw);
    MatMap dk(weight_grad.data() + s.offset, s.out_channels, s.in_channels * 9);
    dk.noalias() += dy * c.transpose();
    double *db = weight_grad.data() + s.offset + s.kernel_size();
    // Plain loop: Eigen's vectorized sum peels by address, which would make
    // the result depend on where the buffer happens to be allocated.
    for (int o = 0; o < s.out_channels; ++o) {
      double acc = 0.0;
      double const *row = d.data() + static_cast<std::size_t>(o) * static_cast<std::size_t>(hw);
      for (Eigen::Index p = 0; p < hw; ++p) { acc += row[p]; }
      db[o] += acc;
    }

    ConstMatMap k(weights.kernel(l).data(), s.out_channels, s.in_channels * 9);
    dcols.resize(n_cols);
    MatMap dc(dcols.data(), s.in_channels * 9, hw);
    dc.noalias() = k.transpose() * dy;
    d_prev.resize(static_cast<std::size_t>(s.in_channels) * hw);
    col2im(dcols.data(), s.in_channels, h, w, d_prev.data());
    std::swap(d, d_prev);
  }
  for (std::size_t i = 0; i < d.size(); ++i) { d[i] += d_out[i]; }
  return join_channels(d, h, w);
}

NetGradients net_backward(DenoiserWeights const &weights, ComplexImage const &img, ComplexImage const &upstream)
{
  NetTape tape;
  net_forward(weights, img, &tape);
  NetGradients g{std::vector<double>(weights.params().size(), 0.0), {}};
  g.input = net_backward(weights, tape, upstream, g.weights);
  return g;
}

ComplexImage proximator_forward(DenoiserWeights const &weights, ComplexImage const &v, ProximatorTape *tape)
{
  int const steps = weights.config().unroll_steps;
  double const alpha = weights.config().inner_alpha;
  if (tape) { tape->steps.resize(static_cast<std::size_t>(steps)); }
  ComplexImage x = v;
  ComplexImage g(v.height(), v.width());
  for (int t = 0; t < steps; ++t) {
    for (std::size_t i = 0; i < g.size(); ++i) { g[i] = x[i] + alpha * (v[i] - x[i]); }
    x = net_forward(weights, g, tape ? &tape->steps[t] : nullptr);
  }
  return x;
}

ComplexImage proximator_backward(DenoiserWeights const &weights, ProximatorTape const &tape, ComplexImage const &upstream,
                                 std::span<double> weight_grad)
{
  double const alpha = weights.config().inner_alpha;
  ComplexImage dx = upstream;
  ComplexImage dv(upstream.height(), upstream.width());
  for (int t = static_cast<int>(tape.steps.size()) - 1; t >= 0; --t) {
    ComplexImage const dg = net_backward(weights, tape.steps[t], dx, weight_grad);
    for (std::size_t i = 0; i < dg.size(); ++i) {
      dv[i] += alpha * dg[i];
      dx[i] = (1.0 - alpha) * dg[i];
    }
  }
  for (std::size_t i = 0; i < dv.size(); ++i) { dv[i] += dx[i]; }
  return dv;
}

NetGradients proximator_backward(DenoiserWeights const &weights, ComplexImage const &v, ComplexImage const &upstream)
{
  ProximatorTape tape;
  proximator_forward(weights, v, &tape);
  NetGradients g{std::vector<double>(weights.params().size(), 0.0), {}};
  g.input = proximator_backward(weights, tape, upstream, g.weights);
  return g;
}

namespace {

ComplexImage normal_direction(int h, int w, Rng &rng)
{
  ComplexImage d(h, w);
  for (auto &z : d.data()) {
    double const re = rng.normal();
    double const im = rng.normal();
    z = Cx(re, im);
  }
  return d;
}

} // namespace

double jacobian_penalty_estimate(DenoiserWeights const &weights, ComplexImage const &x, double eps, int probes,
                                 std::uint64_t seed)
{
  if (!(eps > 0.0)) { throw ParameterError("probe eps must be positive"); }
  if (probes < 1) { throw ParameterError("at least one probe is required"); }
  Rng rng(derive_seed(seed, "jacobian-probe"));
  ComplexImage const base = proximator_forward(weights, x);
  double acc = 0.0;
  for (int i = 0; i < probes; ++i) {
    ComplexImage const d = normal_direction(x.height(), x.width(), rng);
    ComplexImage shifted = x;
    axpy(Cx(eps, 0.0), d, shifted);
    ComplexImage const moved = proximator_forward(weights, shifted);
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) { s += std::norm((moved[k] - base[k]) / eps); }
    acc += s;
  }
  return acc / probes;
}

ItemLoss item_loss_and_gradient(DenoiserWeights const &weights, ComplexImage const &clean, ComplexImage const &noisy,
                                double penalty_weight, int probes, double eps, std::uint64_t probe_seed,
                                std::span<double> grad)
{
  require_same_shape(clean, noisy, "training pair");
  ItemLoss loss;

  thread_local ProximatorTape tape, base_tape, probe_tape;
  ComplexImage const out = proximator_forward(weights, noisy, &tape);
  ComplexImage up(clean.height(), clean.width());
  for (std::size_t i = 0; i < out.size(); ++i) {
    Cx const diff = out[i] - clean[i];
    loss.data_term += std::norm(diff);
    up[i] = 2.0 * diff;
  }
  proximator_backward(weights, tape, up, grad);

  if (penalty_weight > 0.0) {
    Rng rng(derive_seed(probe_seed, "jacobian-probe"));
    ComplexImage const base = proximator_forward(weights, clean, &base_tape);
    ComplexImage base_up(clean.height(), clean.width());
    double const scale = penalty_weight / probes;
    for (int p = 0; p < probes; ++p) {
      ComplexImage const d = normal_direction(clean.height(), clean.width(), rng);
      ComplexImage shifted = clean;
      axpy(Cx(eps, 0.0), d, shifted);
      ComplexImage const moved = proximator_forward(weights, shifted, &probe_tape);
      double s = 0.0;
      for (std::size_t i = 0; i < moved.size(); ++i) {
        Cx const q = (moved[i] - base[i]) / eps;
        s += std::norm(q);
        up[i] = scale * 2.0 * q / eps;
        base_up[i] -= up[i];
      }
      loss.penalty_term += s / probes;
      proximator_backward(weights, probe_tape, up, grad);
    }
    proximator_backward(weights, base_tape, base_up, grad);
  }
  loss.total = loss.data_term + penalty_weight * loss.penalty_term;
  return loss;
}

void TrainConfig::validate() const
{
  if (!(noise_sigma >= 0.0)) { throw ParameterError("noise sigma must be nonnegative"); }
  if (!(probe_eps > 0.0)) { throw ParameterError("probe eps must be positive"); }
  if (probes < 1) { throw ParameterError("probes must be at least 1"); }
  if (!(learning_rate > 0.0)) { throw ParameterError("learning rate must be positive"); }
  if (batch_size < 1) { throw ParameterError("batch size must be positive"); }
  if (epochs < 1) { throw ParameterError("epochs must be positive"); }
  if (patch_size != 0 && (!is_power_of_two(patch_size) || patch_size < 8)) {
    throw ParameterError("patch size must be 0 (whole image) or a power of two >= 8");
  }
  if (workers < 1) { throw ParameterError("workers must be positive"); }
}

namespace {

ComplexImage crop(ComplexImage const &img, int r0, int c0, int size)
{
  ComplexImage out(size, size);
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) { out(r, c) = img(r0 + r, c0 + c); }
  }
  return out;
}

struct Adam
{
  explicit Adam(std::size_t n)
    : m(n, 0.0)
    , v(n, 0.0)
  {
  }

  void step(std::span<double> params, std::span<double const> grad, double lr)
  {
    constexpr double beta1 = 0.9;
    constexpr double beta2 = 0.999;
    constexpr double eps = 1e-8;
    ++t;
    double const c1 = 1.0 - std::pow(beta1, t);
    double const c2 = 1.0 - std::pow(beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
      m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
      v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
      params[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
    }
  }

  std::vector<double> m, v;
  int t = 0;
};

} // namespace

TrainResult train(Dataset const &dataset, NetConfig const &net_config, TrainConfig const &cfg,
                  EpochCallback const &on_epoch)
{
  net_config.validate();
  cfg.validate();
  if (dataset.images.empty()) { throw ParameterError("training dataset is empty"); }
  int const size = dataset.images.front().height();
  for (auto const &img : dataset.images) {
    if (img.height() != size || img.width() != size) { throw ShapeError("training images must share one square size"); }
  }
  int const patch = (cfg.patch_size == 0 || cfg.patch_size >= size) ? size : cfg.patch_size;
  double const penalty_weight = cfg.effective_penalty_weight();

  TrainResult result;
  result.weights = DenoiserWeights::random(net_config, cfg.seed);
  result.weights.set_meta({cfg.noise_sigma, cfg.epochs, cfg.seed});
  auto &weights = result.weights;
  std::size_t const n_params = weights.params().size();
  Adam adam(n_params);

  auto const n = static_cast<int>(dataset.images.size());
  std::vector<int> order(n);
  std::vector<double> grad(n_params);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle(derive_seed(cfg.seed, "train-shuffle", static_cast<std::uint64_t>(epoch)));
    for (int i = n - 1; i > 0; --i) {
      std::swap(order[i], order[static_cast<std::size_t>(shuffle.below(static_cast<std::uint64_t>(i) + 1))]);
    }

    EpochStats stats{epoch, 0.0, 0.0, 0.0};
    for (int start = 0; start < n; start += cfg.batch_size) {
      int const count = std::min(cfg.batch_size, n - start);
      std::vector<std::vector<double>> item_grads(count, std::vector<double>(n_params, 0.0));
      std::vector<ItemLoss> item_losses(count);

      std::vector<std::exception_ptr> item_errors(count);
      auto run_item_unguarded = [&](int j) {
        auto const draw = static_cast<std::uint64_t>(epoch) * static_cast<std::uint64_t>(n) +
                          static_cast<std::uint64_t>(start + j);
        ComplexImage const &img = dataset.images[order[start + j]];
        Rng placement(derive_seed(cfg.seed, "train-crop", draw));
        int const r0 = static_cast<int>(placement.below(static_cast<std::uint64_t>(size - patch) + 1));
        int const c0 = static_cast<int>(placement.below(static_cast<std::uint64_t>(size - patch) + 1));
        ComplexImage const clean = patch == size ? img : crop(img, r0, c0, patch);
        ComplexImage const noisy = add_gaussian_noise(clean, cfg.noise_sigma, derive_seed(cfg.seed, "train-noise", draw));
        item_losses[j] = item_loss_and_gradient(weights, clean, noisy, penalty_weight, cfg.probes, cfg.probe_eps,
                                                derive_seed(cfg.seed, "train-probe", draw), item_grads[j]);
      };
      auto run_item = [&](int j) noexcept {
        try {
          run_item_unguarded(j);
        } catch (...) {
          item_errors[j] = std::current_exception();
        }
      };

      if (cfg.workers == 1 || count == 1) {
        for (int j = 0; j < count; ++j) { run_item(j); }
      } else {
        int const n_threads = std::min(cfg.workers, count);
        std::vector<std::jthread> pool;
        for (int t = 0; t < n_threads; ++t) {
          pool.emplace_back([&, t] {
            for (int j = t; j < count; j += n_threads) { run_item(j); }
          });
        }
      }

      for (auto const &err : item_errors) {
        if (!err) { continue; }
        try {
          std::rethrow_exception(err);
        } catch (ParameterError const &) {
          // Inputs are finite, so a non-finite activation means the weights blew up.
          throw TrainingError("training diverged: non-finite activations", epoch);
        }
      }

      // Fixed item order keeps the sum independent of the worker count.
      std::fill(grad.begin(), grad.end(), 0.0);
      for (int j = 0; j < count; ++j) {
        for (std::size_t i = 0; i < n_params; ++i) { grad[i] += item_grads[j][i]; }
        stats.loss += item_losses[j].total;
        stats.data_term += item_losses[j].data_term;
        stats.penalty_term += item_losses[j].penalty_term;
      }
      for (auto &g : grad) { g /= count; }
      adam.step(weights.params(), grad, cfg.learning_rate);
    }
    stats.loss /= n;
    stats.data_term /= n;
    stats.penalty_term /= n;
    if (!std::isfinite(stats.loss) || !weights.all_finite()) {
      throw TrainingError("training diverged: loss is not finite", epoch);
    }
    result.trace.push_back(stats);
    if (on_epoch) { on_epoch(stats); }
  }
  return result;
}

} // namespace proxmri
