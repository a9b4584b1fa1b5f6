// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#include "oracles.hpp"
#include "proxmri/denoiser.hpp"
#include "proxmri/error.hpp"
#include "proxmri/phantom.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

using namespace proxmri;
using testing::max_abs_diff;
using testing::random_image;

namespace {

NetConfig tiny_config(int steps = 1)
{
  NetConfig c;
  c.filters = 2;
  c.depth = 2;
  c.unroll_steps = steps;
  return c;
}

// Random weights with nonzero biases so every parameter carries signal.
DenoiserWeights noisy_weights(NetConfig const &cfg, std::uint64_t seed, double bias_scale = 0.1)
{
  auto w = DenoiserWeights::random(cfg, seed);
  Rng rng(seed ^ 0xabcdefULL);
  for (int l = 0; l < cfg.depth; ++l) {
    for (auto &b : w.bias(l)) { b = bias_scale * rng.normal(); }
  }
  // The last layer starts near zero; lift it so the block is not trivial.
  for (auto &k : w.kernel(cfg.depth - 1)) { k *= 10.0; }
  return w;
}

double project(ComplexImage const &out, ComplexImage const &up) { return inner(up, out).real(); }

// Direct 3x3 zero-padded cross-correlation of a real plane.
double corr_at(std::vector<double> const &plane, int h, int w, double const *k, int r, int c)
{
  double s = 0.0;
  for (int ky = 0; ky < 3; ++ky) {
    for (int kx = 0; kx < 3; ++kx) {
      int const rr = r + ky - 1;
      int const cc = c + kx - 1;
      if (rr < 0 || rr >= h || cc < 0 || cc >= w) { continue; }
      s += k[ky * 3 + kx] * plane[static_cast<std::size_t>(rr * w + cc)];
    }
  }
  return s;
}

std::filesystem::path temp_path(std::string const &name)
{
  return std::filesystem::temp_directory_path() / ("proxmri_test_" + name);
}

} // namespace

TEST_CASE("parameter layout")
{
  NetConfig const c;
  auto const shapes = layer_shapes(c);
  REQUIRE(shapes.size() == 4);
  CHECK(shapes[0].in_channels == 2);
  CHECK(shapes[0].out_channels == 16);
  CHECK(shapes[3].out_channels == 2);
  CHECK(parameter_count(c) == (2 * 16 * 9 + 16) + 2 * (16 * 16 * 9 + 16) + (16 * 2 * 9 + 2));
  CHECK(shapes[1].offset == shapes[0].size());
}

TEST_CASE("network configuration validation")
{
  NetConfig c;
  c.depth = 1;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c = NetConfig{};
  c.inner_alpha = 1.0;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c = NetConfig{};
  c.unroll_steps = 0;
  CHECK_THROWS_AS(c.validate(), ParameterError);
}

TEST_CASE("zero weights give the identity block and proximator")
{
  auto const w = DenoiserWeights::zeros(NetConfig{});
  for (int n : {32, 64}) {
    auto const x = random_image(n, n, 1);
    auto const y = net_forward(w, x);
    CHECK(y.height() == n);
    CHECK(y.width() == n);
    CHECK(y == x);
    CHECK(proximator_forward(w, x) == x);
  }
}

TEST_CASE("random weights keep the image shape")
{
  auto const w = DenoiserWeights::random(NetConfig{}, 3);
  for (int n : {32, 64}) {
    auto const y = net_forward(w, random_image(n, 2 * n, 2));
    CHECK(y.height() == n);
    CHECK(y.width() == 2 * n);
    CHECK(y.all_finite());
  }
}

TEST_CASE("single hidden filter matches a hand convolution")
{
  NetConfig cfg;
  cfg.filters = 1;
  cfg.depth = 2;
  auto w = DenoiserWeights::zeros(cfg);
  double const k_re[9] = {0.1, -0.2, 0.3, 0.0, 1.0, 0.5, -0.4, 0.2, 0.1};
  double const k_im[9] = {0.0, 0.3, 0.0, -0.1, 0.2, 0.0, 0.0, 0.0, 0.6};
  auto k0 = w.kernel(0); // [out=1][in=2][3][3]
  for (int i = 0; i < 9; ++i) {
    k0[static_cast<std::size_t>(i)] = k_re[i];
    k0[static_cast<std::size_t>(9 + i)] = k_im[i];
  }
  w.bias(0)[0] = -0.05;
  auto k1 = w.kernel(1); // [out=2][in=1][3][3]: centre taps only
  k1[4] = 0.7;
  k1[9 + 4] = -1.5;
  w.bias(1)[0] = 0.01;
  w.bias(1)[1] = 0.02;

  auto const x = random_image(4, 4, 7);
  std::vector<double> re(16), im(16);
  for (std::size_t i = 0; i < 16; ++i) {
    re[i] = x[i].real();
    im[i] = x[i].imag();
  }
  auto const y = net_forward(w, x);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      double const pre = corr_at(re, 4, 4, k_re, r, c) + corr_at(im, 4, 4, k_im, r, c) - 0.05;
      double const h = std::max(pre, 0.0);
      Cx const expect = x(r, c) + Cx(0.7 * h + 0.01, -1.5 * h + 0.02);
      CHECK(std::abs(y(r, c) - expect) < 1e-14);
    }
  }
}

TEST_CASE("unrolled proximator follows the step recursion")
{
  NetConfig cfg;
  cfg.filters = 4;
  cfg.depth = 3;
  cfg.unroll_steps = 4;
  cfg.inner_alpha = 0.3;
  auto const w = noisy_weights(cfg, 11);
  auto const v = random_image(16, 16, 12);

  ComplexImage x = v;
  for (int t = 0; t < cfg.unroll_steps; ++t) {
    ComplexImage g = x;
    for (std::size_t i = 0; i < g.size(); ++i) { g[i] = x[i] + cfg.inner_alpha * (v[i] - x[i]); }
    x = net_forward(w, g);
  }
  CHECK(max_abs_diff(proximator_forward(w, v), x) < 1e-14);

  auto cfg1 = cfg;
  cfg1.unroll_steps = 1;
  DenoiserWeights const w1(cfg1, std::vector<double>(w.params().begin(), w.params().end()));
  CHECK(proximator_forward(w1, v) == net_forward(w1, v));
}

TEST_CASE("non-finite input is rejected")
{
  auto const w = DenoiserWeights::zeros(NetConfig{});
  auto x = random_image(16, 16, 1);
  x(3, 3) = Cx(std::numeric_limits<double>::quiet_NaN(), 0.0);
  CHECK_THROWS_AS(net_forward(w, x), ParameterError);
}

TEST_CASE("block gradients match central finite differences")
{
  auto const cfg = tiny_config();
  auto w = noisy_weights(cfg, 21);
  auto const x = random_image(8, 8, 22);
  auto const up = random_image(8, 8, 23);
  auto const g = net_backward(w, x, up);

  double const h = 1e-6;
  auto p = w.params();
  for (std::size_t i = 0; i < p.size(); ++i) {
    double const keep = p[i];
    p[i] = keep + h;
    double const fp = project(net_forward(w, x), up);
    p[i] = keep - h;
    double const fm = project(net_forward(w, x), up);
    p[i] = keep;
    double const fd = (fp - fm) / (2.0 * h);
    CHECK(std::abs(fd - g.weights[i]) <= 1e-6 * std::max(1.0, std::abs(fd)));
  }
  for (std::uint64_t probe = 0; probe < 20; ++probe) {
    auto const d = random_image(8, 8, 300 + probe);
    double const fd = (project(net_forward(w, x + h * d), up) - project(net_forward(w, x - h * d), up)) / (2.0 * h);
    double const an = inner(g.input, d).real();
    CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("unrolled gradients match central finite differences")
{
  NetConfig cfg = tiny_config(3);
  cfg.filters = 3;
  cfg.depth = 3;
  auto w = noisy_weights(cfg, 31);
  auto const v = random_image(8, 8, 32);
  auto const up = random_image(8, 8, 33);
  auto const g = proximator_backward(w, v, up);

  double const h = 1e-6;
  auto p = w.params();
  for (std::size_t i = 0; i < p.size(); ++i) {
    double const keep = p[i];
    p[i] = keep + h;
    double const fp = project(proximator_forward(w, v), up);
    p[i] = keep - h;
    double const fm = project(proximator_forward(w, v), up);
    p[i] = keep;
    double const fd = (fp - fm) / (2.0 * h);
    CHECK(std::abs(fd - g.weights[i]) <= 1e-6 * std::max(1.0, std::abs(fd)));
  }
  for (std::uint64_t probe = 0; probe < 20; ++probe) {
    auto const d = random_image(8, 8, 400 + probe);
    double const fd =
        (project(proximator_forward(w, v + h * d), up) - project(proximator_forward(w, v - h * d), up)) / (2.0 * h);
    CHECK(std::abs(fd - inner(g.input, d).real()) <= 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("trivial backward cases")
{
  auto const cfg = tiny_config(2);
  auto const w = noisy_weights(cfg, 41);
  auto const x = random_image(8, 8, 42);
  auto const g0 = proximator_backward(w, x, ComplexImage(8, 8));
  for (double v : g0.weights) { CHECK(v == 0.0); }
  for (auto const &z : g0.input.data()) { CHECK(z == Cx{}); }

  auto const up = random_image(8, 8, 43);
  auto const zero = DenoiserWeights::zeros(cfg);
  CHECK(max_abs_diff(net_backward(zero, x, up).input, up) < 1e-15);
  CHECK(max_abs_diff(proximator_backward(zero, x, up).input, up) < 1e-14);
}

TEST_CASE("jacobian penalty of the identity network")
{
  auto const w = DenoiserWeights::zeros(NetConfig{});
  auto const x = random_image(16, 16, 51);
  double const est = jacobian_penalty_estimate(w, x, 1e-3, 64, 52);
  CHECK(std::abs(est - 512.0) / 512.0 < 0.15);
  CHECK(est >= 0.0);
  CHECK_THROWS_AS(jacobian_penalty_estimate(w, x, 0.0, 4, 1), ParameterError);
}

TEST_CASE("jacobian penalty of an affine network matches the exact Frobenius norm")
{
  // A large positive first-layer bias keeps every ReLU active, so the block
  // is affine and column probing gives its Jacobian exactly.
  auto const cfg = tiny_config();
  auto w = noisy_weights(cfg, 61);
  for (auto &b : w.bias(0)) { b = 100.0; }
  auto const x = random_image(4, 4, 62);

  double exact = 0.0;
  auto const base = net_forward(w, x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (Cx dir : {Cx(1.0, 0.0), Cx(0.0, 1.0)}) {
      ComplexImage xp = x;
      xp[i] += dir;
      exact += std::pow(norm2(net_forward(w, xp) - base), 2);
    }
  }
  double const est = jacobian_penalty_estimate(w, x, 1e-3, 256, 63);
  CHECK(std::abs(est - exact) / exact < 0.10);
}

TEST_CASE("jacobian penalty on the tiny network matches column probing")
{
  auto const cfg = tiny_config(3);
  auto const w = noisy_weights(cfg, 71);
  auto const x = random_image(8, 8, 72);

  double exact = 0.0;
  double const h = 1e-6;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (Cx dir : {Cx(1.0, 0.0), Cx(0.0, 1.0)}) {
      ComplexImage xp = x, xm = x;
      xp[i] += h * dir;
      xm[i] -= h * dir;
      exact += std::pow(norm2(proximator_forward(w, xp) - proximator_forward(w, xm)) / (2.0 * h), 2);
    }
  }
  double const est = jacobian_penalty_estimate(w, x, 1e-3, 256, 73);
  CHECK(std::abs(est - exact) / exact < 0.15);
}

TEST_CASE("item loss with zero weights")
{
  auto const cfg = tiny_config(2);
  auto const w = DenoiserWeights::zeros(cfg);
  auto const clean = random_image(8, 8, 81);
  auto const noisy = add_gaussian_noise(clean, 0.1, 82);
  std::vector<double> grad(w.params().size(), 0.0);
  auto const loss = item_loss_and_gradient(w, clean, noisy, 0.5, 2, 1e-3, 83, grad);
  CHECK(loss.data_term == doctest::Approx(std::pow(norm2(noisy - clean), 2)).epsilon(1e-12));
  CHECK(loss.total == doctest::Approx(loss.data_term + 0.5 * loss.penalty_term).epsilon(1e-14));
  CHECK(loss.penalty_term > 0.0);
}

TEST_CASE("item loss gradient matches finite differences")
{
  auto const cfg = tiny_config(2);
  auto w = noisy_weights(cfg, 91);
  auto const clean = random_image(8, 8, 92);
  auto const noisy = add_gaussian_noise(clean, 0.1, 93);
  std::vector<double> grad(w.params().size(), 0.0);
  std::vector<double> scratch(grad.size(), 0.0);
  item_loss_and_gradient(w, clean, noisy, 0.01, 2, 1e-2, 94, grad);

  double const h = 1e-6;
  auto p = w.params();
  for (std::size_t i = 0; i < p.size(); ++i) {
    double const keep = p[i];
    p[i] = keep + h;
    double const fp = item_loss_and_gradient(w, clean, noisy, 0.01, 2, 1e-2, 94, scratch).total;
    p[i] = keep - h;
    double const fm = item_loss_and_gradient(w, clean, noisy, 0.01, 2, 1e-2, 94, scratch).total;
    p[i] = keep;
    double const fd = (fp - fm) / (2.0 * h);
    CHECK(std::abs(fd - grad[i]) <= 1e-5 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("training lowers the loss and is deterministic across worker counts")
{
  auto const data = build_dataset(5, 8, 1, 16).first;
  NetConfig net;
  net.filters = 4;
  net.depth = 3;
  net.unroll_steps = 2;
  TrainConfig tc;
  tc.epochs = 30;
  tc.batch_size = 4;
  tc.patch_size = 0;
  tc.learning_rate = 3e-3;
  tc.seed = 6;

  auto const a = train(data, net, tc);
  REQUIRE(a.trace.size() == 30);
  double first = 0.0, last = 0.0;
  for (int i = 0; i < 10; ++i) {
    first += a.trace[static_cast<std::size_t>(i)].loss;
    last += a.trace[a.trace.size() - 1 - static_cast<std::size_t>(i)].loss;
  }
  CHECK(last < first);

  auto const b = train(data, net, tc);
  CHECK(a.weights == b.weights);

  tc.workers = 3;
  auto const c = train(data, net, tc);
  CHECK(c.weights.params().size() == a.weights.params().size());
  CHECK(std::equal(a.weights.params().begin(), a.weights.params().end(), c.weights.params().begin()));

  tc.workers = 1;
  tc.seed = 7;
  CHECK_FALSE(train(data, net, tc).weights == a.weights);
}

TEST_CASE("training rejects an empty dataset and bad settings")
{
  Dataset empty;
  CHECK_THROWS_AS(train(empty, NetConfig{}, TrainConfig{}), ParameterError);
  auto const data = build_dataset(0, 2, 1, 16).first;
  TrainConfig tc;
  tc.patch_size = 12;
  CHECK_THROWS_AS(train(data, NetConfig{}, tc), ParameterError);
}

TEST_CASE("training divergence is reported with the epoch")
{
  auto const data = build_dataset(0, 4, 1, 16).first;
  NetConfig net;
  net.filters = 4;
  net.depth = 3;
  TrainConfig tc;
  tc.epochs = 50;
  tc.patch_size = 0;
  tc.learning_rate = 1e300;
  try {
    train(data, net, tc);
    FAIL("expected a training error");
  } catch (TrainingError const &e) {
    CHECK(e.epoch() >= 0);
    CHECK(e.epoch() < 50);
  }
}

TEST_CASE("weights round-trip bit-exactly")
{
  NetConfig cfg;
  cfg.filters = 5;
  cfg.depth = 3;
  cfg.unroll_steps = 2;
  cfg.inner_alpha = 0.25;
  auto w = noisy_weights(cfg, 101);
  w.set_meta(TrainingMeta{0.03, 12, 99});
  auto const path = temp_path("weights.wgt");
  save_weights(w, path);
  auto const back = load_weights(path);
  CHECK(back == w);
  std::filesystem::remove(path);
}

TEST_CASE("corrupted weight files are rejected")
{
  auto const w = noisy_weights(tiny_config(), 111);
  auto const path = temp_path("corrupt.wgt");
  save_weights(w, path);
  std::string bytes;
  {
    std::ifstream in(path, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  auto write = [&](std::string const &b) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(b.data(), static_cast<std::streamsize>(b.size()));
  };

  std::string bad = bytes;
  bad[0] = 'X';
  write(bad);
  CHECK_THROWS_AS(load_weights(path), FormatError);

  write(bytes.substr(0, bytes.size() - 8));
  CHECK_THROWS_AS(load_weights(path), FormatError);

  write(bytes + std::string(8, '\0'));
  CHECK_THROWS_AS(load_weights(path), FormatError);

  // Declared filter count disagrees with the payload.
  std::string shape = bytes;
  auto const at = shape.find("filters=2");
  REQUIRE(at != std::string::npos);
  shape[at + 8] = '3';
  write(shape);
  CHECK_THROWS_AS(load_weights(path), FormatError);

  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_weights(path), IoError);
}

TEST_CASE("initial identity loss matches its analytic expectation")
{
  // r = identity: data term E||noise||^2 = 2HW sigma^2, Jacobian term 2HW.
  auto const w = DenoiserWeights::zeros(tiny_config(2));
  double const sigma = 0.05;
  double data = 0.0, pen = 0.0;
  int const trials = 40;
  std::vector<double> grad(w.params().size(), 0.0);
  for (int t = 0; t < trials; ++t) {
    auto const clean = random_image(16, 16, 500 + static_cast<std::uint64_t>(t));
    auto const noisy = add_gaussian_noise(clean, sigma, 600 + static_cast<std::uint64_t>(t));
    auto const l = item_loss_and_gradient(w, clean, noisy, sigma * sigma, 1, 1e-3, 700 + static_cast<std::uint64_t>(t), grad);
    data += l.data_term / trials;
    pen += l.penalty_term / trials;
  }
  CHECK(std::abs(data - 512.0 * sigma * sigma) / (512.0 * sigma * sigma) < 0.05);
  CHECK(std::abs(pen - 512.0) / 512.0 < 0.05);
}
