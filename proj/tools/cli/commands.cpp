// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#include "commands.hpp"

#include "proxmri/denoiser.hpp"
#include "proxmri/error.hpp"
#include "proxmri/forward.hpp"
#include "proxmri/io.hpp"
#include "proxmri/metrics.hpp"
#include "proxmri/phantom.hpp"
#include "proxmri/recon.hpp"
#include "proxmri/rng.hpp"
#include "proxmri/sampling.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

namespace fs = std::filesystem;

namespace proxmri::cli {

namespace {

LogSink &log_sink()
{
  static LogSink sink = [](std::string const &line) { std::cerr << line << '\n'; };
  return sink;
}

void note(std::string const &line)
{
  if (log_sink()) { log_sink()(line); }
}

std::string fmt(double v)
{
  char buf[64];
  auto const [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

fs::path out_or(ExperimentConfig const &cfg, char const *fallback)
{
  auto const &v = cfg.str("out");
  return v.empty() ? fs::path(fallback) : fs::path(v);
}

void make_dir(fs::path const &dir)
{
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) { throw IoError("cannot create directory " + dir.string() + ": " + ec.message()); }
}

void make_parent(fs::path const &file)
{
  if (file.has_parent_path()) { make_dir(file.parent_path()); }
}

fs::path sidecar_for_file(fs::path const &file) { return fs::path(file.string() + ".cfg"); }

std::ofstream open_text(fs::path const &path)
{
  make_parent(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) { throw IoError("cannot write " + path.string()); }
  return out;
}

int count_cases(fs::path const &dir, std::string const &prefix, std::string const &ext)
{
  if (!fs::is_directory(dir)) { throw IoError("missing directory " + dir.string()); }
  int n = 0;
  while (fs::exists(dir / case_name(prefix, n, ext))) { ++n; }
  if (n == 0) { throw IoError("no " + case_name(prefix, 0, ext) + " in " + dir.string()); }
  return n;
}

fs::path coil_path(ExperimentConfig const &cfg)
{
  auto const &explicit_path = cfg.str("coil_file");
  return explicit_path.empty() ? cfg.path("data") / "coils.cmp" : fs::path(explicit_path);
}

NetConfig net_config(ExperimentConfig const &cfg)
{
  NetConfig net;
  net.filters = cfg.integer("filters");
  net.depth = cfg.integer("depth");
  net.unroll_steps = cfg.integer("unroll");
  net.inner_alpha = cfg.real("inner_alpha");
  net.validate();
  return net;
}

ReconConfig recon_config(ExperimentConfig const &cfg)
{
  ReconConfig rc;
  rc.lambda = cfg.real("lambda");
  rc.step_size = cfg.real("step");
  rc.iterations = cfg.integer("iters");
  rc.safe_step = cfg.boolean("safe_step");
  rc.validate();
  return rc;
}

/// Everything a reconstruction needs besides the data.
struct Solver
{
  ReconMethod method;
  ReconConfig rc;
  double l1_lambda;
  int levels;
  int acs;
  bool estimate_maps;
  std::optional<DenoiserWeights> weights;
};

bool needs_weights(ReconMethod m, ReconConfig const &rc) { return m == ReconMethod::Pgd && rc.lambda > 0.0; }

Solver make_solver(ExperimentConfig const &cfg, ReconMethod method, bool load)
{
  Solver s{method, recon_config(cfg), cfg.real("l1_lambda"), cfg.integer("wavelet_levels"), cfg.integer("acs"),
           cfg.boolean("estimate_maps"), std::nullopt};
  if (s.l1_lambda < 0.0) { throw ParameterError("l1_lambda must be nonnegative"); }
  if (load && needs_weights(method, s.rc)) { s.weights = load_weights(cfg.path("weights")); }
  return s;
}

ComplexImage reconstruct(Solver const &s, SamplingMask const &mask, CoilMaps const &true_maps, KSpaceData const &y,
                         ComplexImage const *reference = nullptr, std::vector<TracePoint> *trace = nullptr)
{
  if (y.coils() != true_maps.coils() || y.height() != mask.height() || y.width() != mask.width()) {
    throw ShapeError("k-space, mask and coil maps disagree in shape");
  }
  ForwardModel const model(mask, s.estimate_maps ? estimate_coil_maps(y, s.acs) : true_maps);
  switch (s.method) {
  case ReconMethod::ZeroFilled: return recon_zero_filled(model, y);
  case ReconMethod::Fista: return recon_fista_l1wavelet(model, y, s.l1_lambda, s.rc.iterations, s.levels).image;
  case ReconMethod::Sense: {
    auto r = recon_sense(model, y, s.rc, reference);
    if (trace) { *trace = r.trace; }
    return r.image;
  }
  case ReconMethod::Pgd: {
    auto r = recon_pgd(model, y, s.weights ? &*s.weights : nullptr, s.rc, reference);
    if (trace) { *trace = r.trace; }
    return r.image;
  }
  }
  throw ParameterError("unknown method");
}

fs::path with_extension(fs::path p, char const *ext) { return p.replace_extension(ext); }

} // namespace

void set_log_sink(LogSink sink) { log_sink() = std::move(sink); }

std::string case_name(std::string const &prefix, int index, std::string const &ext)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%04d", index);
  return prefix + buf + ext;
}

void cmd_phantom(ExperimentConfig const &cfg)
{
  auto const seed = cfg.u64("seed");
  int const size = cfg.integer("size");
  int const n_train = cfg.integer("n_train");
  int const n_test = cfg.integer("n_test");
  if (n_train < 1 || n_test < 1) { throw ParameterError("n_train and n_test must be at least 1"); }
  auto const maps = generate_coil_maps(derive_seed(seed, "coil-maps"), cfg.integer("coils"), size);
  auto const [train, test] = build_dataset(seed, n_train, n_test, size);

  fs::path const out = out_or(cfg, "data");
  make_dir(out);
  for (int i = 0; i < n_train; ++i) { write_image(train.images[static_cast<std::size_t>(i)], out / case_name("train", i, ".cim")); }
  for (int i = 0; i < n_test; ++i) { write_image(test.images[static_cast<std::size_t>(i)], out / case_name("test", i, ".cim")); }
  write_coil_maps(maps, out / "coils.cmp");
  cfg.write_sidecar(out / "phantom.cfg");
  note("phantom: wrote " + std::to_string(n_train + n_test) + " images and coil maps to " + out.string());
}

void cmd_mask(ExperimentConfig const &cfg)
{
  int const size = cfg.integer("size");
  auto const type = parse_mask_type(cfg.str("mask_type"));
  auto const seed = derive_seed(cfg.u64("seed"), "mask");
  double const exponent = cfg.real("density_exponent");
  SamplingMask mask;
  switch (type) {
  case MaskType::Full: mask = SamplingMask::full(size, size); break;
  case MaskType::Cartesian1D:
    mask = cartesian1d_mask(size, size, cfg.real("fraction"), cfg.integer("acs"), seed, exponent);
    break;
  case MaskType::Random2D:
    mask = random2d_mask(size, size, cfg.real("fraction"), cfg.integer("acs"), seed, exponent);
    break;
  case MaskType::Radial: mask = radial_mask(size, size, cfg.integer("spokes")); break;
  }
  fs::path const out = out_or(cfg, "mask.msk");
  make_parent(out);
  write_mask(mask, out);
  if (cfg.boolean("preview")) { write_pgm(mask, with_extension(out, ".pgm")); }
  cfg.write_sidecar(sidecar_for_file(out));
  note("mask: " + to_string(type) + " sampled fraction " + fmt(mask_fraction(mask)) + " -> " + out.string());
}

void cmd_acquire(ExperimentConfig const &cfg)
{
  fs::path const data = cfg.path("data");
  int const n = count_cases(data, "test", ".cim");
  auto const maps = read_coil_maps(coil_path(cfg));
  auto const mask = read_mask(cfg.path("mask"));
  double const sigma = cfg.real("kspace_sigma");
  if (!(sigma >= 0.0)) { throw ParameterError("kspace_sigma must be nonnegative"); }
  auto const seed = cfg.u64("seed");

  fs::path const out = out_or(cfg, "kspace");
  make_dir(out);
  for (int i = 0; i < n; ++i) {
    auto const img = read_image(data / case_name("test", i, ".cim"));
    auto const y = simulate_acquisition(img, maps, mask, sigma, derive_seed(seed, "acquire", static_cast<std::uint64_t>(i)));
    write_kspace(y, out / case_name("test", i, ".ksp"));
  }
  cfg.write_sidecar(out / "acquire.cfg");
  note("acquire: simulated " + std::to_string(n) + " cases -> " + out.string());
}

void cmd_train(ExperimentConfig const &cfg)
{
  fs::path const data = cfg.path("data");
  int const n = count_cases(data, "train", ".cim");
  Dataset ds;
  ds.split = Split::Train;
  ds.seed = cfg.u64("seed");
  for (int i = 0; i < n; ++i) { ds.images.push_back(read_image(data / case_name("train", i, ".cim"))); }

  TrainConfig tc;
  tc.noise_sigma = cfg.real("sigma");
  tc.penalty_weight = cfg.real("penalty_weight");
  tc.probes = cfg.integer("probes");
  tc.probe_eps = cfg.real("probe_eps");
  tc.learning_rate = cfg.real("lr");
  tc.batch_size = cfg.integer("batch");
  tc.epochs = cfg.integer("epochs");
  tc.patch_size = cfg.integer("patch");
  tc.workers = cfg.integer("workers");
  tc.seed = cfg.u64("seed");

  fs::path const out = out_or(cfg, "weights.wgt");
  fs::path const loss_path = cfg.str("loss_csv").empty() ? with_extension(out, ".loss.csv") : cfg.path("loss_csv");
  int const every = std::max(1, tc.epochs / 20);
  auto const result = train(ds, net_config(cfg), tc, [&](EpochStats const &s) {
    if ((s.epoch + 1) % every == 0 || s.epoch == 0) {
      note("train: epoch " + std::to_string(s.epoch + 1) + "/" + std::to_string(tc.epochs) + " loss " + fmt(s.loss));
    }
  });

  make_parent(out);
  save_weights(result.weights, out);
  auto csv = open_text(loss_path);
  csv << "epoch,loss,data_term,penalty_term\n";
  for (auto const &s : result.trace) {
    csv << s.epoch << ',' << fmt(s.loss) << ',' << fmt(s.data_term) << ',' << fmt(s.penalty_term) << '\n';
  }
  if (!csv) { throw IoError("failed writing " + loss_path.string()); }
  cfg.write_sidecar(sidecar_for_file(out));
  note("train: weights -> " + out.string());
}

void cmd_recon(ExperimentConfig const &cfg)
{
  auto const method = parse_recon_method(cfg.str("method"));
  auto const solver = make_solver(cfg, method, true);
  auto const maps = read_coil_maps(coil_path(cfg));
  auto const mask = read_mask(cfg.path("mask"));
  fs::path const in = cfg.path("kspace");
  bool const preview = cfg.boolean("preview");

  if (fs::is_directory(in)) {
    int const n = count_cases(in, "test", ".ksp");
    fs::path const out = out_or(cfg, "recon");
    make_dir(out);
    for (int i = 0; i < n; ++i) {
      auto const x = reconstruct(solver, mask, maps, read_kspace(in / case_name("test", i, ".ksp")));
      write_image(x, out / case_name("test", i, ".cim"));
      if (preview) { write_pgm(x, out / case_name("test", i, ".pgm")); }
    }
    cfg.write_sidecar(out / "recon.cfg");
    note("recon: " + to_string(method) + " on " + std::to_string(n) + " cases -> " + out.string());
    return;
  }

  fs::path const out = out_or(cfg, "recon.cim");
  std::optional<ComplexImage> reference;
  if (!cfg.str("reference").empty()) { reference = read_image(cfg.path("reference")); }
  std::vector<TracePoint> trace;
  auto const x = reconstruct(solver, mask, maps, read_kspace(in), reference ? &*reference : nullptr, &trace);
  make_parent(out);
  write_image(x, out);
  if (preview) { write_pgm(x, with_extension(out, ".pgm")); }
  if (reference) {
    auto csv = open_text(with_extension(out, ".trace.csv"));
    csv << "iteration,psnr_db,ssim\n";
    if (trace.empty()) { trace.push_back({0, psnr(x, *reference), ssim(x, *reference)}); }
    for (auto const &p : trace) { csv << p.iteration << ',' << format_metric(p.psnr) << ',' << format_metric(p.ssim) << '\n'; }
  }
  cfg.write_sidecar(sidecar_for_file(out));
  note("recon: " + to_string(method) + " -> " + out.string());
}

void cmd_eval(ExperimentConfig const &cfg)
{
  fs::path const data = cfg.path("data");
  auto const masks = cfg.list("mask");
  auto const spaces = cfg.list("kspace");
  auto labels = cfg.list("labels");
  if (masks.empty() || masks.size() != spaces.size()) {
    throw ParameterError("eval needs one k-space directory per mask");
  }
  if (labels.empty()) {
    for (auto const &m : masks) { labels.push_back(fs::path(m).stem().string()); }
  }
  if (labels.size() != masks.size()) { throw ParameterError("eval needs one label per mask"); }
  auto const recon_dirs = cfg.list("recon_dirs");
  if (!recon_dirs.empty() && recon_dirs.size() != masks.size()) {
    throw ParameterError("eval needs one recon directory per mask");
  }

  std::vector<Solver> solvers;
  bool any_weights = false;
  for (auto const &name : cfg.list("methods")) {
    auto const m = parse_recon_method(name);
    solvers.push_back(make_solver(cfg, m, false));
    any_weights = any_weights || (needs_weights(m, solvers.back().rc) && recon_dirs.empty());
  }
  if (solvers.empty()) { throw ParameterError("eval needs at least one method"); }
  if (any_weights) {
    auto const w = load_weights(cfg.path("weights"));
    for (auto &s : solvers) {
      if (needs_weights(s.method, s.rc)) { s.weights = w; }
    }
  }
  auto const maps = read_coil_maps(coil_path(cfg));
  int const n = count_cases(data, "test", ".cim");

  std::vector<MetricReport> rows;
  for (std::size_t p = 0; p < masks.size(); ++p) {
    auto const mask = read_mask(masks[p]);
    double const fraction = mask_fraction(mask);
    for (int i = 0; i < n; ++i) {
      auto const ref = read_image(data / case_name("test", i, ".cim"));
      auto const y = read_kspace(fs::path(spaces[p]) / case_name("test", i, ".ksp"));
      for (auto const &s : solvers) {
        auto const x = !recon_dirs.empty() && s.method == ReconMethod::Pgd
                           ? read_image(fs::path(recon_dirs[p]) / case_name("test", i, ".cim"))
                           : reconstruct(s, mask, maps, y);
        if (x.height() != ref.height() || x.width() != ref.width()) {
          throw ShapeError("reconstruction and reference differ in shape");
        }
        rows.push_back({case_name("test", i, ""), to_string(s.method), labels[p], fraction, psnr(x, ref), ssim(x, ref)});
      }
    }
    note("eval: " + labels[p] + " done");
  }
  auto const report = aggregate(std::move(rows));
  fs::path const out = out_or(cfg, "metrics.csv");
  auto csv = open_text(out);
  write_metrics_csv(report, csv);
  if (!csv) { throw IoError("failed writing " + out.string()); }
  cfg.write_sidecar(sidecar_for_file(out));
  for (auto const &g : report.groups) {
    note("eval: " + g.mask_type + " " + g.method + " PSNR " + fmt(g.psnr_mean) + " SSIM " + fmt(g.ssim_mean));
  }
}

void cmd_sweep(ExperimentConfig const &cfg)
{
  fs::path const data = cfg.path("data");
  fs::path const kspace = cfg.path("kspace");
  auto const lambdas = cfg.real_list("lambdas");
  if (lambdas.empty()) { throw ParameterError("sweep needs at least one lambda"); }
  int const iters = cfg.integer("iters");
  if (iters < 1) { throw ParameterError("iters must be positive"); }
  double const step = cfg.real("step");
  bool const any_positive = std::any_of(lambdas.begin(), lambdas.end(), [](double l) { return l > 0.0; });
  std::optional<DenoiserWeights> weights;
  if (any_positive) { weights = load_weights(cfg.path("weights")); }
  auto const maps = read_coil_maps(coil_path(cfg));
  auto const mask = read_mask(cfg.path("mask"));
  int n = count_cases(kspace, "test", ".ksp");
  if (int const limit = cfg.integer("cases"); limit > 0) { n = std::min(n, limit); }
  bool const estimate = cfg.boolean("estimate_maps");
  int const acs = cfg.integer("acs");

  std::vector<SweepRow> mean;
  for (int i = 0; i < n; ++i) {
    auto const ref = read_image(data / case_name("test", i, ".cim"));
    auto const y = read_kspace(kspace / case_name("test", i, ".ksp"));
    ForwardModel const model(mask, estimate ? estimate_coil_maps(y, acs) : maps);
    auto const rows = lambda_sweep(model, y, weights ? &*weights : nullptr, lambdas, iters, ref, step);
    if (mean.empty()) {
      mean = rows;
      for (auto &r : mean) { r.psnr = r.ssim = 0.0; }
    }
    for (std::size_t k = 0; k < rows.size(); ++k) {
      mean[k].psnr += rows[k].psnr / n;
      mean[k].ssim += rows[k].ssim / n;
    }
  }
  fs::path const out = out_or(cfg, "sweep.csv");
  auto csv = open_text(out);
  csv << "lambda,iteration,psnr_db,ssim\n";
  for (auto const &r : mean) {
    csv << fmt(r.lambda) << ',' << r.iteration << ',' << format_metric(r.psnr) << ',' << format_metric(r.ssim) << '\n';
  }
  if (!csv) { throw IoError("failed writing " + out.string()); }
  cfg.write_sidecar(sidecar_for_file(out));
  for (std::size_t k = 0; k < mean.size(); ++k) {
    if (mean[k].iteration == iters) {
      note("sweep: lambda " + fmt(mean[k].lambda) + " final PSNR " + fmt(mean[k].psnr) + " SSIM " + fmt(mean[k].ssim));
    }
  }
}

void cmd_pipeline(ExperimentConfig const &cfg)
{
  fs::path const root = out_or(cfg, "run");
  make_dir(root);
  cfg.write_sidecar(root / "pipeline.cfg");
  fs::path const data = root / "data";

  auto stage = cfg;
  stage.set("out", data.string());
  cmd_phantom(stage);

  auto const presets = cfg.list("presets");
  if (presets.empty()) { throw ParameterError("pipeline needs at least one mask preset"); }
  std::vector<std::string> mask_files, kspace_dirs, recon_dirs;
  for (auto const &preset : presets) {
    auto m = cfg;
    m.set("mask_type", preset);
    switch (parse_mask_type(preset)) {
    case MaskType::Cartesian1D: m.set("fraction", cfg.str("cartesian_fraction")); break;
    case MaskType::Random2D: m.set("fraction", cfg.str("random_fraction")); break;
    case MaskType::Radial: m.set("spokes", cfg.str("radial_spokes")); break;
    case MaskType::Full: break;
    }
    fs::path const mask_file = root / "masks" / (preset + ".msk");
    m.set("out", mask_file.string());
    cmd_mask(m);

    auto a = cfg;
    a.set("data", data.string());
    a.set("mask", mask_file.string());
    a.set("out", (root / "kspace" / preset).string());
    cmd_acquire(a);
    mask_files.push_back(mask_file.string());
    kspace_dirs.push_back((root / "kspace" / preset).string());
  }

  fs::path const weights = root / "weights.wgt";
  auto t = cfg;
  t.set("data", data.string());
  t.set("out", weights.string());
  cmd_train(t);

  for (std::size_t p = 0; p < presets.size(); ++p) {
    auto r = cfg;
    r.set("data", data.string());
    r.set("method", "pgd");
    r.set("weights", weights.string());
    r.set("mask", mask_files[p]);
    r.set("kspace", kspace_dirs[p]);
    r.set("out", (root / "recon" / presets[p]).string());
    cmd_recon(r);
    recon_dirs.push_back((root / "recon" / presets[p]).string());
  }

  auto join = [](std::vector<std::string> const &v) {
    std::string s;
    for (auto const &x : v) { s += (s.empty() ? "" : ",") + x; }
    return s;
  };
  auto e = cfg;
  e.set("data", data.string());
  e.set("weights", weights.string());
  e.set("mask", join(mask_files));
  e.set("kspace", join(kspace_dirs));
  e.set("labels", join(presets));
  e.set("recon_dirs", join(recon_dirs));
  e.set("out", (root / "metrics.csv").string());
  cmd_eval(e);

  auto const sweep_preset = cfg.str("sweep_preset");
  auto const at = std::find(presets.begin(), presets.end(), sweep_preset);
  if (at == presets.end()) { throw ParameterError("sweep_preset '" + sweep_preset + "' is not among the presets"); }
  auto const idx = static_cast<std::size_t>(at - presets.begin());
  auto s = cfg;
  s.set("data", data.string());
  s.set("weights", weights.string());
  s.set("mask", mask_files[idx]);
  s.set("kspace", kspace_dirs[idx]);
  s.set("out", (root / "sweep.csv").string());
  cmd_sweep(s);
  note("pipeline: outputs in " + root.string());
}

} // namespace proxmri::cli
