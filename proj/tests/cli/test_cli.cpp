// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cli/app.hpp"
#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "proxmri/error.hpp"

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unistd.h>

namespace fs = std::filesystem;
using proxmri::cli::run;

namespace {

struct Sandbox
{
  fs::path dir;
  Sandbox()
  {
    dir = fs::temp_directory_path() / ("proxmri_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::remove_all(dir);
    fs::create_directories(dir);
    proxmri::cli::set_log_sink({});
  }
  ~Sandbox() { fs::remove_all(dir); }
  std::string operator/(std::string const &name) const { return (dir / name).string(); }
  static int &counter()
  {
    static int c = 0;
    return c;
  }
};

std::string slurp(fs::path const &p)
{
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int count_lines(fs::path const &p, std::string const &prefix = "")
{
  std::istringstream in(slurp(p));
  int n = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.rfind(prefix, 0) == 0) { ++n; }
  }
  return n;
}

/// Small dataset plus radial mask and k-space inside the sandbox.
void prepare(Sandbox const &s, int n_test = 3)
{
  REQUIRE(run({"phantom", "--size", "32", "--n-train", "4", "--n-test", std::to_string(n_test), "--out", s / "d"}) == 0);
  REQUIRE(run({"mask", "--size", "32", "--mask-type", "radial", "--spokes", "12", "--out", s / "m.msk"}) == 0);
  REQUIRE(run({"acquire", "--data", s / "d", "--mask", s / "m.msk", "--out", s / "k"}) == 0);
}

} // namespace

TEST_CASE("help and version exit cleanly")
{
  CHECK(run({"--help"}) == 0);
  CHECK(run({"recon", "--help"}) == 0);
  CHECK(run({"--version"}) == 0);
}

TEST_CASE("usage errors exit with 2")
{
  Sandbox s;
  CHECK(run({}) == 2);
  CHECK(run({"frobnicate"}) == 2);
  CHECK(run({"phantom", "--no-such-flag", "1"}) == 2);
  CHECK(run({"mask", "--lambda", "0.1"}) == 2); // flag not accepted by this command
  CHECK(run({"phantom", "--size", "48", "--out", s / "d48"}) == 2);
  CHECK(run({"mask", "--size", "32", "--fraction", "1.5", "--mask-type", "random2d", "--out", s / "x.msk"}) == 2);
  CHECK(run({"phantom", "--size", "abc", "--out", s / "dx"}) == 2);
  CHECK(run({"recon", "--kspace", s / "missing.ksp", "--mask", s / "missing.msk"}) == 2);
}

TEST_CASE("corrupt inputs exit with 3")
{
  Sandbox s;
  prepare(s);
  std::ofstream(s / "bad.msk", std::ios::binary) << "NOPE";
  CHECK(run({"recon", "--data", s / "d", "--mask", s / "bad.msk", "--kspace", s / "k/test_0000.ksp", "--method", "sense",
             "--out", s / "r.cim"}) == 3);

  REQUIRE(run({"mask", "--size", "16", "--mask-type", "radial", "--out", s / "m16.msk"}) == 0);
  CHECK(run({"recon", "--data", s / "d", "--mask", s / "m16.msk", "--kspace", s / "k/test_0000.ksp", "--method", "sense",
             "--out", s / "r.cim"}) == 3);
}

TEST_CASE("calibration failure exits with 4")
{
  Sandbox s;
  prepare(s);
  // radial masks have no fully sampled calibration block
  CHECK(run({"recon", "--data", s / "d", "--mask", s / "m.msk", "--kspace", s / "k/test_0000.ksp", "--method", "sense",
             "--estimate-maps", "--out", s / "r.cim"}) == 4);
}

TEST_CASE("sense and zero-lambda pgd write identical bytes")
{
  Sandbox s;
  prepare(s);
  std::vector<std::string> const common{"--data", s / "d", "--mask", s / "m.msk", "--kspace", s / "k/test_0001.ksp"};
  auto a = common;
  a.insert(a.begin(), "recon");
  a.insert(a.end(), {"--method", "sense", "--out", s / "sense.cim"});
  auto b = common;
  b.insert(b.begin(), "recon");
  b.insert(b.end(), {"--method", "pgd", "--lambda", "0", "--weights", s / "absent.wgt", "--out", s / "pgd.cim"});
  REQUIRE(run(a) == 0);
  REQUIRE(run(b) == 0);
  CHECK(slurp(s / "sense.cim") == slurp(s / "pgd.cim"));
  CHECK(slurp(s / "sense.cim").size() == 12 + 32 * 32 * 16);
}

TEST_CASE("flags override the config file which overrides defaults")
{
  Sandbox s;
  std::ofstream(s / "exp.cfg") << "# experiment\nsize = 16\nn-test = 2\nn_train = 3\n";
  REQUIRE(run({"phantom", "--config", s / "exp.cfg", "--n-test", "1", "--out", s / "d"}) == 0);
  proxmri::cli::ExperimentConfig side;
  side.merge_file(s / "d/phantom.cfg");
  CHECK(side.integer("size") == 16);
  CHECK(side.integer("n_test") == 1);
  CHECK(side.integer("n_train") == 3);
  CHECK(side.integer("coils") == 4);
  CHECK(fs::exists(s / "d/test_0000.cim"));
  CHECK_FALSE(fs::exists(s / "d/test_0001.cim"));
  CHECK(fs::exists(s / "d/train_0002.cim"));
}

TEST_CASE("unknown config keys are rejected")
{
  Sandbox s;
  std::ofstream(s / "bad.cfg") << "sise = 16\n";
  CHECK(run({"phantom", "--config", s / "bad.cfg", "--out", s / "d"}) == 2);
  std::ofstream(s / "bad2.cfg") << "size 16\n";
  CHECK(run({"phantom", "--config", s / "bad2.cfg", "--out", s / "d"}) == 2);
  proxmri::cli::ExperimentConfig cfg;
  CHECK_THROWS_AS(cfg.set("nonsense", "1"), proxmri::ParameterError);
  CHECK_THROWS_AS(cfg.merge_text("seed = 1\nbogus = 2\n"), proxmri::ParameterError);
}

TEST_CASE("typed accessors validate values")
{
  proxmri::cli::ExperimentConfig cfg;
  CHECK(cfg.integer("size") == 64);
  CHECK(cfg.real("lambda") == doctest::Approx(0.1));
  CHECK_FALSE(cfg.boolean("safe_step"));
  CHECK(cfg.list("methods") == std::vector<std::string>{"pgd", "sense", "fista", "zerofill"});
  CHECK(cfg.real_list("lambdas").size() == 5);
  cfg.set("size", "6x");
  CHECK_THROWS_AS(cfg.integer("size"), proxmri::ParameterError);
  cfg.set("safe_step", "maybe");
  CHECK_THROWS_AS(cfg.boolean("safe_step"), proxmri::ParameterError);
  cfg.set("seed", "-3");
  CHECK_THROWS_AS(cfg.u64("seed"), proxmri::ParameterError);
  CHECK(proxmri::cli::flag_to_key("--n-train") == "n_train");
  CHECK(proxmri::cli::key_to_flag("n_train") == "--n-train");
}

TEST_CASE("sidecar replays to identical outputs")
{
  Sandbox s;
  prepare(s);
  REQUIRE(run({"recon", "--data", s / "d", "--mask", s / "m.msk", "--kspace", s / "k/test_0002.ksp", "--method", "fista",
               "--iters", "20", "--out", s / "a.cim"}) == 0);
  REQUIRE(fs::exists(s / "a.cim.cfg"));
  REQUIRE(run({"recon", "--config", s / "a.cim.cfg", "--out", s / "b.cim"}) == 0);
  CHECK(slurp(s / "a.cim") == slurp(s / "b.cim"));
}

TEST_CASE("phantom and acquire are deterministic per seed")
{
  Sandbox s;
  prepare(s);
  REQUIRE(run({"phantom", "--size", "32", "--n-train", "4", "--n-test", "3", "--out", s / "d2"}) == 0);
  REQUIRE(run({"acquire", "--data", s / "d2", "--mask", s / "m.msk", "--out", s / "k2"}) == 0);
  REQUIRE(run({"phantom", "--size", "32", "--n-train", "4", "--n-test", "3", "--seed", "1", "--out", s / "d3"}) == 0);
  CHECK(slurp(s / "d/test_0001.cim") == slurp(s / "d2/test_0001.cim"));
  CHECK(slurp(s / "k/test_0002.ksp") == slurp(s / "k2/test_0002.ksp"));
  CHECK(slurp(s / "d/test_0001.cim") != slurp(s / "d3/test_0001.cim"));
  CHECK(slurp(s / "k/test_0000.ksp") != slurp(s / "k/test_0001.ksp"));
}

TEST_CASE("eval writes one row per case and method plus aggregates")
{
  Sandbox s;
  prepare(s, 50);
  REQUIRE(run({"eval", "--data", s / "d", "--mask", s / "m.msk", "--kspace", s / "k", "--lambda", "0", "--iters", "3",
               "--out", s / "metrics.csv"}) == 0);
  fs::path const csv = s / "metrics.csv";
  CHECK(count_lines(csv) == 1 + 200 + 8);
  CHECK(count_lines(csv, "test_") == 200);
  CHECK(count_lines(csv, "AGGREGATE_MEAN,") == 4);
  CHECK(count_lines(csv, "AGGREGATE_STD,") == 4);
  CHECK(count_lines(csv, "test_0049,") == 4);
  CHECK(slurp(csv).rfind("case_id,method,mask_type,fraction,psnr_db,ssim\n", 0) == 0);
}

TEST_CASE("train and sweep produce loss and sweep tables")
{
  Sandbox s;
  prepare(s);
  REQUIRE(run({"train", "--data", s / "d", "--epochs", "2", "--batch", "2", "--patch", "16", "--filters", "4", "--depth",
               "2", "--out", s / "w.wgt"}) == 0);
  CHECK(count_lines(s / "w.loss.csv") == 3);
  REQUIRE(run({"sweep", "--data", s / "d", "--mask", s / "m.msk", "--kspace", s / "k", "--weights", s / "w.wgt",
               "--iters", "4", "--lambdas", "0,0.5", "--out", s / "sw.csv"}) == 0);
  CHECK(count_lines(s / "sw.csv") == 1 + 2 * 4);
  CHECK(count_lines(s / "sw.csv", "0.5,") == 4);
  // loading weights trained for a different architecture is fine; missing weights are not
  CHECK(run({"sweep", "--data", s / "d", "--mask", s / "m.msk", "--kspace", s / "k", "--weights", s / "none.wgt",
             "--iters", "2", "--out", s / "sw2.csv"}) == 2);
}

TEST_CASE("eval reading stored pgd outputs matches recomputing them")
{
  Sandbox s;
  prepare(s);
  REQUIRE(run({"train", "--data", s / "d", "--epochs", "2", "--batch", "2", "--patch", "16", "--filters", "4", "--depth",
               "2", "--out", s / "w.wgt"}) == 0);
  REQUIRE(run({"recon", "--data", s / "d", "--mask", s / "m.msk", "--kspace", s / "k", "--weights", s / "w.wgt",
               "--iters", "6", "--out", s / "r"}) == 0);
  REQUIRE(run({"eval", "--data", s / "d", "--mask", s / "m.msk", "--kspace", s / "k", "--weights", s / "w.wgt",
               "--iters", "6", "--out", s / "a.csv"}) == 0);
  REQUIRE(run({"eval", "--data", s / "d", "--mask", s / "m.msk", "--kspace", s / "k", "--weights", s / "w.wgt",
               "--iters", "6", "--recon-dirs", s / "r", "--out", s / "b.csv"}) == 0);
  CHECK(slurp(s / "a.csv") == slurp(s / "b.csv"));

  std::string const two_masks = s / "m.msk," + s / "m.msk";
  std::string const two_spaces = s / "k," + s / "k";
  CHECK(run({"eval", "--data", s / "d", "--mask", two_masks, "--kspace", two_spaces, "--weights", s / "w.wgt",
             "--recon-dirs", s / "r", "--out", s / "c.csv"}) == 2);
}
