// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#include "proxmri/metrics.hpp"

#include "binary_io.hpp"
#include "proxmri/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>

namespace proxmri {

double psnr(ComplexImage const &x, ComplexImage const &ref)
{
  require_same_shape(x, ref, "psnr");
  double peak = 0.0;
  for (auto const &z : ref.data()) { peak = std::max(peak, std::abs(z)); }
  if (peak == 0.0) { throw ParameterError("psnr: reference image is all zero"); }
  double se = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double const d = std::abs(x[i]) - std::abs(ref[i]);
    se += d * d;
  }
  double const mse = se / static_cast<double>(x.size());
  if (mse == 0.0) { return std::numeric_limits<double>::infinity(); }
  return 10.0 * std::log10(peak * peak / mse);
}

namespace {

constexpr int kWindow = 11;
constexpr double kWindowSigma = 1.5;

std::array<double, kWindow> gaussian_taps()
{
  std::array<double, kWindow> taps{};
  double sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    double const d = i - kWindow / 2;
    taps[i] = std::exp(-d * d / (2.0 * kWindowSigma * kWindowSigma));
    sum += taps[i];
  }
  for (auto &t : taps) { t /= sum; }
  return taps;
}

// Separable Gaussian filter restricted to window positions fully inside.
std::vector<double> filter_valid(std::vector<double> const &img, int h, int w, std::array<double, kWindow> const &taps)
{
  int const oh = h - kWindow + 1;
  int const ow = w - kWindow + 1;
  std::vector<double> rows(static_cast<std::size_t>(h) * ow);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < ow; ++c) {
      double s = 0.0;
      for (int k = 0; k < kWindow; ++k) { s += taps[k] * img[static_cast<std::size_t>(r) * w + c + k]; }
      rows[static_cast<std::size_t>(r) * ow + c] = s;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(oh) * ow);
  for (int r = 0; r < oh; ++r) {
    for (int c = 0; c < ow; ++c) {
      double s = 0.0;
      for (int k = 0; k < kWindow; ++k) { s += taps[k] * rows[static_cast<std::size_t>(r + k) * ow + c]; }
      out[static_cast<std::size_t>(r) * ow + c] = s;
    }
  }
  return out;
}

} // namespace

double ssim(ComplexImage const &x, ComplexImage const &ref)
{
  require_same_shape(x, ref, "ssim");
  int const h = x.height();
  int const w = x.width();
  if (h < kWindow || w < kWindow) { throw DimensionError("ssim needs images of at least 11x11"); }
  auto const a = magnitude(x);
  auto const b = magnitude(ref);
  double const peak = *std::max_element(b.begin(), b.end());
  double const c1 = (0.01 * peak) * (0.01 * peak);
  double const c2 = (0.03 * peak) * (0.03 * peak);

  std::vector<double> aa(a.size()), bb(a.size()), ab(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    aa[i] = a[i] * a[i];
    bb[i] = b[i] * b[i];
    ab[i] = a[i] * b[i];
  }
  auto const taps = gaussian_taps();
  auto const mu_a = filter_valid(a, h, w, taps);
  auto const mu_b = filter_valid(b, h, w, taps);
  auto const e_aa = filter_valid(aa, h, w, taps);
  auto const e_bb = filter_valid(bb, h, w, taps);
  auto const e_ab = filter_valid(ab, h, w, taps);

  double acc = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    double const var_a = e_aa[i] - mu_a[i] * mu_a[i];
    double const var_b = e_bb[i] - mu_b[i] * mu_b[i];
    double const cov = e_ab[i] - mu_a[i] * mu_b[i];
    double const num = (2.0 * mu_a[i] * mu_b[i] + c1) * (2.0 * cov + c2);
    double const den = (mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + c1) * (var_a + var_b + c2);
    acc += num / den;
  }
  return acc / static_cast<double>(mu_a.size());
}

SuiteReport aggregate(std::vector<MetricReport> rows)
{
  SuiteReport report;
  report.rows = std::move(rows);
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  std::vector<std::vector<MetricReport const *>> members;
  for (auto const &row : report.rows) {
    auto const key = std::make_pair(row.method, row.mask_type);
    auto [it, inserted] = index.emplace(key, report.groups.size());
    if (inserted) {
      report.groups.push_back({row.method, row.mask_type, row.fraction, 0, 0, 0, 0, 0});
      members.emplace_back();
    }
    members[it->second].push_back(&row);
  }
  for (std::size_t g = 0; g < report.groups.size(); ++g) {
    auto &agg = report.groups[g];
    auto const &m = members[g];
    agg.count = static_cast<int>(m.size());
    double fsum = 0.0;
    for (auto const *r : m) {
      agg.psnr_mean += r->psnr_db;
      agg.ssim_mean += r->ssim;
      fsum += r->fraction;
    }
    agg.psnr_mean /= agg.count;
    agg.ssim_mean /= agg.count;
    agg.fraction = fsum / agg.count;
    if (agg.count > 1) {
      for (auto const *r : m) {
        agg.psnr_std += (r->psnr_db - agg.psnr_mean) * (r->psnr_db - agg.psnr_mean);
        agg.ssim_std += (r->ssim - agg.ssim_mean) * (r->ssim - agg.ssim_mean);
      }
      agg.psnr_std = std::sqrt(agg.psnr_std / (agg.count - 1));
      agg.ssim_std = std::sqrt(agg.ssim_std / (agg.count - 1));
    }
  }
  return report;
}

SuiteReport evaluate_suite(std::span<EvalCase const> cases)
{
  if (cases.empty()) { throw ParameterError("evaluate_suite needs at least one case"); }
  std::vector<MetricReport> rows;
  rows.reserve(cases.size());
  for (auto const &c : cases) {
    rows.push_back({c.case_id, c.method, c.mask_type, c.fraction, psnr(c.recon, c.reference), ssim(c.recon, c.reference)});
  }
  return aggregate(std::move(rows));
}

std::string format_metric(double v)
{
  if (std::isinf(v)) { return v > 0 ? "inf" : "-inf"; }
  return detail::format_double(v);
}

void write_metrics_csv(SuiteReport const &report, std::ostream &out)
{
  out << "case_id,method,mask_type,fraction,psnr_db,ssim\n";
  for (auto const &r : report.rows) {
    out << r.case_id << ',' << r.method << ',' << r.mask_type << ',' << format_metric(r.fraction) << ','
        << format_metric(r.psnr_db) << ',' << format_metric(r.ssim) << '\n';
  }
  for (auto const &g : report.groups) {
    out << "AGGREGATE_MEAN," << g.method << ',' << g.mask_type << ',' << format_metric(g.fraction) << ','
        << format_metric(g.psnr_mean) << ',' << format_metric(g.ssim_mean) << '\n';
  }
  for (auto const &g : report.groups) {
    out << "AGGREGATE_STD," << g.method << ',' << g.mask_type << ',' << format_metric(g.fraction) << ','
        << format_metric(g.psnr_std) << ',' << format_metric(g.ssim_std) << '\n';
  }
}

} // namespace proxmri
