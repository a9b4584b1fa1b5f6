// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#pragma once

#include "proxmri/image.hpp"

#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace proxmri {

// Quality metrics on magnitude images. The dynamic range (peak) is always
// taken from the reference image.

/// 10 log10(peak^2 / MSE). Returns +infinity when the magnitudes agree
/// exactly.
double psnr(ComplexImage const &x, ComplexImage const &ref);

/// Single-scale SSIM: 11x11 Gaussian window (sigma 1.5), K1 = 0.01,
/// K2 = 0.03, averaged over window positions fully inside the image.
double ssim(ComplexImage const &x, ComplexImage const &ref);

struct EvalCase
{
  std::string case_id;
  std::string method;
  std::string mask_type;
  double fraction = 1.0;
  ComplexImage recon;
  ComplexImage reference;
};

struct MetricReport
{
  std::string case_id;
  std::string method;
  std::string mask_type;
  double fraction = 1.0;
  double psnr_db = 0.0;
  double ssim = 0.0;
};

struct MetricAggregate
{
  std::string method;
  std::string mask_type;
  double fraction = 1.0;
  int count = 0;
  double psnr_mean = 0.0;
  double psnr_std = 0.0;
  double ssim_mean = 0.0;
  double ssim_std = 0.0;
};

struct SuiteReport
{
  std::vector<MetricReport> rows;
  /// One entry per (method, mask_type), in order of first appearance.
  std::vector<MetricAggregate> groups;
};

/// Per-case metrics plus mean and sample standard deviation per group.
SuiteReport evaluate_suite(std::span<EvalCase const> cases);
SuiteReport aggregate(std::vector<MetricReport> rows);

/// CSV with header `case_id,method,mask_type,fraction,psnr_db,ssim`, one row
/// per case, then AGGREGATE_MEAN and AGGREGATE_STD rows per group.
void write_metrics_csv(SuiteReport const &report, std::ostream &out);

std::string format_metric(double v);

} // namespace proxmri
