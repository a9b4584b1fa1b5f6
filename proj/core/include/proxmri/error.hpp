// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#pragma once

#include <stdexcept>
#include <string>

namespace proxmri {

// Error taxonomy. The CLI maps these onto process exit codes:
// usage-type errors (Dimension/Parameter/Io) -> 2, Format/Shape -> 3,
// numeric failures (Calibration/Divergence/Training) -> 4.

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error
{
public:
  using Error::Error;
};

class ParameterError : public Error
{
public:
  using Error::Error;
};

class ShapeError : public Error
{
public:
  using Error::Error;
};

class FormatError : public Error
{
public:
  using Error::Error;
};

class IoError : public Error
{
public:
  using Error::Error;
};

class CalibrationError : public Error
{
public:
  using Error::Error;
};

class DivergenceError : public Error
{
public:
  DivergenceError(std::string const &what, int iteration)
    : Error(what + " (iteration " + std::to_string(iteration) + ")")
    , iteration_(iteration)
  {
  }

  int iteration() const noexcept { return iteration_; }

private:
  int iteration_;
};

class TrainingError : public Error
{
public:
  TrainingError(std::string const &what, int epoch)
    : Error(what + " (epoch " + std::to_string(epoch) + ")")
    , epoch_(epoch)
  {
  }

  int epoch() const noexcept { return epoch_; }

private:
  int epoch_;
};

} // namespace proxmri
