// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FSUSC_ERROR_HPP
#define FSUSC_ERROR_HPP

#include <optional>
#include <stdexcept>
#include <string>

namespace fsusc
{

enum class ErrorCode
{
  InvalidArgument,
  Config,
  Io,
  CheckpointCorrupt,
  StaleCheckpoint,
  EmptyDomain,
  NotEquilibrium,
  MaxStepsExceeded,
  BlowUp,
  DenseLimit,
  SingularFactorization,
  InnerSolve,
  Internal
};

// Exception type thrown across the core. Errors that carry a measured quantity
// (equilibrium residual, ...) expose it through value().
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string &message,
        std::optional<double> value = std::nullopt)
    : std::runtime_error(message), code_(code), value_(value)
  {
  }

  ErrorCode code() const { return code_; }
  std::optional<double> value() const { return value_; }

private:
  ErrorCode code_;
  std::optional<double> value_;
};

}  // namespace fsusc

#endif  // FSUSC_ERROR_HPP
