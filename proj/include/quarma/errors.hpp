// Copyright (c) 2026 The quarma Authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace quarma {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Shape disagreement between operands.
struct DimensionError : Error {
  using Error::Error;
};

// Augmented vector whose blocks are not the involutions of block 0.
struct InconsistencyError : Error {
  using Error::Error;
};

// Sherman-Morrison denominator lost positivity; tracker state is corrupt.
struct BreakdownError : Error {
  using Error::Error;
};

// Generated sample path exceeded the magnitude guard.
struct DivergenceError : Error {
  using Error::Error;
};

// Iterative solver hit its iteration cap before the movement tolerance.
struct ConvergenceError : Error {
  using Error::Error;
};

// Bad experiment configuration (parse or validation).
struct ConfigError : Error {
  using Error::Error;
};

struct InvalidParameterError : Error {
  using Error::Error;
};

}  // namespace quarma
