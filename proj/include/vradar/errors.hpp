// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 vradar contributors

#pragma once

#include <stdexcept>
#include <string>

namespace vradar {

/// Filesystem-level failure: missing file, unwritable path. CLI exit code 1.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract data (bad cube file, undefined metric). CLI exit code 3.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A stage produced no usable result (no paired frames, empty metrics). CLI exit code 4.
class EmptyResultError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vradar
