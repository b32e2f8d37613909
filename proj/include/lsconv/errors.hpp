// Copyright (c) 2026 lsconv contributors
// SPDX-License-Identifier: Apache-2.0
#ifndef LSCONV_ERRORS_HPP
#define LSCONV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lsconv {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Resource caps. The CLI maps these to exit code 3.
class AtomCapExceeded : public Error {
 public:
  using Error::Error;
};

class PointCapExceeded : public Error {
 public:
  using Error::Error;
};

class PopulationCapExceeded : public Error {
 public:
  using Error::Error;
};

// Bad inputs. The CLI maps these to exit code 2.
class DegenerateWalk : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class TooFewSamples : public Error {
 public:
  using Error::Error;
};

class MeanUnavailable : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// Requested computation would overflow doubles (e.g. exp(beta*T) out of range).
class OverflowGuard : public Error {
 public:
  using Error::Error;
};

}  // namespace lsconv

#endif  // LSCONV_ERRORS_HPP
