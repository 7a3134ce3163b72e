#pragma once

#include <stdexcept>
#include <string>

namespace evps {

/// Base class for all toolkit errors. CLI maps any of these to a
/// one-line diagnostic and a nonzero exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid construction parameters or run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input outside an operation's mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed file content; message carries a line or record index.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Profile has too few valid samples or no spread between extrema.
class DegenerateProfileError : public Error {
 public:
  using Error::Error;
};

/// Top and bottom peak coincide; no mask arc can be formed.
class DegeneratePeaksError : public Error {
 public:
  using Error::Error;
};

/// A mask expansion swallowed the whole cycle; the pixel is unusable.
class AllMaskedError : public Error {
 public:
  using Error::Error;
};

/// Cost evaluation found no sample that is valid, unmasked and lit.
class EmptySupportError : public Error {
 public:
  using Error::Error;
};

/// Null-space system is rank deficient; normal not identifiable.
class AmbiguousNormalError : public Error {
 public:
  using Error::Error;
};

/// No grid cell admitted a cost evaluation for this pixel.
class UnsolvablePixelError : public Error {
 public:
  using Error::Error;
};

/// Evaluation mask selects zero pixels.
class EmptyMaskError : public Error {
 public:
  using Error::Error;
};

}  // namespace evps
