#pragma once

#include <stdexcept>
#include <string>

namespace dcm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed external input (corpus, pair file, embedding file, model file).
struct FormatError : Error {
  using Error::Error;
};

// Model file declares an unsupported format version.
struct VersionError : FormatError {
  using FormatError::FormatError;
};

// Model file ends before all declared sections were read.
struct TruncatedError : FormatError {
  using FormatError::FormatError;
};

// Array shapes or header dimensions are inconsistent.
struct ShapeError : Error {
  using Error::Error;
};

// Data violates an operation precondition (empty corpus, document too short, ...).
struct DataError : Error {
  using Error::Error;
};

// Numerical failure at runtime (non-finite loss, failed gradient check).
struct ComputeError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace dcm
