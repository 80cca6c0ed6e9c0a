#pragma once

#include <stdexcept>
#include <string>

namespace vectorheat {

/// Base class for all library errors.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// A constructor or factory received an out-of-domain parameter.
class invalid_parameter : public error {
 public:
  using error::error;
};

/// An operation's stated precondition does not hold for the given inputs.
class precondition_error : public error {
 public:
  using error::error;
};

/// Inputs are structurally inconsistent with each other (shape, manifold,
/// truncation mismatch).
class input_error : public error {
 public:
  using error::error;
};

/// An iterative or series computation failed to reach its tolerance.
class numeric_failure : public error {
 public:
  using error::error;
};

/// A query lies outside the computed spectral range.
class spectral_range_error : public error {
 public:
  using error::error;
};

/// Frame cross-covariance was too degenerate to align.
class alignment_error : public error {
 public:
  using error::error;
};

/// A closed form is not implemented for the requested size.
class unsupported_error : public error {
 public:
  using error::error;
};

/// File could not be read, written, or validated.
class io_error : public error {
 public:
  using error::error;
};

}  // namespace vectorheat
