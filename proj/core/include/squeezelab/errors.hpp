#pragma once

#include <stdexcept>
#include <string>

namespace squeezelab {

// Bad argument value or mismatched inputs.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Request exceeds a supported problem size (e.g. dense joint matrix cap).
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerically undefined configuration, such as dividing by sin(phi) ~ 0.
class SingularConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A fit could not be performed on the supplied samples.
class FitFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace squeezelab
