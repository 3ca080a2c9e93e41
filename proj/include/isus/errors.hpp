#pragma once

#include <stdexcept>
#include <string>

namespace isus {

/// Invalid parameters or configuration (bad interval, c outside (0,1], ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A sample was presented as drawn from g but g vanishes there.
class MisconfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A sample with f(x) h(x) != 0 fell outside the pruning set C.
class SupportViolationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A nonzero control variate was combined with a pruning set that does not
/// contain the target support F.
class ControlVariateSupportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An output file could not be written or read back.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace isus
