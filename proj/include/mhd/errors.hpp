#pragma once

#include <stdexcept>
#include <string>

namespace mhd {

/// Invalid or unresolvable configuration (bad resolution, unresolvable mode, bad JSON field).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or incomplete input data (missing snapshots, bad file).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called in a setting it does not support.
class MisuseError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Non-finite coefficient detected during time stepping.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(double time)
      : std::runtime_error("solver blow-up: non-finite coefficient at t = " + std::to_string(time)),
        time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace mhd
