#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eddy {

// A simulated path blew up (NaN, or step size collapse under the CFL limit).
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, std::size_t path, double time)
      : std::runtime_error(what + " on path " + std::to_string(path) + " at t = " + std::to_string(time)),
        reason_(what),
        path_(path),
        time_(time) {}

  const std::string& reason() const { return reason_; }
  std::size_t path() const { return path_; }
  double time() const { return time_; }

 private:
  std::string reason_;
  std::size_t path_;
  double time_;
};

}  // namespace eddy
