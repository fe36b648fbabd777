#pragma once

#include <stdexcept>
#include <string>

namespace novikov {

enum class ErrorCode {
  invalid_argument,
  invalid_data,
  window_too_small,
  non_monotone,
  nan_detected,
  monitor_violation,
  consistency_failure,
  out_of_window,
  pre_breaking_only,
  config,
  io,
};

const char* to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace novikov
