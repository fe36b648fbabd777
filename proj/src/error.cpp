#include "novikov/error.hpp"

namespace novikov {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::invalid_data: return "invalid data";
    case ErrorCode::window_too_small: return "window too small";
    case ErrorCode::non_monotone: return "non-monotone coordinate map";
    case ErrorCode::nan_detected: return "NaN detected";
    case ErrorCode::monitor_violation: return "monitor violation";
    case ErrorCode::consistency_failure: return "consistency failure";
    case ErrorCode::out_of_window: return "out of window";
    case ErrorCode::pre_breaking_only: return "pre-breaking only";
    case ErrorCode::config: return "configuration error";
    case ErrorCode::io: return "I/O error";
  }
  return "unknown error";
}

}  // namespace novikov
