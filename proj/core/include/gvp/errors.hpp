#pragma once

#include <stdexcept>
#include <string>

namespace gvp {

enum class Errc {
  zero_roi_area,
  out_of_range,
  parse_error,
  empty_source,
  count_exceeds_train,
  non_monotonic_timestamps,
  duplicate_frame_id,
  adapter_crashed,
  protocol_violation,
  empty_series,
  missing_annotations,
  invalid_config,
  sigma_too_large,
  io_error,
};

const char* errc_name(Errc c);

/// Toolkit-wide exception. `code()` is the stable machine-readable class;
/// the message always starts with errc_name(code).
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace gvp
