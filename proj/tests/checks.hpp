#pragma once

#include <string>

#include "gvp/errors.hpp"

/// Runs f and reports the Errc name it threw, or "" when it did not throw.
template <typename F>
std::string thrown_code(F&& f) {
  try {
    f();
  } catch (const gvp::Error& e) {
    return gvp::errc_name(e.code());
  } catch (...) {
    return "<other>";
  }
  return "";
}
