// Minimal detector adapter: one empty detection record per input frame path.
// Useful for smoke-testing pipelines and as a template for real adapters.
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "gvp/timeutil.hpp"

int main() {
  std::string line;
  std::int64_t fallback_ts = 0;
  while (std::getline(std::cin, line)) {
    if (line.empty()) continue;
    const std::string stem = std::filesystem::path(line).stem().string();
    std::int64_t ts = 0;
    if (!gvp::parse_frame_timestamp(stem, ts)) ts = fallback_ts;
    fallback_ts = ts + 1;
    std::cout << "{\"frame_id\":\"" << stem << "\",\"ts\":" << ts
              << ",\"boxes\":[]}" << std::endl;
  }
  return 0;
}
