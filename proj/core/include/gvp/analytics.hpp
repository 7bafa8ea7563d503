#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gvp/detector.hpp"
#include "gvp/types.hpp"

namespace gvp::analytics {

struct CoverageSample {
  std::int64_t ts = 0;     // UTC seconds
  double coverage = 0;     // fraction of ROI in [0,1]
  int waste_count = 0;
};

/// Per frame: confidence filter + NMS, waste class only, then ROI coverage.
std::vector<CoverageSample> coverage_series(
    const detect::DetectionStream& stream, const RoiPolygon& roi,
    const detect::DetectorConfig& cfg, int grid_scale = 1);

enum class ProfileKind { hourly, daily, weekday };
const char* profile_kind_name(ProfileKind k);

/// One aggregation bin; count == 0 flags "no data" (mean/min/max unset).
struct ProfileBin {
  std::string label;
  long count = 0;
  double mean = 0;
  double min = 0;
  double max = 0;
};

struct Profile {
  ProfileKind kind = ProfileKind::hourly;
  int tz_offset_min = 0;
  std::vector<ProfileBin> bins;  // hourly: 24, weekday: 7 (Monday first),
                                 // daily: one per local calendar date in span
};

Profile hourly_profile(std::span<const CoverageSample> series,
                       int tz_offset_min);
Profile daily_profile(std::span<const CoverageSample> series,
                      int tz_offset_min);
Profile weekday_profile(std::span<const CoverageSample> series,
                        int tz_offset_min);

struct EventParams {
  double drop_rel = 0.5;        // relative drop for pile/clear
  double rise_abs = 0.05;       // absolute rise for dump
  double clean_level = 0.05;    // coverage at or below this after a clear
  std::int64_t window_s = 1800; // sample pairs at most this far apart
};

enum class EventKind { dump, pile, clear };
const char* event_kind_name(EventKind k);

struct GvpEvent {
  EventKind kind = EventKind::dump;
  std::int64_t start_ts = 0;
  std::int64_t end_ts = 0;
  double coverage_before = 0;
  double coverage_after = 0;
};

/// Compares each pair of samples within `window_s`: a rise of at least
/// rise_abs triggers a dump; a relative drop of at least drop_rel triggers a
/// clear when it ends at or below clean_level, a pile otherwise. Overlapping
/// raw triggers of one kind merge into a single event.
std::vector<GvpEvent> detect_events(std::span<const CoverageSample> series,
                                    const EventParams& params = {});

void write_coverage_csv(const std::string& path,
                        std::span<const CoverageSample> series,
                        int tz_offset_min);
std::vector<CoverageSample> read_coverage_csv(const std::string& path);

std::string profile_to_json(const Profile& profile);
void write_profile_json(const std::string& path, const Profile& profile);
void write_profile_csv(const std::string& path, const Profile& profile);

void write_events_jsonl(const std::string& path,
                        std::span<const GvpEvent> events);

}  // namespace gvp::analytics
