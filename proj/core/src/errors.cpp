#include "gvp/errors.hpp"

namespace gvp {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::zero_roi_area: return "ZeroRoiArea";
    case Errc::out_of_range: return "OutOfRange";
    case Errc::parse_error: return "ParseError";
    case Errc::empty_source: return "EmptySource";
    case Errc::count_exceeds_train: return "CountExceedsTrain";
    case Errc::non_monotonic_timestamps: return "NonMonotonicTimestamps";
    case Errc::duplicate_frame_id: return "DuplicateFrameId";
    case Errc::adapter_crashed: return "AdapterCrashed";
    case Errc::protocol_violation: return "ProtocolViolation";
    case Errc::empty_series: return "EmptySeries";
    case Errc::missing_annotations: return "MissingAnnotations";
    case Errc::invalid_config: return "InvalidConfig";
    case Errc::sigma_too_large: return "SigmaTooLarge";
    case Errc::io_error: return "IoError";
  }
  return "Error";
}

}  // namespace gvp
