#include "gpcpd/error.hpp"

namespace gpcpd {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::RankBound: return "rank_bound";
    case ErrorCode::RankDeficient: return "rank_deficient";
    case ErrorCode::DegenerateSpectrum: return "degenerate_spectrum";
    case ErrorCode::ReshapeFailure: return "reshape_failure";
    case ErrorCode::TooLarge: return "too_large";
    case ErrorCode::SingularPencil: return "singular_pencil";
    case ErrorCode::Format: return "format";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::RankBound:
    case ErrorCode::RankDeficient:
    case ErrorCode::DegenerateSpectrum:
    case ErrorCode::ReshapeFailure:
    case ErrorCode::TooLarge:
    case ErrorCode::SingularPencil:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace gpcpd
