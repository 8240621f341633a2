#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gpcpd {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  RankBound,          // requested rank violates an algorithmic bound
  RankDeficient,      // a least-squares coefficient matrix lost column rank
  DegenerateSpectrum, // repeated eigenvalues in the xi-combination
  ReshapeFailure,     // reshaped factors are not Kronecker rank-1
  TooLarge,           // exact combinatorial computation refused
  SingularPencil,     // GEVD pencil singular or eigenvalues not distinct
  Format,             // malformed file contents
  Io,
};

std::string_view to_string(ErrorCode code);

/// True for codes that report a numerical failure rather than bad input.
bool is_numerical(ErrorCode code);

/// Exception thrown by every library operation.
///
/// Optional context fields are -1 when not applicable: `mode()` names the
/// offending tensor mode (0-based), `numerical_rank()` the rank detected for a
/// deficient matrix, `byte_offset()` the parse position inside a file.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  std::int64_t mode() const noexcept { return mode_; }
  std::int64_t numerical_rank() const noexcept { return numerical_rank_; }
  std::int64_t byte_offset() const noexcept { return byte_offset_; }

  Error& with_mode(std::int64_t mode) {
    mode_ = mode;
    return *this;
  }
  Error& with_numerical_rank(std::int64_t rank) {
    numerical_rank_ = rank;
    return *this;
  }
  Error& with_byte_offset(std::int64_t offset) {
    byte_offset_ = offset;
    return *this;
  }

 private:
  ErrorCode code_;
  std::int64_t mode_ = -1;
  std::int64_t numerical_rank_ = -1;
  std::int64_t byte_offset_ = -1;
};

}  // namespace gpcpd
