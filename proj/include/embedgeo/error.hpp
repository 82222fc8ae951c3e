#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace embedgeo {

enum class ErrorCode {
  EmptyInput,
  DimensionMismatch,
  NonFiniteInput,
  FewerThanTwoPoints,
  FewerThanThreePoints,
  KTooLarge,
  InvalidTolerance,
  // stats
  RankDeficient,
  TooFewRows,
  FlatResponse,
  InvalidDf,
  LengthMismatch,
  ConstantSeries,
  TooFewPoints,
  TooFewValues,
  // theory
  BallContainsOrigin,
  InvalidThreshold,
  InvalidDimension,
  NonpositiveRadius,
  InvalidSampleCount,
  // data
  MalformedHeader,
  DuplicateRecord,
  NonFiniteValue,
  MalformedRow,
  NonPositiveCount,
  BadRating,
  UnreadableFile,
  UnresolvedContext,
  // analysis
  ZeroVector,
  EmptySplit,
  SingleClassTraining,
  MissingLabel,
  MissingRating,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure the library reports. Data errors carry the file and the
/// 1-based line they were detected on (line 0 means "not line specific").
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  Error(ErrorCode code, const std::string& message, std::string file,
        std::size_t line);

  ErrorCode code() const noexcept { return code_; }
  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::string file_;
  std::size_t line_ = 0;
};

}  // namespace embedgeo
