#include "embedgeo/error.hpp"

#include <utility>

namespace embedgeo {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::FewerThanTwoPoints: return "FewerThanTwoPoints";
    case ErrorCode::FewerThanThreePoints: return "FewerThanThreePoints";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::InvalidTolerance: return "InvalidTolerance";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::FlatResponse: return "FlatResponse";
    case ErrorCode::InvalidDf: return "InvalidDf";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ConstantSeries: return "ConstantSeries";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::TooFewValues: return "TooFewValues";
    case ErrorCode::BallContainsOrigin: return "BallContainsOrigin";
    case ErrorCode::InvalidThreshold: return "InvalidThreshold";
    case ErrorCode::InvalidDimension: return "InvalidDimension";
    case ErrorCode::NonpositiveRadius: return "NonpositiveRadius";
    case ErrorCode::InvalidSampleCount: return "InvalidSampleCount";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::DuplicateRecord: return "DuplicateRecord";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::NonPositiveCount: return "NonPositiveCount";
    case ErrorCode::BadRating: return "BadRating";
    case ErrorCode::UnreadableFile: return "UnreadableFile";
    case ErrorCode::UnresolvedContext: return "UnresolvedContext";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::EmptySplit: return "EmptySplit";
    case ErrorCode::SingleClassTraining: return "SingleClassTraining";
    case ErrorCode::MissingLabel: return "MissingLabel";
    case ErrorCode::MissingRating: return "MissingRating";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& message,
                    const std::string& file, std::size_t line) {
  std::string out(to_string(code));
  if (!file.empty()) {
    out += " (" + file;
    if (line > 0) out += ":" + std::to_string(line);
    out += ")";
  } else if (line > 0) {
    out += " (line " + std::to_string(line) + ")";
  }
  out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(compose(code, message, {}, 0)), code_(code) {}

Error::Error(ErrorCode code, const std::string& message, std::string file,
             std::size_t line)
    : std::runtime_error(compose(code, message, file, line)),
      code_(code),
      file_(std::move(file)),
      line_(line) {}

}  // namespace embedgeo
