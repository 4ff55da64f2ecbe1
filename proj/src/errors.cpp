#include "steklov/errors.hpp"

namespace steklov {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidShape: return "InvalidShape";
    case ErrorCode::NonSimplePolygon: return "NonSimplePolygon";
    case ErrorCode::StepTooCoarse: return "StepTooCoarse";
    case ErrorCode::InvalidSpectrumList: return "InvalidSpectrumList";
    case ErrorCode::NoPositiveEigenvalue: return "NoPositiveEigenvalue";
    case ErrorCode::NotASubmersionChart: return "NotASubmersionChart";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::ZeroBoundaryTrace: return "ZeroBoundaryTrace";
    case ErrorCode::SingularInteriorBlock: return "SingularInteriorBlock";
    case ErrorCode::EigensolverNoConvergence: return "EigensolverNoConvergence";
    case ErrorCode::ShootingBlowup: return "ShootingBlowup";
    case ErrorCode::LeftChartDomain: return "LeftChartDomain";
    case ErrorCode::MetricDegenerate: return "MetricDegenerate";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
  }
  return "Unknown";
}

bool is_validation(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidShape:
    case ErrorCode::NonSimplePolygon:
    case ErrorCode::StepTooCoarse:
    case ErrorCode::InvalidSpectrumList:
    case ErrorCode::NoPositiveEigenvalue:
    case ErrorCode::NotASubmersionChart:
    case ErrorCode::MalformedInput:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace steklov
