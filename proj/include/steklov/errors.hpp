#pragma once

#include <stdexcept>
#include <string>

namespace steklov {

enum class ErrorCode {
  // Input / validation failures.
  InvalidArgument,
  InvalidShape,
  NonSimplePolygon,
  StepTooCoarse,
  InvalidSpectrumList,
  NoPositiveEigenvalue,
  NotASubmersionChart,
  MalformedInput,
  // Numeric failures.
  DegenerateTriangle,
  ZeroBoundaryTrace,
  SingularInteriorBlock,
  EigensolverNoConvergence,
  ShootingBlowup,
  LeftChartDomain,
  MetricDegenerate,
  GridTooCoarse,
};

const char* to_string(ErrorCode code);

/// True for codes that describe bad input rather than a failed computation.
bool is_validation(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }
  bool is_validation() const noexcept { return steklov::is_validation(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace steklov
