#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace crgeo {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3cd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline const double kSqrt2 = std::sqrt(2.0);

// Certified parameter interval.
inline const double kSLow = std::sqrt(105.0 / 3.0);
inline const double kSBar = std::sqrt(125.0 / 3.0);

enum class ErrorKind {
  FormMismatch,
  DegenerateInput,
  InvalidPolar,
  DegenerateSpan,
  NumericFailure,
  UndefinedOperation,
  DegenerateParameter,
  NormalizationFailure,
  DomainError,
  Degenerate,
  RepresentationDegenerate,
  SingularX,
  RealBranch,
  Labeling,
  Construction,
  IdentityViolation,
  Pole,
  Linkage,
  Genericity,
  SamplingResolution,
  DegenerateProjection,
  InvalidArgument,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg, double residual = 0.0)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + msg),
        kind_(kind),
        residual_(residual) {}
  ErrorKind kind() const { return kind_; }
  double residual() const { return residual_; }

 private:
  ErrorKind kind_;
  double residual_;
};

}  // namespace crgeo
