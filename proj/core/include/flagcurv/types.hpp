#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace flagcurv {

/// Ambient and chart vectors are small (n <= 8), so dynamic Eigen storage is
/// used throughout.
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class ErrorKind {
  ZeroVector,
  InvalidZermelo,
  InvalidRanders,
  NotInSigmaTangent,
  RankDeficient,
  DegeneratePlane,
  CodimensionNotOne,
  MissingThirdDerivative,
  DegenerateFlag,
  SingularGram,
  NotOnIndicatrix,
  UnknownPreset,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure in the library surfaces as a GeometryError carrying its kind.
class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// h(a, b) for a symmetric coefficient matrix h.
inline double inner(const Mat& h, const Vec& a, const Vec& b) {
  return a.dot(h * b);
}

inline double norm_h(const Mat& h, const Vec& a) {
  return std::sqrt(inner(h, a, a));
}

}  // namespace flagcurv
