#include "flagcurv/types.hpp"

namespace flagcurv {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::InvalidZermelo: return "InvalidZermelo";
    case ErrorKind::InvalidRanders: return "InvalidRanders";
    case ErrorKind::NotInSigmaTangent: return "NotInSigmaTangent";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::DegeneratePlane: return "DegeneratePlane";
    case ErrorKind::CodimensionNotOne: return "CodimensionNotOne";
    case ErrorKind::MissingThirdDerivative: return "MissingThirdDerivative";
    case ErrorKind::DegenerateFlag: return "DegenerateFlag";
    case ErrorKind::SingularGram: return "SingularGram";
    case ErrorKind::NotOnIndicatrix: return "NotOnIndicatrix";
    case ErrorKind::UnknownPreset: return "UnknownPreset";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

GeometryError::GeometryError(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what),
      kind_(kind) {}

}  // namespace flagcurv
