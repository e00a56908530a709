#include "mi_ellipse/error.hpp"

namespace mie {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NotConvex: return "NotConvex";
    case Errc::NotCentrallySymmetric: return "NotCentrallySymmetric";
    case Errc::TooFewVertices: return "TooFewVertices";
    case Errc::RayRootNotFound: return "RayRootNotFound";
    case Errc::NotUnimodular: return "NotUnimodular";
    case Errc::LambdaOutOfRange: return "LambdaOutOfRange";
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::IoError: return "IoError";
    case Errc::UnresolvedRoot: return "UnresolvedRoot";
    case Errc::TangencyPresent: return "TangencyPresent";
    case Errc::NoCrossings: return "NoCrossings";
    case Errc::DegenerateAngle: return "DegenerateAngle";
    case Errc::DomainError: return "DomainError";
    case Errc::IterationLimit: return "IterationLimit";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::NotStationary: return "NotStationary";
    case Errc::InfeasibleHull: return "InfeasibleHull";
  }
  return "Unknown";
}

bool is_input_error(Errc code) noexcept {
  switch (code) {
    case Errc::NotConvex:
    case Errc::NotCentrallySymmetric:
    case Errc::TooFewVertices:
    case Errc::RayRootNotFound:
    case Errc::NotUnimodular:
    case Errc::LambdaOutOfRange:
    case Errc::InvalidInput:
    case Errc::IoError:
      return true;
    default:
      return false;
  }
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace mie
