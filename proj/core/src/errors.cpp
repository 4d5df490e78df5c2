#include "xyep/errors.hpp"

namespace xyep {

const char* kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::LambdaSingular: return "LambdaSingular";
    case ErrorKind::EpsilonZero: return "EpsilonZero";
    case ErrorKind::DegenerateMomentum: return "DegenerateMomentum";
    case ErrorKind::TrigSingular: return "TrigSingular";
    case ErrorKind::DefectiveBasis: return "DefectiveBasis";
    case ErrorKind::MapSingular: return "MapSingular";
    case ErrorKind::ChainResidualTooLarge: return "ChainResidualTooLarge";
    case ErrorKind::SingularVEP: return "SingularVEP";
    case ErrorKind::PoleCell: return "PoleCell";
    case ErrorKind::AmbiguousContinuation: return "AmbiguousContinuation";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::SizeLimit: return "SizeLimit";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::LimitRequired: return "LimitRequired";
    case ErrorKind::ClusterAmbiguity: return "ClusterAmbiguity";
    case ErrorKind::VacuumNotFound: return "VacuumNotFound";
    case ErrorKind::CardinalityMismatch: return "CardinalityMismatch";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}

}  // namespace xyep
