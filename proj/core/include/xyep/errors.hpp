#pragma once

#include <stdexcept>
#include <string>

namespace xyep {

enum class ErrorKind {
  NonConvergence,
  DegenerateInput,
  LambdaSingular,
  EpsilonZero,
  DegenerateMomentum,
  TrigSingular,
  DefectiveBasis,
  MapSingular,
  ChainResidualTooLarge,
  SingularVEP,
  PoleCell,
  AmbiguousContinuation,
  ZeroVector,
  SizeLimit,
  NoConvergence,
  LimitRequired,
  ClusterAmbiguity,
  VacuumNotFound,
  CardinalityMismatch,
  InvalidConfig,
};

const char* kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace xyep
