#pragma once

#include <stdexcept>
#include <string>

namespace mie {

enum class Errc {
  // Input errors (bad body, bad request).
  NotConvex,
  NotCentrallySymmetric,
  TooFewVertices,
  RayRootNotFound,
  NotUnimodular,
  LambdaOutOfRange,
  InvalidInput,
  IoError,
  // Numerical failures.
  UnresolvedRoot,
  TangencyPresent,
  NoCrossings,
  DegenerateAngle,
  DomainError,
  IterationLimit,
  NoConvergence,
  NotStationary,
  InfeasibleHull,
};

const char* to_string(Errc code) noexcept;

// True for errors caused by the caller's input rather than by the numerics.
bool is_input_error(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace mie
