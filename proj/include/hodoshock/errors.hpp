#pragma once

#include <stdexcept>
#include <string>

namespace hodoshock {

/// Base class for every failure the library reports.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NonPhysicalState : Error { using Error::Error; };   // q >= q_bar, rho <= 0
struct FluxTooLarge : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct EntropyViolation : Error { using Error::Error; };
struct BadSlope : Error { using Error::Error; };
struct BadState : Error { using Error::Error; };
struct DegenerateCoefficient : Error { using Error::Error; };
struct NotOnPolar : Error { using Error::Error; };
struct SingularSystem : Error { using Error::Error; };
struct SonicDegeneracy : Error { using Error::Error; };
struct ZeroGradient : Error { using Error::Error; };
struct TangentialSlope : Error { using Error::Error; };
struct BlendNotConvex : Error { using Error::Error; };
struct DegenerateWidth : Error { using Error::Error; };
struct SolverBreakdown : Error { using Error::Error; };
struct OutOfDomain : Error { using Error::Error; };
struct QuadFailure : Error { using Error::Error; };
struct StepFailure : Error { using Error::Error; };
struct InsufficientData : Error { using Error::Error; };
struct ZeroDenominator : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace hodoshock
