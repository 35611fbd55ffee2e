#pragma once

#include <stdexcept>
#include <string>

namespace nvsq {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// config / input faults (CLI exit code 2)
struct ConfigError : Error { using Error::Error; };
struct UnknownFigure : ConfigError { using ConfigError::ConfigError; };

// model-level failures
struct NoResonance : Error { using Error::Error; };
struct SingularGenerator : Error { using Error::Error; };
struct DegenerateM : Error { using Error::Error; };
struct ApproxInvalid : Error { using Error::Error; };
struct Unstable : Error { using Error::Error; };
struct NonPhysical : Error { using Error::Error; };
struct InvalidRates : Error { using Error::Error; };

// numerics (CLI exit code 4)
struct NumericalError : Error { using Error::Error; };
struct DimensionMismatch : NumericalError { using NumericalError::NumericalError; };
struct DegenerateKernel : NumericalError { using NumericalError::NumericalError; };
struct NoConvergence : NumericalError { using NumericalError::NumericalError; };
struct StepFailure : NumericalError { using NumericalError::NumericalError; };
struct TruncationCapExceeded : NumericalError { using NumericalError::NumericalError; };

} // namespace nvsq
