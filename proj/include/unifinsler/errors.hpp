#pragma once

#include <stdexcept>
#include <string>

namespace unifinsler {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define UNIFINSLER_ERROR_TYPE(Name)     \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  }

UNIFINSLER_ERROR_TYPE(DimensionMismatch);
UNIFINSLER_ERROR_TYPE(InvalidMatrix);
UNIFINSLER_ERROR_TYPE(NotSkewHermitian);
UNIFINSLER_ERROR_TYPE(NotUnitary);
UNIFINSLER_ERROR_TYPE(NotNormal);
UNIFINSLER_ERROR_TYPE(NoConvergence);
UNIFINSLER_ERROR_TYPE(InvalidP);
UNIFINSLER_ERROR_TYPE(AntipodalSpectrum);
UNIFINSLER_ERROR_TYPE(HypothesisViolation);
UNIFINSLER_ERROR_TYPE(SpreadViolation);
UNIFINSLER_ERROR_TYPE(RadiusViolation);
UNIFINSLER_ERROR_TYPE(LengthParameterExceeded);
UNIFINSLER_ERROR_TYPE(UnsupportedKind);
UNIFINSLER_ERROR_TYPE(NotInSubspace);
UNIFINSLER_ERROR_TYPE(InfeasibleStart);
UNIFINSLER_ERROR_TYPE(NotHomomorphism);
UNIFINSLER_ERROR_TYPE(RadiusTooLarge);
UNIFINSLER_ERROR_TYPE(NotProjection);
UNIFINSLER_ERROR_TYPE(ConfigError);

#undef UNIFINSLER_ERROR_TYPE

}  // namespace unifinsler
