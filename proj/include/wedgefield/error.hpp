#pragma once

#include <stdexcept>
#include <string>

namespace wedgefield {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define WEDGEFIELD_ERROR(Name)                                   \
  class Name : public Error {                                    \
   public:                                                       \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

WEDGEFIELD_ERROR(InvalidTransform);
WEDGEFIELD_ERROR(InvalidWedge);
WEDGEFIELD_ERROR(NotOnOrbit);
WEDGEFIELD_ERROR(DegenerateOrbit);
WEDGEFIELD_ERROR(NoConvergence);
WEDGEFIELD_ERROR(QuadratureFailure);
WEDGEFIELD_ERROR(Unsupported);
WEDGEFIELD_ERROR(DegreeMismatch);
WEDGEFIELD_ERROR(DegreeTooLarge);
WEDGEFIELD_ERROR(UnsupportedTwistFunction);
WEDGEFIELD_ERROR(LatticeTooLarge);
WEDGEFIELD_ERROR(OffShell);
WEDGEFIELD_ERROR(WedgeOrderViolation);
WEDGEFIELD_ERROR(SupportViolation);
WEDGEFIELD_ERROR(ConfigError);

#undef WEDGEFIELD_ERROR

}  // namespace wedgefield
