#pragma once

#include <stdexcept>
#include <string>

namespace ballapprox {

/// Base class for every error raised by the library.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "GeometryError"; }
};

#define BALLAPPROX_DEFINE_ERROR(Name)                                  \
  class Name : public GeometryError {                                  \
   public:                                                             \
    using GeometryError::GeometryError;                                \
    const char* kind() const noexcept override { return #Name; }       \
  }

/// Input points do not span the ambient space.
BALLAPPROX_DEFINE_ERROR(DegenerateInput);
/// Two nearly identical hyperplanes classify some point differently.
BALLAPPROX_DEFINE_ERROR(ToleranceConflict);
BALLAPPROX_DEFINE_ERROR(OriginNotInterior);
BALLAPPROX_DEFINE_ERROR(UnsupportedDimension);
BALLAPPROX_DEFINE_ERROR(NotCircumscribed);
BALLAPPROX_DEFINE_ERROR(UnboundedDraw);
BALLAPPROX_DEFINE_ERROR(ContainmentViolated);
BALLAPPROX_DEFINE_ERROR(Unbounded);
BALLAPPROX_DEFINE_ERROR(CInvalid);
BALLAPPROX_DEFINE_ERROR(ConfigError);
BALLAPPROX_DEFINE_ERROR(ParseError);

#undef BALLAPPROX_DEFINE_ERROR

}  // namespace ballapprox
