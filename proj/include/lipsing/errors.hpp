#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lipsing {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "Error"; }
};

#define LIPSING_DEFINE_ERROR(Name)                                  \
    class Name : public Error {                                     \
      public:                                                       \
        using Error::Error;                                         \
        const char* kind() const noexcept override { return #Name; } \
    }

LIPSING_DEFINE_ERROR(InvalidComplex);
LIPSING_DEFINE_ERROR(DisconnectedPair);
LIPSING_DEFINE_ERROR(DisconnectedComplex);
LIPSING_DEFINE_ERROR(BasepointMismatch);
LIPSING_DEFINE_ERROR(SizeBudgetExceeded);
LIPSING_DEFINE_ERROR(NeverFills);
LIPSING_DEFINE_ERROR(InvalidSystem);
LIPSING_DEFINE_ERROR(InsufficientConvergence);
LIPSING_DEFINE_ERROR(EmptyInput);
LIPSING_DEFINE_ERROR(InvalidArgument);
LIPSING_DEFINE_ERROR(HypothesisViolated);
LIPSING_DEFINE_ERROR(ConeNotLinear);
LIPSING_DEFINE_ERROR(FiberUnstable);
LIPSING_DEFINE_ERROR(ZeroPolynomial);

#undef LIPSING_DEFINE_ERROR

/// Raised by the polynomial parser; carries the byte offset of the problem.
class ParseError : public Error {
  public:
    ParseError(const std::string& message, std::size_t position)
        : Error(message + " at position " + std::to_string(position)), position_(position)
    {
    }
    std::size_t position() const noexcept { return position_; }
    const char* kind() const noexcept override { return "ParseError"; }

  private:
    std::size_t position_;
};

/// A partition breakpoint of a transferred loop had no target vertex within eps.
class NoNearbyPoint : public Error {
  public:
    NoNearbyPoint(std::size_t breakpoint, double distance)
        : Error("no target vertex within eps of breakpoint " + std::to_string(breakpoint) +
                " (nearest at " + std::to_string(distance) + ")"),
          breakpoint_(breakpoint), distance_(distance)
    {
    }
    std::size_t breakpoint() const noexcept { return breakpoint_; }
    double distance() const noexcept { return distance_; }
    const char* kind() const noexcept override { return "NoNearbyPoint"; }

  private:
    std::size_t breakpoint_;
    double distance_;
};

}   // namespace lipsing
