#ifndef ISOCRIT_ERRORS_HPP
#define ISOCRIT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace isocrit {

// Failures split into two classes: bad inputs / unmet preconditions
// (CLI exit 2) and numeric failures discovered while computing (CLI exit 1).
enum class ErrorClass { precondition, numeric };

class Error : public std::runtime_error {
public:
  Error(ErrorClass cls, std::string msg)
      : std::runtime_error(std::move(msg)), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }
  int exit_code() const noexcept {
    return cls_ == ErrorClass::precondition ? 2 : 1;
  }

private:
  ErrorClass cls_;
};

#define ISOCRIT_DEFINE_ERROR(Name, Cls)                                        \
  struct Name : Error {                                                        \
    explicit Name(const std::string& msg)                                      \
        : Error(ErrorClass::Cls, std::string(#Name) + ": " + msg) {}           \
  }

// Parse errors carry the byte offset into the source text.
struct SyntaxError : Error {
  std::size_t offset;
  SyntaxError(std::size_t off, const std::string& msg)
      : Error(ErrorClass::precondition,
              "SyntaxError at byte " + std::to_string(off) + ": " + msg),
        offset(off) {}
};

struct UnknownIdentifier : Error {
  std::size_t offset;
  UnknownIdentifier(std::size_t off, const std::string& name)
      : Error(ErrorClass::precondition,
              "UnknownIdentifier at byte " + std::to_string(off) + ": " + name),
        offset(off) {}
};

ISOCRIT_DEFINE_ERROR(ArityError, precondition);
ISOCRIT_DEFINE_ERROR(DomainError, precondition);
ISOCRIT_DEFINE_ERROR(UnknownGalleryId, precondition);
ISOCRIT_DEFINE_ERROR(DuplicatePointError, precondition);
ISOCRIT_DEFINE_ERROR(NegativeBumpError, precondition);
ISOCRIT_DEFINE_ERROR(DimensionTooHigh, precondition);
ISOCRIT_DEFINE_ERROR(SeedOutsideBox, precondition);
ISOCRIT_DEFINE_ERROR(SingleComponent, precondition);
ISOCRIT_DEFINE_ERROR(InvalidResult, precondition);
ISOCRIT_DEFINE_ERROR(InsufficientSamples, precondition);
ISOCRIT_DEFINE_ERROR(UsageError, precondition);

ISOCRIT_DEFINE_ERROR(NumericError, numeric);
ISOCRIT_DEFINE_ERROR(ZeroOnLoop, numeric);
ISOCRIT_DEFINE_ERROR(UnwrapAmbiguity, numeric);
ISOCRIT_DEFINE_ERROR(NoConvergence, numeric);
ISOCRIT_DEFINE_ERROR(BoundaryZero, numeric);
ISOCRIT_DEFINE_ERROR(SingularPreimage, numeric);
ISOCRIT_DEFINE_ERROR(NoRadiusFound, numeric);
ISOCRIT_DEFINE_ERROR(CalibrationFailure, numeric);
ISOCRIT_DEFINE_ERROR(NoSolutionFound, numeric);
ISOCRIT_DEFINE_ERROR(MultipleSolutions, numeric);

#undef ISOCRIT_DEFINE_ERROR

}  // namespace isocrit

#endif
