#pragma once

#include <stdexcept>
#include <string>

namespace denjoy {

// Base class of every error raised by the library. The kind string is the
// stable identifier reported by the CLI ("TieDetected", "KeaneTie", ...).
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define DENJOY_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

DENJOY_DEFINE_ERROR(NotPrimitive);
DENJOY_DEFINE_ERROR(FactorizationFailure);
DENJOY_DEFINE_ERROR(DivisionByZero);
DENJOY_DEFINE_ERROR(FieldMismatch);
DENJOY_DEFINE_ERROR(ParseError);
DENJOY_DEFINE_ERROR(LengthBudgetExceeded);
DENJOY_DEFINE_ERROR(InsufficientGrowth);
DENJOY_DEFINE_ERROR(SymbolAbsent);
DENJOY_DEFINE_ERROR(TieDetected);
DENJOY_DEFINE_ERROR(HypothesisFailure);
DENJOY_DEFINE_ERROR(NoCandidate);
DENJOY_DEFINE_ERROR(KeaneTie);
DENJOY_DEFINE_ERROR(ReduciblePermutation);
DENJOY_DEFINE_ERROR(ConventionMismatch);
DENJOY_DEFINE_ERROR(CodingMismatch);
DENJOY_DEFINE_ERROR(AtomCollision);
DENJOY_DEFINE_ERROR(DegenerateInterval);
DENJOY_DEFINE_ERROR(OverlapDetected);

#undef DENJOY_DEFINE_ERROR

}  // namespace denjoy
