#pragma once

#include <stdexcept>
#include <string>

namespace verso {

enum class ErrorKind {
  EmptyWord,
  NoVowel,
  UnsupportedLanguage,
  EmptyVerse,
  NoStressedSyllable,
  TooFewVerses,
  ParseError,
  UnsatisfiableRule,
  DuplicateName,
  EmptyCatalog,
  EmptyInput,
  InvalidFractions,
  LengthMismatch,
  UnknownLabel,
  DegenerateClass,
  NonPositiveProbability,
  IoError,
};

/// Single exception type for all analysis errors; `kind()` tells callers
/// which contract was violated, `what()` carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace verso
