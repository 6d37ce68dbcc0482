#pragma once

#include <stdexcept>
#include <string>

namespace cantor {

// Base for everything this library throws.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input text (numbers, patterns, schedule/test/lattice files).
struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

// An enumeration or recursion guard was exceeded; raising the guard is the fix.
struct GuardError : Error {
  explicit GuardError(const std::string& msg) : Error(msg) {}
};

// A measure oracle failed to produce an answer.
struct OracleError : Error {
  explicit OracleError(const std::string& msg) : Error(msg) {}
};

// Precondition violated on otherwise well-formed input (alpha out of range,
// input prefix too short, grading violation, monotonicity rejection, ...).
struct DomainError : Error {
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

// An inexact oracle cannot separate a value from a threshold at the
// precision it was asked for.
struct PrecisionError : Error {
  explicit PrecisionError(const std::string& msg) : Error(msg) {}
};

}  // namespace cantor
