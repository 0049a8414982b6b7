#ifndef NRMSYM_ERRORS_HPP
#define NRMSYM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nrmsym {

// Base for everything thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid user input: bad frames, words, seed blocks, subgroup sets.
// CLI maps these to exit code 2.
struct ValidationError : Error {
  using Error::Error;
};

// A numerical self-check failed. These indicate either a bug or seed data
// far outside tolerance. CLI maps these to exit code 3.
struct NumericalError : Error {
  using Error::Error;
};

struct FrameMismatch : ValidationError {
  using ValidationError::ValidationError;
};

struct ClosureExceedsCap : ValidationError {
  using ValidationError::ValidationError;
};

struct NotASubgroup : ValidationError {
  using ValidationError::ValidationError;
};

struct ParseError : ValidationError {
  ParseError(const std::string& msg, int line, int column)
      : ValidationError(msg + " (line " + std::to_string(line) + ", column " +
                        std::to_string(column) + ")"),
        line(line),
        column(column) {}
  int line;
  int column;
};

// Seed blocks incompatible with the symmetry-propagation relations.
struct SeedInconsistency : ValidationError {
  using ValidationError::ValidationError;
};

struct NotHermitian : NumericalError {
  using NumericalError::NumericalError;
};

struct NoConvergence : NumericalError {
  using NumericalError::NumericalError;
};

struct DegenerateRandomCombination : NumericalError {
  using NumericalError::NumericalError;
};

struct NonIntegralDimension : NumericalError {
  using NumericalError::NumericalError;
};

struct BlockExtractionFailed : NumericalError {
  using NumericalError::NumericalError;
};

struct ReciprocityMismatch : NumericalError {
  using NumericalError::NumericalError;
};

struct NonIntegralMultiplicity : NumericalError {
  using NumericalError::NumericalError;
};

struct SectorDegeneracyMismatch : NumericalError {
  using NumericalError::NumericalError;
};

struct NotSymmetrized : NumericalError {
  using NumericalError::NumericalError;
};

// A requested symmetrized state has zero amplitude: the paired spin
// multiplicity is absent, i.e. the level is spin-statistically forbidden.
// Not a bug; callers are expected to handle it.
struct ZeroVector : Error {
  using Error::Error;
};

}  // namespace nrmsym

#endif
