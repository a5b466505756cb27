#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace doctrina {

enum class Errc {
  ReflexivityViolation,
  AntisymmetryViolation,
  TransitivityViolation,
  NotAHeytingAlgebra,
  MeetsRequired,
  CompositionUndefined,
  AssociativityViolation,
  ProductUMPViolation,
  TerminalNotUnique,
  FunctorLawViolation,
  ProductsNotPreserved,
  NaturalitySquareViolation,
  ReindexIdentityViolation,
  ReindexCompositionViolation,
  PrerequisiteMissing,
  NaturalityViolation,
  PreservationViolation,
  LaxInequalityViolation,
  ComonadLawViolation,
  TwoArrowInequalityViolation,
  LazyBaseUnsupported,
  CompositeMismatch,
  UniquenessCounterexample,
  EnumerationBudgetExceeded,
  PrimaryRequired,
  CoherenceViolation,
  InternalInvariantViolation,
  TransportWitnessFailure,
  ConstantDoesNotSatisfyAxiom,
  FullnessCounterexample,
  DecompositionMismatch,
  ProbeTooLarge,
  FixtureMismatch,
  AtomCapExceeded,
  IsoMismatch,
  SyntaxError,
  UnresolvedReference,
  DuplicateName,
  UsageError,
  NotMonotone,
};

std::string_view errc_name(Errc code);

// Every failure carries its code plus a human-readable witness.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& witness);

  Errc code() const noexcept { return code_; }
  const std::string& witness() const noexcept { return witness_; }

 private:
  Errc code_;
  std::string witness_;
};

[[noreturn]] void fail(Errc code, const std::string& witness);

}  // namespace doctrina
