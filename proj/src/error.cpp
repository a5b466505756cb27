#include "doctrina/error.hpp"

#include <array>

namespace doctrina {

namespace {

constexpr std::array kNames = {
    "ReflexivityViolation",        "AntisymmetryViolation",
    "TransitivityViolation",       "NotAHeytingAlgebra",
    "MeetsRequired",               "CompositionUndefined",
    "AssociativityViolation",      "ProductUMPViolation",
    "TerminalNotUnique",           "FunctorLawViolation",
    "ProductsNotPreserved",        "NaturalitySquareViolation",
    "ReindexIdentityViolation",    "ReindexCompositionViolation",
    "PrerequisiteMissing",         "NaturalityViolation",
    "PreservationViolation",       "LaxInequalityViolation",
    "ComonadLawViolation",         "TwoArrowInequalityViolation",
    "LazyBaseUnsupported",         "CompositeMismatch",
    "UniquenessCounterexample",    "EnumerationBudgetExceeded",
    "PrimaryRequired",             "CoherenceViolation",
    "InternalInvariantViolation",  "TransportWitnessFailure",
    "ConstantDoesNotSatisfyAxiom", "FullnessCounterexample",
    "DecompositionMismatch",       "ProbeTooLarge",
    "FixtureMismatch",             "AtomCapExceeded",
    "IsoMismatch",                 "SyntaxError",
    "UnresolvedReference",         "DuplicateName",
    "UsageError",                  "NotMonotone",
};

static_assert(kNames.size() == static_cast<std::size_t>(Errc::NotMonotone) + 1);

}  // namespace

std::string_view errc_name(Errc code) {
  return kNames[static_cast<std::size_t>(code)];
}

Error::Error(Errc code, const std::string& witness)
    : std::runtime_error(std::string(errc_name(code)) + ": " + witness),
      code_(code),
      witness_(witness) {}

void fail(Errc code, const std::string& witness) { throw Error(code, witness); }

}  // namespace doctrina
