#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "doctrina/comonad.hpp"
#include "doctrina/structure.hpp"

namespace doctrina {

// K = X x -, k_A = P(pr1)(phi) /\ P(pr2)(-), gamma_A = <pr1, id>, epsilon = pr2.
// phi = nullopt means the top of P(X) without asking P for meets; any other
// phi needs P primary (PrimaryRequired).
Comonad build_reader_comonad(DoctrineRef p, Obj x, std::optional<Elem> phi, const Limits& limits);

struct Extension {
  DoctrineRef source;
  Obj x = 0;
  std::optional<Elem> phi;  // nullopt: the constant is added without an axiom
  Comonad comonad;
  // C_X with P_(X,phi) realized as principal downsets P(X x A) below P(pr1)(phi)
  KleisliBundle bundle;
  // the generic Kleisli fibers, kept for the elementwise comparison
  DoctrineRef generic;
  Arrow constant;  // id_X : t ~> X

  const DoctrineRef& doctrine() const { return bundle.doctrine; }
  const DoctrineMorphism& morphism() const { return bundle.universal.morphism; }
  // P(pr1)(phi) in P(X x A), the top of the extended fiber
  Elem top(Obj a) const;
};

// Builds the comonad and the Kleisli bundle, swaps in the downset fibers after
// comparing them elementwise with the generic ones, and validates (F_X, f)
// (as a primary homomorphism when P is primary).
Extension extend(DoctrineRef p, Obj x, std::optional<Elem> phi, const Limits& limits, Report& report);
Extension add_constant(DoctrineRef p, Obj x, const Limits& limits, Report& report);
Extension add_axiom(DoctrineRef p, Elem phi, const Limits& limits, Report& report);

// First object where the generic Kleisli fiber and the downset differ, or
// where the top is not P(pr1)(phi).
std::optional<std::string> extension_fiber_difference(const Extension& e, const Limits& limits);

// The quotient view of one extended fiber: [a] <= [b] iff P(pr1)(phi) /\ a <= b.
DownsetQuotient quotient_presentation(const Extension& e, Obj a);

struct NewConstant {
  Elem value = 0;  // P_(X,phi)(id_X)(f_X(phi))
  bool is_top = false;
};

// InternalInvariantViolation when the value is not the top of P_(X,phi)(t).
NewConstant interpret_new_constant(const Extension& e);

struct TransportRow {
  Kind kind = Kind::primary;
  Outcome witness = Outcome::skipped;   // explicit construction against its clauses
  Outcome detected = Outcome::skipped;  // detect_structure on the extension
  Outcome preserved = Outcome::skipped;
  bool preservation_claimed = true;  // false for weak power objects
  std::string detail;
  std::map<std::string, bool> flags;
};

struct TransportMatrix {
  std::vector<TransportRow> rows;  // one per kind held by P

  const TransportRow* find(Kind k) const;
  void append_to(Report& r) const;
};

// For every kind P holds: builds the witness in P_(X,phi), checks its clauses
// (TransportWitnessFailure naming kind, object and elements), runs detection
// on the extension and the preservation check for (F_X, f).
TransportMatrix transport_report(const Extension& e, const Limits& limits, Report& report);

// A model of (X, phi) in R: (G, g) : P -> R and c : t -> G(X).
struct Model {
  DoctrineMorphism morphism;
  Arrow constant;
};

struct ModelFactorization {
  DoctrineMorphism morphism;  // (G', g') : P_(X,phi) -> R
  OplaxMorphism oplax;        // (G, g) with j_A = <c . !, id>
  UniquenessMode mode = UniquenessMode::competitors;
  std::map<Kind, Outcome> preserved;  // filled with check_preservation
};

// ConstantDoesNotSatisfyAxiom unless top <= R(c)(g_X(phi)); CompositeMismatch
// when (G', g') (F_X, f) != (G, g) or G'(id_X) != c.
ModelFactorization factorize_model(const Extension& e, const Model& m, const std::vector<Competitor>& competitors,
                                   bool check_preservation, const Limits& limits, Report& report);

enum class UniquenessNotion { strict, iso };

// (a) faithfulness recorded, (b) every 2-cell theta : (G, g) => (H, h) with
// theta_X c = d lifts to a 2-cell between the factorizations and conversely
// (FullnessCounterexample), (c) essential surjectivity via factorize_model,
// (d) competitors with the same composite and constant equal the
// factorization strictly, or up to an invertible 2-cell under `iso`
// (UniquenessCounterexample).
void uniqueness_and_fullness_check(const Extension& e, const Model& m, const std::optional<Model>& other,
                                   const std::vector<Competitor>& competitors, UniquenessNotion notion,
                                   const Limits& limits, Report& report);

// An invertible 2-cell m => n, searched under limits.search_budget.
std::optional<Family> invertible_two_cell(const DoctrineMorphism& m, const DoctrineMorphism& n,
                                          const Limits& limits);

struct Conservativity {
  bool conservative = false;
  std::optional<bool> criterion;  // top <= exists^X_t phi, when P is existential
  std::string witness;            // (A, alpha, beta) with f alpha <= f beta but not alpha <= beta
  bool skipped = false;
};

Conservativity conservativity_check(const Extension& e, const Limits& limits, Report& report);

// (P_X)_phi against P_(X,phi): fibers, hom-sets, reindexing tables and the
// composite 1-arrow. Throws DecompositionMismatch.
void compose_constructions_check(DoctrineRef p, Obj x, Elem phi, const Limits& limits, Report& report);

// l_A = <pr2, pr1, pr3> : X x (Y x A) -> Y x (X x A), its five coherence
// diagrams, the 2-cell inequality, invertibility and uniqueness from the
// projection equations, and the composite against the reader comonad for
// (X x Y, P(pr1)phi /\ P(pr2)psi). Throws CoherenceViolation.
void distributive_law_check(DoctrineRef p, Obj x, Elem phi, Obj y, Elem psi, const Limits& limits,
                            Report& report);

}  // namespace doctrina
