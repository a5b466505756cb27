#pragma once

#include <functional>
#include <set>

#include "doctrina/doctrine.hpp"
#include "doctrina/structure.hpp"

namespace doctrina {

// (F, f) : P -> R with f_A : P(A) -> R(F A).
struct DoctrineMorphism {
  DoctrineRef source;
  DoctrineRef target;
  Functor functor;
  std::function<MonotoneMap(Obj)> component;

  MonotoneMap operator()(Obj a) const { return component(a); }
};

DoctrineMorphism identity_morphism(DoctrineRef d);
// n after m
DoctrineMorphism compose(const DoctrineMorphism& n, const DoctrineMorphism& m);

// f_A P(h) = R(F h) f_B for every h : A -> B among the source objects, and
// each f_A monotone. Throws NaturalityViolation.
void check_naturality(const DoctrineMorphism& m, const Limits& limits, Report& report);

// Preservation of one kind's operations. Never throws for a violation; the
// result carries it. weak_power_objects is reported skipped (no claim).
KindResult preservation_check(const DoctrineMorphism& m, Kind kind, const Limits& limits);

// Naturality plus every requested kind; throws PreservationViolation whose
// witness starts with the kind name.
void validate_morphism(const DoctrineMorphism& m, const std::set<Kind>& preserve, const Limits& limits,
                       Report& report);

struct TwoCellCheck {
  bool strict = false;      // every inequality is an equality
  bool invertible = false;  // theta has an inverse which is again a 2-cell
};

// theta : F -> G natural, and f_A(alpha) <= R(theta_A)(g_A(alpha)).
// Throws LaxInequalityViolation naming (A, alpha).
TwoCellCheck validate_two_cell(const NatTransf& theta, const DoctrineMorphism& m, const DoctrineMorphism& n,
                               const Limits& limits, Report& report);

}  // namespace doctrina
