#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "doctrina/doctrine.hpp"
#include "doctrina/limits.hpp"
#include "doctrina/report.hpp"

namespace doctrina {

// Formulas: atoms (identifiers), T, F, ~a, a & b, a | b, a -> b, a <-> b and
// parentheses. -> is right associative and binds weaker than | and &.
//
// Bit i of the table is the value under assignment i, where atom j is true
// iff bit j of i is set. SyntaxError carries "column N"; an unknown atom is
// UnresolvedReference.
Elem truth_table(std::string_view formula, const std::vector<std::string>& atoms);

// Propositional Lindenbaum-Tarski doctrine over the terminal category. A
// class of formulas is stored as its set of satisfying assignments among the
// models of the theory, so the order is entailment modulo the axioms.
struct LtTheory {
  std::vector<std::string> atoms;
  std::vector<std::string> axioms;
  Elem models = 0;  // assignments satisfying every axiom
  DoctrineRef doctrine;

  Elem class_of(std::string_view formula) const { return truth_table(formula, atoms) & models; }
};

inline constexpr unsigned kDefaultAtomCap = 4;

// AtomCapExceeded past atom_cap (at most 6, the fiber universe is 2^atoms
// points); DuplicateName for a repeated atom.
LtTheory propositional_lt(std::vector<std::string> atoms, std::vector<std::string> axioms,
                          unsigned atom_cap = kDefaultAtomCap);

struct LtAxiomIso {
  std::size_t extension_size = 0;  // (LT_T)_phi over t
  std::size_t direct_size = 0;     // LT_{T + phi} over t
};

// (LT_T)_phi against LT_{T + phi}: alpha |-> [alpha] one way, beta |-> beta /\ phi
// the other, both monotone, mutually inverse and natural. Throws IsoMismatch.
LtAxiomIso lt_add_axiom_iso(const std::vector<std::string>& atoms, const std::vector<std::string>& axioms,
                            const std::string& phi, const Limits& limits, Report& report);

}  // namespace doctrina
