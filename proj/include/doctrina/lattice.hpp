#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <tuple>
#include <vector>

#include "doctrina/poset.hpp"

namespace doctrina {

// serial: the plain definitional loops, kept as the reference.
// parallel: bitset kernels distributed with OpenMP.
enum class Exec { serial, parallel };

inline constexpr std::int32_t kAbsent = -1;

// Indexed by enumeration position; kAbsent where no glb/lub exists.
struct LatticeTables {
  std::size_t n = 0;
  std::vector<std::int32_t> meet;
  std::vector<std::int32_t> join;
  std::int32_t top = kAbsent;
  std::int32_t bottom = kAbsent;

  friend bool operator==(const LatticeTables&, const LatticeTables&) = default;
};

LatticeTables lattice_tables(const Poset& p, Exec exec = Exec::parallel);

// a -> b = max{c | a /\ c <= b}; kAbsent where that max does not exist.
std::vector<std::int32_t> implication_table(const Poset& p, const LatticeTables& t,
                                            Exec exec = Exec::parallel);
// not a = max{b | a /\ b = bottom}
std::vector<std::int32_t> pseudo_complement_table(const Poset& p, const LatticeTables& t,
                                                  Exec exec = Exec::parallel);

enum class CertKind {
  meets,
  top,
  bottom,
  joins,
  heyting,
  boolean,
  star_autonomous,
  pseudo_complement
};

struct StructureCertificate {
  std::vector<Elem> elements;  // enumeration order used by every table
  std::set<CertKind> kinds;
  LatticeTables lattice;
  std::vector<std::int32_t> implication;
  std::vector<std::int32_t> pseudo_complement;
  std::vector<std::int32_t> negation;  // involutive negation when star_autonomous

  bool has(CertKind k) const { return kinds.count(k) != 0; }
};

StructureCertificate lattice_ops(const Poset& p, Exec exec = Exec::parallel);
// Requires meets and top (MeetsRequired); throws NotAHeytingAlgebra naming the
// first pair without a relative pseudo-complement.
StructureCertificate heyting_ops(const Poset& p, Exec exec = Exec::parallel);

// Checks a /\ b <= not c  <=>  a <= not(b /\ c) and not not a = a.
// `negation` is indexed like the enumeration. Returns the first bad triple.
std::optional<std::tuple<Elem, Elem, Elem>> star_autonomy_violation(
    const Poset& p, std::span<const std::int32_t> negation);
// Tries the negations c -> z for each candidate z in enumeration order.
std::optional<std::vector<std::int32_t>> find_star_negation(const Poset& p,
                                                            const LatticeTables& t);

struct Adjoints {
  std::optional<MonotoneMap> left;
  std::optional<MonotoneMap> right;
};

// Galois search; returned maps are verified monotone and adjoint.
Adjoints adjoints(const MonotoneMap& f, Exec exec = Exec::serial);

struct DownsetQuotient {
  PosetRef downset;
  PosetRef quotient;        // classes [a] with [a] <= [b] iff x /\ a <= b
  MonotoneMap to_quotient;  // a |-> [a]
  MonotoneMap from_quotient;  // [a] |-> x /\ a
};

DownsetQuotient downset_and_quotient(const PosetRef& p, Elem x);

}  // namespace doctrina
