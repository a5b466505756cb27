#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "doctrina/doctrine.hpp"
#include "doctrina/lattice.hpp"

namespace doctrina {

// Order operations on one fiber. Fibers up to kTableLimit elements are
// tabulated by brute force; larger subset lattices use their closed forms;
// anything else is left undecided (enumerable() false or kinds empty).
class FiberOps {
 public:
  static constexpr std::size_t kTableLimit = 256;

  FiberOps(PosetRef p, const Limits& limits);
  // Stand-in for a fiber the doctrine refuses to build (ProbeTooLarge):
  // neither enumerable nor decided, so every check skips it.
  static std::shared_ptr<const FiberOps> unavailable();

  const Poset& poset() const { return *p_; }
  const PosetRef& poset_ref() const { return p_; }
  bool enumerable() const { return enumerable_; }
  bool decided() const { return decided_; }
  bool has(CertKind k) const { return kinds_.count(k) != 0; }
  const std::vector<Elem>& elements() const { return els_; }
  std::size_t index(Elem e) const;

  // Callers check has() first; otherwise these throw PrerequisiteMissing.
  Elem meet(Elem a, Elem b) const;
  Elem join(Elem a, Elem b) const;
  Elem top() const;
  Elem bottom() const;
  Elem implies(Elem a, Elem b) const;
  Elem pseudo_complement(Elem a) const;
  // the involutive negation found for star_autonomous
  Elem negation(Elem a) const;

 private:
  FiberOps() = default;
  Elem pick(std::int32_t i, std::string_view what) const;

  PosetRef p_;
  const SubsetLattice* subset_ = nullptr;
  bool enumerable_ = false;
  bool decided_ = false;
  std::set<CertKind> kinds_;
  std::vector<Elem> els_;
  std::optional<StructureCertificate> cert_;
};

using FiberOpsRef = std::shared_ptr<const FiberOps>;

enum class Kind {
  primary,
  elementary,
  existential,
  universal,
  implicational,
  bounded,
  joins,
  heyting,
  boolean,
  star_autonomous,
  pseudo_complements,
  weak_power_objects,
};

inline constexpr Kind kAllKinds[] = {
    Kind::primary,  Kind::elementary,      Kind::existential,        Kind::universal,
    Kind::implicational, Kind::bounded,    Kind::joins,              Kind::heyting,
    Kind::boolean,  Kind::star_autonomous, Kind::pseudo_complements, Kind::weak_power_objects,
};

std::string_view kind_name(Kind k);
std::optional<Kind> kind_from_name(std::string_view name);
// The kind that must hold first (primary for most), nullopt for primary itself.
std::optional<Kind> prerequisite(Kind k);

struct KindResult {
  Kind kind = Kind::primary;
  Outcome outcome = Outcome::skipped;
  std::string witness;  // the violation, the skip reason, or a summary of the witnesses
  std::map<std::string, bool> flags;
};

struct StructureReport {
  std::vector<KindResult> results;

  const KindResult* find(Kind k) const;
  bool holds(Kind k) const;
  void append_to(Report& r, std::string_view prefix = "structure: ") const;
};

struct EqualitySearch {
  std::optional<Elem> delta;
  bool unique = false;
  bool skipped = false;  // fiber too large or budget spent
};

// Shared per-doctrine state: fiber operations and hom-sets among the checked
// objects, so that detecting several kinds does not redo the tabulation.
class StructureContext {
 public:
  StructureContext(const Doctrine& d, const Limits& limits);

  const Doctrine& doctrine() const { return d_; }
  const Category& base() const { return *d_.base(); }
  const Limits& limits() const { return limits_; }
  const FiberOps& ops(Obj a);
  const HomTable& homs() const { return homs_; }
  const std::vector<Arrow>& arrows() const { return arrows_; }
  // Work counter shared by all checks run through this context.
  Budget& budget() { return budget_; }

  // memo tables filled by the detectors
  std::map<Kind, KindResult> results;
  std::map<Obj, EqualitySearch> equalities;
  std::map<std::pair<Obj, Obj>, std::optional<MonotoneMap>> exists_memo, forall_memo;
  std::map<Obj, std::optional<std::pair<Obj, Elem>>> power_memo;

 private:
  const Doctrine& d_;
  Limits limits_;
  std::map<Obj, FiberOpsRef> ops_;
  HomTable homs_;
  std::vector<Arrow> arrows_;
  Budget budget_;
};

// Throws PrerequisiteMissing when the prerequisite kind does not hold.
KindResult detect_structure(const Doctrine& d, Kind kind, const Limits& limits);
KindResult detect_structure(StructureContext& ctx, Kind kind);
// Every kind; a missing prerequisite is recorded as a failure.
StructureReport detect_all(const Doctrine& d, const Limits& limits);

// ---- witnesses shared with the transport checks ----

// First element of P(A x A) in fiber order meeting clauses (1) and (2).
EqualitySearch fibered_equality(StructureContext& ctx, Obj a);
// Clauses (1) and (2) for a given candidate; returns the failed clause.
std::optional<std::string> equality_clauses(StructureContext& ctx, Obj a, Elem delta);
// Clause (3): delta_A boxtimes delta_B <= delta_{A x B}.
std::optional<std::string> equality_product_clause(StructureContext& ctx, Obj a, Obj b, Elem da, Elem db,
                                                   Elem dab);

// Left / right adjoint of P(pr1) : P(C) -> P(C x B).
std::optional<MonotoneMap> exists_along(StructureContext& ctx, Obj c, Obj b);
std::optional<MonotoneMap> forall_along(StructureContext& ctx, Obj c, Obj b);

// Beck-Chevalley and Frobenius for a family of quantifiers given per (C, B).
// A quantifier returns nullopt when it does not exist and throws
// EnumerationBudgetExceeded when it cannot be computed; the latter is a skip.
using Quantifier = std::function<std::optional<MonotoneMap>(Obj c, Obj b)>;
std::optional<std::string> exists_clauses(StructureContext& ctx, const Quantifier& ex, bool* skipped);
std::optional<std::string> forall_clauses(StructureContext& ctx, const Quantifier& all, bool* skipped,
                                          bool* frobenius);

// First (omega, in) in object then fiber order passing weak_power_clauses.
// `undecided` is set when some candidate could not be checked.
std::optional<std::pair<Obj, Elem>> weak_power_object(StructureContext& ctx, Obj a, bool* undecided);
// Every phi in P(A x B) is P(id x u)(in) for some u : B -> omega.
std::optional<std::string> weak_power_clauses(StructureContext& ctx, Obj a, Obj omega, Elem in,
                                              bool* skipped);

}  // namespace doctrina
