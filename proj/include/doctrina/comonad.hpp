#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "doctrina/category.hpp"
#include "doctrina/doctrine.hpp"
#include "doctrina/morphism.hpp"

namespace doctrina {

// A comonad on an indexed poset P: a base comonad (K, gamma, epsilon) with a
// fiber family k_A : P(A) -> P(KA) such that gamma and epsilon are 2-arrows.
struct Comonad {
  DoctrineRef doctrine;
  Functor functor;  // K
  std::function<MonotoneMap(Obj)> k;
  NatTransf gamma;    // K -> KK
  NatTransf epsilon;  // K -> Id

  const Category& base() const { return *doctrine->base(); }
};

Comonad identity_comonad(DoctrineRef d);

// Functor laws, naturality of gamma, epsilon and k, the three comonad
// equations and the two 2-arrow inequalities. Throws ComonadLawViolation or
// TwoArrowInequalityViolation.
void validate_comonad(const Comonad& k, const Limits& limits, Report& report);

// Kleisli category in the squiggly presentation: objects of the base, an
// arrow A ~> B is a base arrow KA -> B stored with the same rep. Composition
// is h . K(g) . gamma_A, identities are epsilon_A. Products are the base
// ones with projections pr_i . epsilon.
class KleisliCategory final : public Category {
 public:
  explicit KleisliCategory(Comonad k);

  std::vector<Obj> objects() const override { return base_->objects(); }
  bool lazy() const override { return base_->lazy(); }
  std::string object_label(Obj a) const override { return base_->object_label(a); }
  std::string arrow_label(const Arrow& f) const override;
  std::optional<Obj> find_object(std::string_view label) const override { return base_->find_object(label); }

  Arrow identity(Obj a) const override;
  Arrow compose(const Arrow& g, const Arrow& f) const override;
  std::optional<std::vector<Arrow>> hom(Obj a, Obj b, std::size_t cap) const override;

  bool has_products() const override { return base_->has_products(); }
  Obj terminal() const override { return base_->terminal(); }
  Arrow bang(Obj a) const override;
  Obj product(Obj a, Obj b) const override { return base_->product(a, b); }
  Arrow pr1(Obj a, Obj b) const override;
  Arrow pr2(Obj a, Obj b) const override;
  Arrow pair(const Arrow& f, const Arrow& g) const override;
  bool strict_units() const override { return base_->strict_units(); }
  bool strict_assoc() const override { return base_->strict_assoc(); }

  const Comonad& comonad() const { return k_; }
  // KA -> B for a squiggly A ~> B, and back
  Arrow underlying(const Arrow& g) const;
  Arrow lift(Obj a, const Arrow& base_arrow) const;
  // F_K on arrows: f . epsilon_A
  Arrow free(const Arrow& f) const;
  // K(g) . gamma_A : KA -> KB
  Arrow cofree_image(const Arrow& g) const;

 private:
  Comonad k_;
  CategoryRef base_;
};

// Oplax comonad morphism from a comonad into the identity comonad on R:
// (F, f) : P -> R together with j_A : FA -> F(KA) such that
// f_A(alpha) <= R(j_A) f_KA k_A(alpha), F(epsilon_A) j_A = id and
// F(gamma_A) j_A = j_KA j_A.
struct OplaxMorphism {
  DoctrineMorphism morphism;
  std::function<Arrow(Obj)> j;
};

// Throws NaturalityViolation (for (F, f) and j), LaxInequalityViolation or
// CoherenceViolation.
void validate_oplax(const Comonad& k, const OplaxMorphism& m, const Limits& limits, Report& report);

struct KleisliBundle {
  Comonad comonad;
  std::shared_ptr<const KleisliCategory> category;
  // fibers {alpha in P(KA) | alpha <= P(gamma_A) k_KA (alpha)}
  DoctrineRef doctrine;
  // (F_K, k) with j = u, u_A : A ~> KA the arrow with underlying id_KA
  OplaxMorphism universal;
};

// Builds and validates the squiggly category, P_K and the universal arrow, and
// checks the squiggly presentation against free-coalgebra morphisms.
KleisliBundle build_kleisli_doctrine(const Comonad& k, const Limits& limits, Report& report);

// The arrow A ~> KA whose underlying arrow is id_KA.
Arrow kleisli_unit(const KleisliCategory& ck, Obj a);

// Eilenberg-Moore: coalgebras (A, c) and their morphisms, fibers
// {alpha in P(A) | alpha <= P(c) k_A(alpha)}.
class EMCategory final : public Category {
 public:
  struct Coalgebra {
    Obj carrier;
    Arrow structure;  // A -> KA
  };

  EMCategory(CategoryRef base, Functor k, std::vector<Coalgebra> coalgebras, std::size_t hom_cap);

  std::vector<Obj> objects() const override;
  std::string object_label(Obj a) const override;
  Arrow identity(Obj a) const override;
  Arrow compose(const Arrow& g, const Arrow& f) const override;
  std::optional<std::vector<Arrow>> hom(Obj a, Obj b, std::size_t cap) const override;

  const Coalgebra& coalgebra(Obj a) const { return coalgebras_.at(a); }
  std::size_t size() const { return coalgebras_.size(); }
  Arrow underlying(const Arrow& f) const;
  std::optional<Obj> find(Obj carrier, const Arrow& structure) const;

 private:
  CategoryRef base_;
  Functor k_;
  std::vector<Coalgebra> coalgebras_;
  std::size_t hom_cap_;
};

struct EMBundle {
  std::shared_ptr<const EMCategory> category;
  DoctrineRef doctrine;
};

// Enumerates every coalgebra structure; LazyBaseUnsupported on a lazy base,
// EnumerationBudgetExceeded past limits.em_budget candidates.
EMBundle build_em_doctrine(const Comonad& k, const Limits& limits, Report& report);

// (F', f') with F'(g) = F(g) j_A and f'_A = R(j_A) f_KA restricted to P_K(A).
DoctrineMorphism factorize_oplax_raw(const KleisliBundle& kb, const OplaxMorphism& m);

struct Competitor {
  std::string name;
  DoctrineMorphism morphism;  // a 1-cell P_K -> R
};

enum class UniquenessMode { competitors, exhaustive, budget_exceeded };
std::string_view uniqueness_mode_name(UniquenessMode m);

struct Factorization {
  DoctrineMorphism morphism;
  UniquenessMode mode = UniquenessMode::competitors;
  std::size_t candidates = 0;  // exhaustive mode: 1-cells with the same composite
};

// Factorizes, checks the composite with the universal arrow equals m on the
// nose (CompositeMismatch) and that every competitor with the same composite
// equals the factorization (UniquenessCounterexample). With exhaustive set,
// also searches the 1-cells P_K -> R whose arrow action is forced by
// functoriality (G(g) = F(g) G(u_A)) under limits.search_budget.
Factorization factorize_oplax(const KleisliBundle& kb, const OplaxMorphism& m,
                              const std::vector<Competitor>& competitors, bool exhaustive,
                              const Limits& limits, Report& report);

// First place two 1-cells differ on objects, hom-sets or fiber maps.
std::optional<std::string> morphism_difference(const DoctrineMorphism& a, const DoctrineMorphism& b,
                                               const Limits& limits);

// Families theta_A : FA -> GA (over the source objects) that are natural and
// satisfy f_A(alpha) <= R(theta_A) g_A(alpha). `extra` filters further.
// Sets `exhausted` when limits.search_budget ran out.
using Family = std::vector<Arrow>;
std::vector<Family> enumerate_two_cells(const DoctrineMorphism& m, const DoctrineMorphism& n,
                                        const std::function<bool(const Family&)>& extra, const Limits& limits,
                                        bool* exhausted);

struct TwoCellIsoReport {
  std::size_t composite_cells = 0;      // Cmd* 2-cells between the oplax morphisms
  std::size_t factorized_cells = 0;     // 2-cells between the factorizations
  bool bijection = false;
};

// Both hom-categories enumerated; theta maps to theta' with the same
// components. EnumerationBudgetExceeded when either search runs out.
TwoCellIsoReport two_cell_iso_check(const KleisliBundle& kb, const OplaxMorphism& m, const OplaxMorphism& n,
                                    const Limits& limits, Report& report);

}  // namespace doctrina
