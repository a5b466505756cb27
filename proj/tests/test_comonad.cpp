#include <doctest.h>

#include <algorithm>

#include "doctrina/comonad.hpp"
#include "doctrina/error.hpp"
#include "doctrina/finset.hpp"
#include "doctrina/models.hpp"
#include "doctrina/reader.hpp"
#include "support/gen.hpp"

using namespace doctrina;

namespace {

const Limits kLimits{};
constexpr std::uint64_t kSeed = 20240611;

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::UsageError;
}

std::string fact(const Report& r, const std::string& key) {
  for (const auto& [k, v] : r.facts())
    if (k == key) return v;
  return {};
}

std::vector<Elem> sorted(const Poset& p) {
  auto v = p.elements();
  std::sort(v.begin(), v.end());
  return v;
}

// some object of the base, chosen by pick
Obj some_object(const Category& c, std::uint64_t pick) {
  const auto objs = c.objects();
  return objs[pick % objs.size()];
}

}  // namespace

TEST_CASE("identity comonad: Kleisli category is the base") {
  auto rd = random_semilattice_doctrine(kSeed);
  Report r;
  const Comonad k = identity_comonad(rd.doctrine);
  validate_comonad(k, kLimits, r);
  CHECK(fact(r, "comonad.gamma_equality") == "true");
  CHECK(fact(r, "comonad.epsilon_equality") == "true");

  const auto kb = build_kleisli_doctrine(k, kLimits, r);
  const Category& C = *rd.base;
  for (Obj a : C.objects()) {
    CHECK(sorted(*kb.doctrine->fiber(a)) == sorted(*rd.doctrine->fiber(a)));
    for (Obj b : C.objects()) CHECK(kb.category->hom(a, b, 64)->size() == C.hom(a, b, 64)->size());
  }
  CHECK(r.ok());
}

TEST_CASE("reader comonad on powersets validates") {
  auto P = powerset_doctrine({0, 1, 2});
  Report r;
  validate_comonad(build_reader_comonad(P, 2, std::nullopt, kLimits), kLimits, r);
  CHECK(r.ok());
  CHECK(fact(r, "comonad.epsilon_equality") == "true");

  Report r2;
  validate_comonad(build_reader_comonad(P, 2, Elem{0b01}, kLimits), kLimits, r2);
  CHECK(r2.ok());
  CHECK(fact(r2, "comonad.gamma_equality") == "true");
  // phi /\ alpha sits strictly below alpha
  CHECK(fact(r2, "comonad.epsilon_equality") == "false");
}

TEST_CASE("reader comonad: a wrong comultiplication is caught") {
  auto P = powerset_doctrine({0, 1, 2});
  Comonad k = build_reader_comonad(P, 2, std::nullopt, kLimits);
  const auto C = P->base();
  const Arrow flip = FinSetCategory::function(2, 2, {1, 0});
  k.gamma.component = [C, flip](Obj a) {
    const Obj xa = C->product(2, a);
    return C->pair(C->compose(flip, C->pr1(2, a)), C->identity(xa));
  };
  Report r;
  CHECK(code_of([&] { validate_comonad(k, kLimits, r); }) == Errc::ComonadLawViolation);
}

TEST_CASE("reader comonad: k above the counit breaks the 2-arrow inequality") {
  auto P = powerset_doctrine({0, 1, 2});
  Comonad k = build_reader_comonad(P, 2, std::nullopt, kLimits);
  k.k = [P](Obj a) {
    const auto f = P->fiber(P->base()->product(2, a));
    return MonotoneMap(P->fiber(a), f, [t = *f->top()](Elem) { return t; });
  };
  Report r;
  CHECK(code_of([&] { validate_comonad(k, kLimits, r); }) == Errc::TwoArrowInequalityViolation);
}

TEST_CASE("Eilenberg-Moore: reader coalgebras are <a, id> and free ones match the Kleisli fibers") {
  testgen::Rng rng(kSeed);
  for (int trial = 0; trial < 12; ++trial) {
    CAPTURE(trial);
    auto rd = random_semilattice_doctrine(rng.next());
    const Category& C = *rd.base;
    const Obj x = some_object(C, rng.next());
    const Comonad k = build_reader_comonad(rd.doctrine, x, std::nullopt, kLimits);
    Report r;
    validate_comonad(k, kLimits, r);
    const auto em = build_em_doctrine(k, kLimits, r);
    const auto kb = build_kleisli_doctrine(k, kLimits, r);
    REQUIRE(r.ok());

    // in a thin base a coalgebra structure A -> X x A exists iff A <= X
    std::size_t below = 0;
    for (Obj a : C.objects()) below += C.hom(a, x, 2)->empty() ? 0 : 1;
    CHECK(em.category->size() == below);
    CHECK(fact(r, "em.coalgebras") == std::to_string(below));

    for (Obj a : C.objects()) {
      const auto free = em.category->find(k.functor(a), k.gamma(a));
      REQUIRE(free.has_value());
      CHECK(sorted(*em.doctrine->fiber(*free)) == sorted(*kb.doctrine->fiber(a)));
    }
  }
}

TEST_CASE("Eilenberg-Moore needs a finite base") {
  auto P = powerset_doctrine({0, 1, 2});
  Report r;
  CHECK(code_of([&] { build_em_doctrine(build_reader_comonad(P, 2, std::nullopt, kLimits), kLimits, r); }) ==
        Errc::LazyBaseUnsupported);
}

TEST_CASE("universal arrow factors through itself as the identity") {
  testgen::Rng rng(kSeed + 1);
  for (int trial = 0; trial < 8; ++trial) {
    CAPTURE(trial);
    auto rd = random_semilattice_doctrine(rng.next());
    const Obj x = some_object(*rd.base, rng.next());
    const Comonad k = build_reader_comonad(rd.doctrine, x, std::nullopt, kLimits);
    Report r;
    const auto kb = build_kleisli_doctrine(k, kLimits, r);
    const auto f = factorize_oplax(kb, kb.universal, {}, true, kLimits, r);
    CHECK(!morphism_difference(f.morphism, identity_morphism(kb.doctrine), kLimits));
    CHECK(f.mode == UniquenessMode::exhaustive);
    CHECK(fact(r, "factorize.candidates") == "1");
    CHECK(r.ok());
  }
}

TEST_CASE("a competitor equal to the factorization is accepted") {
  auto rd = random_semilattice_doctrine(kSeed + 7);
  const Obj x = some_object(*rd.base, 3);
  const Comonad k = build_reader_comonad(rd.doctrine, x, std::nullopt, kLimits);
  Report r;
  const auto kb = build_kleisli_doctrine(k, kLimits, r);
  Report r2;
  CHECK_NOTHROW(factorize_oplax(kb, kb.universal, {{"identity", identity_morphism(kb.doctrine)}}, false, kLimits, r2));
  CHECK(r2.ok());
}

TEST_CASE("2-cells between oplax morphisms and between their factorizations correspond") {
  testgen::Rng rng(kSeed + 2);
  for (int trial = 0; trial < 8; ++trial) {
    CAPTURE(trial);
    auto rd = random_semilattice_doctrine(rng.next(), RandomBounds{3, 3, false});
    const Obj x = some_object(*rd.base, rng.next());
    const Comonad k = build_reader_comonad(rd.doctrine, x, std::nullopt, kLimits);
    Report r;
    const auto kb = build_kleisli_doctrine(k, kLimits, r);
    const auto iso = two_cell_iso_check(kb, kb.universal, kb.universal, kLimits, r);
    CHECK(iso.bijection);
    CHECK(iso.composite_cells == iso.factorized_cells);
    CHECK(iso.composite_cells >= 1);
  }
}
