#include <doctest.h>

#include "doctrina/category.hpp"
#include "doctrina/error.hpp"
#include "doctrina/finset.hpp"
#include "support/gen.hpp"

using namespace doctrina;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::UsageError;
}

const Limits kLimits{};

RawCategory terminal_raw() {
  RawCategory r;
  r.objects = {"*"};
  r.terminal = "*";
  r.products = {{"*", "*", "*", "id_*", "id_*"}};
  return r;
}

// t and u are isomorphic terminals; the chosen square of t is u.
RawCategory twin_terminals() {
  RawCategory r;
  r.objects = {"t", "u"};
  r.arrows = {{"i", "t", "u"}, {"j", "u", "t"}};
  r.compose = {{"j", "i", "id_t"}, {"i", "j", "id_u"}};
  r.terminal = "t";
  r.products = {{"t", "t", "u", "j", "j"},
                {"t", "u", "t", "id_t", "i"},
                {"u", "t", "t", "i", "id_t"},
                {"u", "u", "t", "i", "i"}};
  return r;
}

// reader endofunctor X x - on finite sets
Functor reader(const std::shared_ptr<const FinSetCategory>& c, Obj x) {
  return Functor{c, c, [c, x](Obj a) { return c->product(x, a); },
                 [c, x](const Arrow& f) { return cross(*c, c->identity(x), f); }};
}

}  // namespace

TEST_CASE("terminal category") {
  auto c = validate_category_with_products(terminal_raw());
  CHECK(c->object_count() == 1);
  CHECK(c->arrow_count() == 1);
  CHECK(c->has_products());
  CHECK(c->strict_units());
  Report r;
  validate_category(*c, kLimits, r);
  CHECK(r.ok());
}

TEST_CASE("missing composite") {
  RawCategory r;
  r.objects = {"A", "B"};
  r.arrows = {{"f", "A", "B"}, {"g", "B", "A"}};
  CHECK(code_of([&] { validate_category_with_products(r); }) == Errc::CompositionUndefined);
  r.compose = {{"g", "f", "id_A"}};
  CHECK(code_of([&] { validate_category_with_products(r); }) == Errc::CompositionUndefined);
  r.compose.push_back({"f", "g", "id_B"});
  CHECK_NOTHROW(validate_category_with_products(r));
  r.compose.push_back({"f", "f", "id_B"});
  CHECK(code_of([&] { validate_category_with_products(r); }) == Errc::CompositionUndefined);
}

TEST_CASE("associativity and terminal violations") {
  // e idempotent but declared e.e = id: then (e.e).e = e while e.(e.e) = e, fine;
  // break it with a non-associative table on an endo-monoid {id, a, b}
  RawCategory r;
  r.objects = {"A"};
  r.arrows = {{"a", "A", "A"}, {"b", "A", "A"}};
  r.compose = {{"a", "a", "b"}, {"a", "b", "a"}, {"b", "a", "a"}, {"b", "b", "b"}};
  // (a.a).b = b.b = b, a.(a.b) = a.a = b: fine; (a.a).a = b.a = a, a.(a.a) = a.b = a: fine
  CHECK_NOTHROW(validate_category_with_products(r));
  r.compose = {{"a", "a", "a"}, {"a", "b", "b"}, {"b", "a", "a"}, {"b", "b", "a"}};
  // (b.b).a = a.a = a but b.(b.a) = b.a = a; (a.b).b = b.b = a, a.(b.b) = a.a = a;
  // (b.a).b = a.b = b but b.(a.b) = b.b = a
  CHECK(code_of([&] { validate_category_with_products(r); }) == Errc::AssociativityViolation);

  RawCategory two;
  two.objects = {"A", "T"};
  two.arrows = {{"p", "A", "T"}, {"q", "A", "T"}};
  two.terminal = "T";
  CHECK(code_of([&] { validate_category_with_products(two); }) == Errc::TerminalNotUnique);
}

TEST_CASE("product universal property violations") {
  RawCategory r = twin_terminals();
  CHECK_NOTHROW(validate_category_with_products(r));
  r.products.pop_back();
  CHECK(code_of([&] { validate_category_with_products(r); }) == Errc::ProductUMPViolation);
  r = twin_terminals();
  r.products[0] = {"t", "t", "u", "i", "j"};  // i: t -> u is no projection out of u
  CHECK(code_of([&] { validate_category_with_products(r); }) == Errc::ProductUMPViolation);
}

TEST_CASE("semilattice categories") {
  auto one = semilattice_to_category(testgen::build(testgen::chain(1)));
  CHECK(one->object_count() == 1);
  CHECK(one->arrow_count() == 1);

  auto two = semilattice_to_category(testgen::build(testgen::chain(2)));
  CHECK(two->arrow_count() == 3);
  for (Obj a = 0; a < 2; ++a)
    for (Obj b = 0; b < 2; ++b) CHECK(two->product(a, b) == std::min(a, b));
  CHECK(two->terminal() == 1);

  auto three = semilattice_to_category(testgen::build(testgen::chain(3)));
  Report r;
  validate_category(*three, kLimits, r);
  CHECK(r.ok());
  CHECK(r.count(Outcome::skipped) == 0);
  CHECK(three->strict_units());
  CHECK(three->strict_assoc());

  testgen::RawPoset diamond = testgen::boolean_algebra(2);
  auto d = semilattice_to_category(testgen::build(diamond));
  CHECK(d->product(1, 2) == 0);

  CHECK(code_of([] { semilattice_to_category(testgen::build(testgen::antichain(2))); }) == Errc::MeetsRequired);
}

TEST_CASE("property: semilattice categories always validate") {
  testgen::Rng rng(77);
  for (int i = 0; i < 25; ++i) {
    auto raw = testgen::closure_system(rng, 3, 1 + rng.below(4));
    auto c = semilattice_to_category(testgen::build(raw));
    Report r;
    validate_category(*c, kLimits, r);
    CHECK(r.ok());
    CHECK(c->strict_units());
    CHECK(c->strict_assoc());
    for (Obj a : c->objects())
      for (Obj b : c->objects()) {
        auto back = c->compose(assoc_right(*c, a, b, a), assoc_left(*c, a, b, a));
        CHECK(back == c->identity(c->product(a, c->product(b, a))));
      }
  }
}

TEST_CASE("finite sets on probes") {
  auto fs = std::make_shared<const FinSetCategory>(std::vector<Obj>{0, 1, 2, 3});
  Report r;
  validate_category(*fs, kLimits, r);
  CHECK(r.ok());
  CHECK(fs->hom(2, 3, 100)->size() == 9);
  CHECK(fs->hom(0, 3, 100)->size() == 1);
  CHECK(fs->hom(3, 0, 100)->empty());
  CHECK_FALSE(fs->hom(3, 3, 10));
  CHECK(assoc_left(*fs, 2, 3, 2) == fs->identity(12));
  CHECK(fs->pair(fs->bang(3), fs->identity(3)) == fs->identity(3));
  CHECK(fs->find_object("7") == Obj{7});
  CHECK_FALSE(fs->find_object("x"));
}

TEST_CASE("functors") {
  auto c = semilattice_to_category(testgen::build(testgen::chain(3)));
  Report r;
  auto id = validate_functor(identity_functor(c), true, kLimits, r);
  CHECK(id.preserves_products);
  CHECK(id.strict_products);

  // constant at the terminal: always product preserving, strictly iff t x t = t
  auto t = c->terminal();
  auto k = validate_functor(thin_functor(c, c, {t, t, t}), true, kLimits, r);
  CHECK(k.strict_products);

  auto twins = validate_category_with_products(twin_terminals());
  auto konst = Functor{twins, twins, [](Obj) { return Obj{0}; },
                       [twins](const Arrow&) { return twins->identity(0); }};
  auto kt = validate_functor(konst, true, kLimits, r);
  CHECK(kt.preserves_products);
  CHECK_FALSE(kt.strict_products);

  // sends 0 <= 1 to an arrow with the wrong source
  const Arrow loop = *c->find_arrow("c1<=c1");
  auto bad = Functor{c, c, [](Obj a) { return a; }, [loop](const Arrow& f) -> Arrow {
                       if (f.dom == 0 && f.cod == 1) return loop;
                       return f;
                     }};
  CHECK(code_of([&] { validate_functor(bad, false, kLimits, r); }) == Errc::FunctorLawViolation);
  // order-reversing object map has no arrows to land on
  CHECK(code_of([&] { validate_functor(thin_functor(c, c, {2, 1, 0}), false, kLimits, r); }) ==
        Errc::FunctorLawViolation);

  auto fs = std::make_shared<const FinSetCategory>(std::vector<Obj>{0, 1, 2});
  auto K = reader(fs, 2);
  auto kc = validate_functor(K, false, kLimits, r);
  CHECK_FALSE(kc.preserves_products);
  CHECK(code_of([&] { validate_functor(K, true, kLimits, r); }) == Errc::ProductsNotPreserved);
  CHECK(r.ok());
}

TEST_CASE("property: composites of product-preserving functors preserve products") {
  testgen::Rng rng(91);
  for (int i = 0; i < 20; ++i) {
    auto raw = testgen::downset_lattice(rng, 3);
    auto L = testgen::build(raw);
    auto c = semilattice_to_category(L);
    // x |-> (p -> x) preserves meets and top in a Heyting algebra
    auto arrow_map = [&](Elem p) {
      std::vector<Obj> m;
      for (Elem x = 0; x < L->size(); ++x) {
        for (Elem y = 0; y < L->size(); ++y) {
          bool ok = true;
          for (Elem z = 0; z < L->size(); ++z) {
            auto pz = *L->meet(p, z);
            if (L->leq(pz, x) != L->leq(z, y)) ok = false;
          }
          if (ok) m.push_back(static_cast<Obj>(y));
        }
      }
      return m;
    };
    auto F = thin_functor(c, c, arrow_map(rng.below(L->size())));
    auto G = thin_functor(c, c, arrow_map(rng.below(L->size())));
    Report r;
    CHECK(validate_functor(F, true, kLimits, r).preserves_products);
    CHECK(validate_functor(G, true, kLimits, r).preserves_products);
    CHECK(validate_functor(compose(G, F), true, kLimits, r).preserves_products);
    CHECK_FALSE(functor_difference(compose(identity_functor(c), F), F, kLimits));
  }
}

TEST_CASE("natural transformations on the reader endofunctor") {
  auto fs = std::make_shared<const FinSetCategory>(std::vector<Obj>{0, 1, 2});
  const Obj X = 2;
  auto K = reader(fs, X);
  auto KK = compose(K, K);
  Report r;

  NatTransf eps{K, identity_functor(fs), [fs, X](Obj a) { return fs->pr2(X, a); }};
  CHECK_NOTHROW(validate_nat_transf(eps, kLimits, r));

  // Delta_X x id, written right-nested as <pr1, id>
  NatTransf gamma{K, KK, [fs, X](Obj a) {
                    return fs->pair(fs->pr1(X, a), fs->identity(fs->product(X, a)));
                  }};
  CHECK_NOTHROW(validate_nat_transf(gamma, kLimits, r));

  // flips the A-coordinate only when A has two points
  NatTransf flip{K, K, [fs, X](Obj a) {
                   if (a != 2) return fs->identity(fs->product(X, a));
                   return fs->pair(fs->pr1(X, a), fs->compose(FinSetCategory::function(2, 2, {1, 0}), fs->pr2(X, a)));
                 }};
  CHECK(code_of([&] { validate_nat_transf(flip, kLimits, r); }) == Errc::NaturalitySquareViolation);
  CHECK(r.ok());
}
