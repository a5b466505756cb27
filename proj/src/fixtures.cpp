#include "doctrina/fixtures.hpp"

#include <bit>
#include <cstdint>

#include "doctrina/error.hpp"
#include "doctrina/finset.hpp"
#include "doctrina/models.hpp"
#include "doctrina/propositional.hpp"
#include "doctrina/reader.hpp"

namespace doctrina {

namespace {

const std::vector<Obj> kProbes{0, 1, 2, 3};

void require(bool ok, const std::string& what) {
  if (!ok) fail(Errc::FixtureMismatch, what);
}

std::string set_label(Obj n) { return std::to_string(n) + "-element set"; }

// X x S inside X x A, row-major
Elem times(Obj x, Obj a, Elem s) {
  Elem out = 0;
  for (Obj i = 0; i < x; ++i)
    for (Obj j = 0; j < a; ++j)
      if ((s >> j) & 1) out |= Elem{1} << (i * a + j);
  return out;
}

Elem full(Obj n) { return n >= 64 ? ~Elem{0} : (Elem{1} << n) - 1; }

}  // namespace

void powerset_collapse_fixture(const Limits& limits, Report& report) {
  const auto P = powerset_doctrine(kProbes, limits);
  Report sub;
  const auto empty = add_constant(P, 0, limits, sub);
  // the axiom {} of 1
  const auto absurd = add_axiom(P, Elem{0}, limits, sub);
  report.merge(sub, "collapse: ");
  for (Obj a : kProbes) {
    require(empty.doctrine()->fiber(a)->size() == 1, "P_0 over a " + set_label(a) + " is not a point");
    require(absurd.doctrine()->fiber(a)->size() == 1, "P_({} of 1) over a " + set_label(a) + " is not a point");
  }
  report.pass("collapse: every fiber of P_0 is a point");
  report.pass("collapse: every fiber of P with the axiom {} of 1 is a point");
}

void powerset_xy_fixture(const Limits& limits, Report& report) {
  const auto P = powerset_doctrine(kProbes, limits);
  const Obj X = 2;
  const Elem Y = 0b01;  // {0} as a subset of X
  Report sub;

  const auto px = add_constant(P, X, limits, sub);
  for (Obj a : kProbes) {
    const auto fib = px.doctrine()->fiber(a);
    require(fib->size() == (std::size_t{1} << (X * a)), "P_X over a " + set_label(a) + " is not P(X x A)");
    const auto f = px.morphism()(a);
    for (Elem s = 0; s <= full(a); ++s)
      require(f(s) == times(X, a, s), "f(S) != X x S over a " + set_label(a));
  }
  report.pass("X-Y: P_X(A) = P(X x A) and f(S) = X x S");

  const auto pxy = extend(P, X, Y, limits, sub);
  const auto& ck = *pxy.bundle.category;
  for (Obj a : kProbes) {
    // Y x A sits in X x A as the first row
    const Elem ya = times(1, a, full(a));
    const auto fib = pxy.doctrine()->fiber(a);
    require(fib->size() == (std::size_t{1} << a), "P_(X,Y) over a " + set_label(a) + " has the wrong size");
    for (Elem s : fib->elements()) require((s & ~ya) == 0, "an element of P_(X,Y) leaves Y x A");
    const auto f = pxy.morphism()(a);
    for (Elem s = 0; s <= full(a); ++s) require(f(s) == (s & ya), "f(S) != Y x S over a " + set_label(a));
  }
  report.pass("X-Y: P_(X,Y)(A) = P(Y x A) and f(S) = Y x S");

  std::size_t arrows = 0;
  bool capped = false;
  for (Obj a : kProbes)
    for (Obj b : kProbes) {
      const auto h = ck.hom(a, b, limits.hom_cap);
      if (!h) {
        capped = true;
        continue;
      }
      const auto target = pxy.doctrine()->fiber(b);
      for (const Arrow& g : *h) {
        ++arrows;
        const auto re = pxy.doctrine()->reindex(g);
        const auto& table = g.rep;  // X x A -> B
        for (Elem s : target->elements()) {
          Elem want = 0;
          for (Obj x = 0; x < X; ++x)
            for (Obj i = 0; i < a; ++i)
              if ((s >> (x * b + table[x * a + i])) & 1) want |= Elem{1} << (x * a + i);
          require(re(s) == want, "reindexing along " + ck.arrow_label(g) + " differs at " + target->label(s));
        }
      }
    }
  if (capped)
    report.skip("X-Y: reindexing is {(x, a) | (x, f(x, a)) in S}", "some hom-sets exceed the hom cap");
  else
    report.pass("X-Y: reindexing is {(x, a) | (x, f(x, a)) in S}", std::to_string(arrows) + " arrows");

  // P -> P_Y with the constant Y -> X
  const auto py = add_constant(P, 1, limits, sub);
  const Arrow incl = FinSetCategory::function(1, X, {0});
  const Model model{py.morphism(), py.bundle.category->lift(1, incl)};
  const auto fac = factorize_model(pxy, model, {}, false, limits, sub);
  for (Obj a : kProbes) {
    const auto src = pxy.doctrine()->fiber(a);
    const auto dst = py.doctrine()->fiber(a);
    require(fac.morphism.functor(a) == a, "G' moves objects");
    require(src->size() == dst->size(), "P_(X,Y) and P_Y differ in size over a " + set_label(a));
    const auto g = fac.morphism(a);
    for (Elem s : src->elements())
      for (Elem t : src->elements())
        require(src->leq(s, t) == dst->leq(g(s), g(t)), "g' is not an order embedding over a " + set_label(a));
  }
  report.merge(sub, "X-Y: ");
  report.pass("X-Y: P -> P_Y factors through P_(X,Y) by an isomorphism");
}

Report powerset_examples(const Limits& limits) {
  Report r("powerset examples");
  powerset_collapse_fixture(limits, r);
  powerset_xy_fixture(limits, r);
  return r;
}

void lt_axiom_fixture(const Limits& limits, Report& report) {
  const std::vector<std::string> atoms{"p", "q"};
  for (const char* phi : {"T", "p", "F"}) {
    Report sub;
    const auto iso = lt_add_axiom_iso(atoms, {}, phi, limits, sub);
    // count classes directly: subsets of the assignments satisfying phi
    const Elem sat = truth_table(phi, atoms);
    const std::size_t want = std::size_t{1} << std::popcount(sat);
    require(iso.extension_size == want && iso.direct_size == want,
            std::string("class count for phi = ") + phi + " is not 2^|models|");
    report.merge(sub, std::string("lt-axiom ") + phi + ": ");
  }
}

void distributive_law_fixture(const Limits& limits, Report& report) {
  const auto P = powerset_doctrine(kProbes, limits);
  Report sub;
  // X = {0, 1} with {0}, Y = {0, 1} with {1}
  distributive_law_check(P, 2, Elem{0b01}, 2, Elem{0b10}, limits, sub);
  report.merge(sub, "X, Y = 2: ");
  Report sub2;
  distributive_law_check(P, 2, Elem{0b01}, 1, Elem{0b1}, limits, sub2);
  report.merge(sub2, "Y = t: ");
}

void kleisli_roundtrip_fixture(std::uint64_t seed, const Limits& limits, Report& report) {
  const auto rd = random_semilattice_doctrine(seed, RandomBounds{3, 3, false});
  const auto objs = rd.base->objects();
  const Obj x = objs[seed % objs.size()];
  Report sub;
  const Comonad k = build_reader_comonad(rd.doctrine, x, std::nullopt, limits);
  validate_comonad(k, limits, sub);
  const auto kb = build_kleisli_doctrine(k, limits, sub);
  const auto f = factorize_oplax(kb, kb.universal, {}, true, limits, sub);
  if (auto d = morphism_difference(f.morphism, identity_morphism(kb.doctrine), limits))
    fail(Errc::FixtureMismatch, "the universal arrow does not factor as the identity: " + *d);
  const auto iso = two_cell_iso_check(kb, kb.universal, kb.universal, limits, sub);
  require(iso.bijection, "2-cells do not correspond");
  report.merge(sub, "roundtrip: ");
  report.pass("roundtrip: universal arrow factors as the identity");
  report.fact("roundtrip.seed", std::to_string(seed));
}

}  // namespace doctrina
