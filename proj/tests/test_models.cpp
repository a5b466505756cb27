#include <doctest.h>

#include <bit>

#include "doctrina/error.hpp"
#include "doctrina/fixtures.hpp"
#include "doctrina/models.hpp"
#include "doctrina/propositional.hpp"
#include "doctrina/structure.hpp"
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

// Truth-table oracle: evaluate a formula tree built from the generator below.
struct Formula {
  std::string text;
  std::vector<bool> values;  // one per assignment
};

Formula random_formula(testgen::Rng& rng, const std::vector<std::string>& atoms, int depth) {
  const unsigned rows = 1u << atoms.size();
  if (depth == 0 || rng.coin(30)) {
    const auto pick = rng.below(atoms.size() + 2);
    Formula f;
    if (pick == atoms.size()) {
      f.text = "T";
      f.values.assign(rows, true);
    } else if (pick == atoms.size() + 1) {
      f.text = "F";
      f.values.assign(rows, false);
    } else {
      f.text = atoms[pick];
      for (unsigned i = 0; i < rows; ++i) f.values.push_back((i >> pick) & 1);
    }
    return f;
  }
  const auto op = rng.below(5);
  if (op == 0) {
    auto a = random_formula(rng, atoms, depth - 1);
    Formula f{"~(" + a.text + ")", {}};
    for (bool v : a.values) f.values.push_back(!v);
    return f;
  }
  auto a = random_formula(rng, atoms, depth - 1);
  auto b = random_formula(rng, atoms, depth - 1);
  static const char* ops[] = {"", "&", "|", "->", "<->"};
  Formula f{"(" + a.text + ") " + ops[op] + " (" + b.text + ")", {}};
  for (unsigned i = 0; i < rows; ++i) {
    const bool x = a.values[i], y = b.values[i];
    f.values.push_back(op == 1 ? x && y : op == 2 ? x || y : op == 3 ? !x || y : x == y);
  }
  return f;
}

Elem mask_of(const std::vector<bool>& v) {
  Elem m = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i]) m |= Elem{1} << i;
  return m;
}

}  // namespace

TEST_CASE("powerset: P({0,1}) is the 4-element Boolean algebra") {
  auto P = powerset_doctrine({0, 1, 2});
  CHECK(P->fiber(2)->size() == 4);
  StructureContext ctx(*P, kLimits);
  CHECK(detect_structure(ctx, Kind::boolean).outcome == Outcome::pass);
  // the diagonal is the fibered equality on 2
  const auto eq = fibered_equality(ctx, 2);
  REQUIRE(eq.delta.has_value());
  CHECK(*eq.delta == 0b1001);
}

TEST_CASE("truth tables agree with a direct evaluation") {
  testgen::Rng rng(kSeed);
  const std::vector<std::string> atoms{"p", "q", "r"};
  for (int trial = 0; trial < 300; ++trial) {
    const auto f = random_formula(rng, atoms, 4);
    CAPTURE(f.text);
    CHECK(truth_table(f.text, atoms) == mask_of(f.values));
  }
  CHECK(truth_table("p -> q -> r", atoms) == truth_table("p -> (q -> r)", atoms));
  CHECK(truth_table("~p | q & r", atoms) == truth_table("(~p) | (q & r)", atoms));
}

TEST_CASE("formula errors") {
  const std::vector<std::string> atoms{"p"};
  CHECK(code_of([&] { truth_table("p &", atoms); }) == Errc::SyntaxError);
  CHECK(code_of([&] { truth_table("(p", atoms); }) == Errc::SyntaxError);
  CHECK(code_of([&] { truth_table("p q", atoms); }) == Errc::SyntaxError);
  CHECK(code_of([&] { truth_table("s", atoms); }) == Errc::UnresolvedReference);
  try {
    truth_table("p & )", atoms);
  } catch (const Error& e) {
    CHECK(e.witness().rfind("column 5", 0) == 0);
  }
}

TEST_CASE("Lindenbaum-Tarski: sizes from the theory's models") {
  CHECK(propositional_lt({}, {}).doctrine->fiber(0)->size() == 2);
  CHECK(propositional_lt({"p"}, {}).doctrine->fiber(0)->size() == 4);
  CHECK(propositional_lt({"p"}, {"p"}).doctrine->fiber(0)->size() == 2);
  CHECK(propositional_lt({"p", "q"}, {"p | q"}).doctrine->fiber(0)->size() == 8);
  CHECK(code_of([] { propositional_lt({"a", "b", "c", "d", "e"}, {}); }) == Errc::AtomCapExceeded);
  CHECK(code_of([] { propositional_lt({"a", "a"}, {}); }) == Errc::DuplicateName);
  // a raised cap admits five atoms; two models leave four classes
  CHECK(propositional_lt({"a", "b", "c", "d", "e"}, {"a & b & c & d"}, 5).doctrine->fiber(0)->size() == 4);
}

TEST_CASE("Lindenbaum-Tarski: order is entailment modulo the theory") {
  testgen::Rng rng(kSeed + 1);
  const std::vector<std::string> atoms{"p", "q", "r"};
  for (int trial = 0; trial < 40; ++trial) {
    const auto ax = random_formula(rng, atoms, 2);
    const auto lt = propositional_lt(atoms, {ax.text});
    const auto fib = lt.doctrine->fiber(0);
    for (int k = 0; k < 10; ++k) {
      const auto a = random_formula(rng, atoms, 3);
      const auto b = random_formula(rng, atoms, 3);
      INFO(ax.text, " | ", a.text, " | ", b.text);
      // T |= a -> b by truth tables
      bool entails = true;
      for (std::size_t i = 0; i < ax.values.size(); ++i)
        if (ax.values[i] && a.values[i] && !b.values[i]) entails = false;
      CHECK(fib->leq(lt.class_of(a.text), lt.class_of(b.text)) == entails);
    }
    Report r;
    validate_doctrine(*lt.doctrine, kLimits, r);
    CHECK(detect_structure(*lt.doctrine, Kind::boolean, kLimits).outcome == Outcome::pass);
  }
}

TEST_CASE("adding an axiom to LT_T is LT_(T + phi)") {
  const std::vector<std::string> atoms{"p", "q"};
  Report r;
  auto same = lt_add_axiom_iso(atoms, {}, "T", kLimits, r);
  CHECK(same.extension_size == 16);
  auto p = lt_add_axiom_iso(atoms, {}, "p", kLimits, r);
  CHECK(p.extension_size == p.direct_size);
  auto bot = lt_add_axiom_iso(atoms, {}, "F", kLimits, r);
  CHECK(bot.extension_size == 1);
  CHECK(bot.direct_size == 1);
  testgen::Rng rng(kSeed + 2);
  const std::vector<std::string> three{"p", "q", "r"};
  for (int trial = 0; trial < 20; ++trial) {
    const auto ax = random_formula(rng, three, 2);
    const auto phi = random_formula(rng, three, 2);
    INFO(ax.text, " | ", phi.text);
    const auto iso = lt_add_axiom_iso(three, {ax.text}, phi.text, kLimits, r);
    const auto both = std::popcount(mask_of(ax.values) & mask_of(phi.values));
    CHECK(iso.direct_size == (std::size_t{1} << both));
  }
  CHECK(r.ok());
}

TEST_CASE("random semilattice doctrines: deterministic and primary") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto a = random_semilattice_doctrine(seed);
    const auto b = random_semilattice_doctrine(seed);
    REQUIRE(a.base->objects() == b.base->objects());
    for (Obj o : a.base->objects()) CHECK(a.doctrine->fiber(o)->elements() == b.doctrine->fiber(o)->elements());
    Report r;
    validate_doctrine(*a.doctrine, kLimits, r);
    CHECK(detect_structure(*a.doctrine, Kind::primary, kLimits).outcome == Outcome::pass);
  }
  const auto one = random_semilattice_doctrine(0, RandomBounds{1, 1, false});
  CHECK(one.base->objects().size() == 1);
}

TEST_CASE("powerset fixtures") {
  Report r = powerset_examples();
  CHECK(r.ok());
  // law checks on the lazy Kleisli base stop at the budgets; the fixture's own checks may not
  for (const auto& c : r.checks())
    if (c.name.find("extension: ") == std::string::npos) CHECK_MESSAGE(c.outcome == Outcome::pass, c.name);
}

TEST_CASE("LT, distributive-law and round-trip fixtures") {
  Report r;
  lt_axiom_fixture(kLimits, r);
  distributive_law_fixture(kLimits, r);
  kleisli_roundtrip_fixture(7, kLimits, r);
  CHECK(r.ok());
}
