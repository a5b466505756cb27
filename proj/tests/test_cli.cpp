#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "doctrina/cli.hpp"
#include "doctrina/error.hpp"
#include "support/gen.hpp"

using namespace doctrina;

namespace {

const Limits kLimits{};
const std::string kSpecs = DOCTRINA_SPECS;

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::UsageError;
}

std::string witness_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.witness();
  }
  return {};
}

// spec text written to a scratch file for run_command
std::string scratch(const std::string& name, const std::string& text) {
  const auto dir = std::filesystem::temp_directory_path() / "doctrina_test_cli";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << text;
  return path.string();
}

bool has_check(const Report& r, const std::string& name, Outcome o) {
  for (const auto& c : r.checks())
    if (c.name == name && c.outcome == o) return true;
  return false;
}

const char* kM3 = R"(# one object, fiber M3: not distributive
poset m3 {
  elements = 0, a, b, c, 1
  covers = 0 < a, 0 < b, 0 < c, a < 1, b < 1, c < 1
}
poset pt {
  elements = t
}
category One {
  semilattice = pt
}
doctrine M {
  base = One
  fiber t = m3
}
)";

// random names, some needing quotes
std::string random_name(testgen::Rng& rng) {
  static const std::vector<std::string> parts{"a", "b", "x1", "lo<=hi", "{0,1}", "p & q", "id", "\"q\"", "-", "->", "t.s"};
  std::string s = parts[rng.below(parts.size())];
  if (rng.coin(50)) s += "_" + std::to_string(rng.below(100));
  return s;
}

SpecDocument random_document(testgen::Rng& rng) {
  SpecDocument d;
  const auto blocks = rng.below(5);
  for (std::size_t i = 0; i < blocks; ++i) {
    SpecBlock b;
    b.name = "B" + std::to_string(i) + random_name(rng);
    auto names = [&](std::size_t n) {
      std::vector<std::string> v;
      for (std::size_t j = 0; j < n; ++j) v.push_back(random_name(rng));
      return v;
    };
    switch (rng.below(3)) {
      case 0: {
        // poset: distinct elements, covers among them
        b.kind = "poset";
        std::vector<std::string> els;
        for (std::size_t j = 0, n = rng.below(4); j < n; ++j) els.push_back("e" + std::to_string(j) + random_name(rng));
        b.entries.push_back({"elements", {}, els, 0});
        if (els.size() > 1) b.entries.push_back({"covers", {}, {els[0], els[1]}, 0});
        break;
      }
      case 1:
        b.kind = "category";
        b.entries.push_back({"objects", {}, names(rng.below(3) + 1), 0});
        b.entries.push_back({"arrow", {random_name(rng)}, names(2), 0});
        b.entries.push_back({"compose", names(2), names(1), 0});
        b.entries.push_back({"product", names(2), names(3), 0});
        break;
      default:
        b.kind = "builtin";
        b.builtin = rng.coin(50) ? "powerset" : "lt";
        if (b.builtin == "powerset") {
          b.entries.push_back({"probes", {}, {"0", std::to_string(rng.below(4))}, 0});
        } else {
          b.entries.push_back({"atoms", {}, names(rng.below(3)), 0});
          b.entries.push_back({"axioms", {}, names(rng.below(2)), 0});
        }
    }
    d.blocks.push_back(std::move(b));
  }
  return d;
}

}  // namespace

TEST_CASE("empty document") {
  CHECK(parse_spec("").blocks.empty());
  CHECK(parse_spec("# nothing here\n\n   \n").blocks.empty());
  CHECK(print_spec(SpecDocument{}).empty());
}

TEST_CASE("shipped powerset spec: the lazy powerset doctrine on four probes") {
  const auto doc = parse_spec_file(kSpecs + "/powerset.spec");
  REQUIRE(doc.blocks.size() == 1);
  CHECK(doc.blocks[0].builtin == "powerset");
  CHECK(parse_spec(print_spec(doc)) == doc);
  Report r;
  const auto env = build_spec(doc, kLimits, r);
  const auto& P = env.doctrines.at("P");
  CHECK(P->base()->lazy());
  CHECK(P->base()->objects() == std::vector<Obj>{0, 1, 2, 3});
  CHECK(P->fiber(3)->size() == 8);
}

TEST_CASE("syntax errors carry line and column") {
  CHECK(witness_of([] { parse_spec("poset p {\n  elements = a b\n}\n"); }).rfind("line 2, column 16", 0) == 0);
  CHECK(witness_of([] { parse_spec("poset p {\n  elements = a\n  colour = red\n}\n"); })
            .rfind("line 3, column 3: unknown key 'colour'", 0) == 0);
  CHECK(code_of([] { parse_spec("poset p {\n  elements = a\n"); }) == Errc::SyntaxError);
  CHECK(code_of([] { parse_spec("lattice p {\n}\n"); }) == Errc::SyntaxError);
  CHECK(code_of([] { parse_spec("poset p {\n  elements = \"a\n}\n"); }) == Errc::SyntaxError);
  CHECK(code_of([] { parse_spec("poset p {\n}\n"); }) == Errc::SyntaxError);
  CHECK(code_of([] { parse_spec("builtin P powerset probes=[0, 1] size=3\n"); }) == Errc::SyntaxError);
  CHECK(code_of([] { parse_spec("builtin P sets probes=[0]\n"); }) == Errc::SyntaxError);
  CHECK(code_of([] { parse_spec("category C {\n  arrow f : a b\n}\n"); }) == Errc::SyntaxError);
}

TEST_CASE("duplicate names and unresolved references") {
  CHECK(code_of([] { parse_spec("poset p {\n  elements = a, b, a\n}\n"); }) == Errc::DuplicateName);
  CHECK(code_of([] { parse_spec("poset p {\n  elements = a\n}\nposet p {\n  elements = b\n}\n"); }) ==
        Errc::DuplicateName);
  CHECK(code_of([] { parse_spec("builtin P powerset probes=[0] probes=[1]\n"); }) == Errc::DuplicateName);
  CHECK(code_of([] { parse_spec("poset p {\n  elements = a\n  covers = a < z\n}\n"); }) == Errc::UnresolvedReference);
  // references go to earlier blocks of the right kind
  CHECK(code_of([] { parse_spec("category C {\n  semilattice = p\n}\n"); }) == Errc::UnresolvedReference);
  CHECK(code_of([] {
          parse_spec("poset p {\n  elements = a\n}\ndoctrine D {\n  base = p\n}\n");
        }) == Errc::UnresolvedReference);
  CHECK(witness_of([] { parse_spec("builtin P powerset probes=[1]\nmorphism m {\n  identity = Q\n}\n"); })
            .rfind("line 3", 0) == 0);
  // semantic references surface when the block is built
  Report r;
  const auto doc = parse_spec(std::string(kM3) + "doctrine N {\n  base = One\n  fiber s = m3\n}\n");
  CHECK(code_of([&] { build_spec(doc, kLimits, r); }) == Errc::UnresolvedReference);
}

TEST_CASE("print then parse is the identity on documents") {
  testgen::Rng rng(515);
  for (int trial = 0; trial < 300; ++trial) {
    const auto d = random_document(rng);
    const auto text = print_spec(d);
    INFO(text);
    const auto back = parse_spec(text);
    CHECK(back == d);
    CHECK(print_spec(back) == text);
  }
  for (const char* f : {"/powerset.spec", "/chain.spec"}) {
    const auto d = parse_spec_file(kSpecs + f);
    CHECK(parse_spec(print_spec(d)) == d);
  }
}

TEST_CASE("chain spec builds every block") {
  Report r;
  const auto env = build_spec(parse_spec_file(kSpecs + "/chain.spec"), kLimits, r);
  CHECK(r.ok());
  CHECK(env.posets.size() == 2);
  CHECK(env.categories.at("C")->object_count() == 2);
  CHECK(env.doctrines.size() == 2);
  CHECK(env.morphisms.count("G") == 1);
  CHECK(env.comonads.count("R") == 1);
}

TEST_CASE("a comonad given by its tables") {
  // the identity comonad written out
  const std::string text = std::string(kM3) + R"(
comonad I {
  doctrine = M
  functor t = t
  k t = 0, a, b, c, 1
  gamma t = "t<=t"
  epsilon t = "t<=t"
}
)";
  Report r;
  const auto env = build_spec(parse_spec(text), kLimits, r);
  CHECK(r.ok());
  CHECK(env.comonads.count("I") == 1);
  // k not a 2-arrow: epsilon would need k(x) <= x
  std::string bad = text;
  bad.replace(bad.find("k t = 0, a, b, c, 1"), 19, "k t = 0, 1, b, c, 1");
  Report r2;
  CHECK(code_of([&] { build_spec(parse_spec(bad), kLimits, r2); }) == Errc::TwoArrowInequalityViolation);
}

TEST_CASE("demos exit 0; kleisli-roundtrip needs a seed") {
  for (const char* name : {"powerset-collapse", "lt-axiom"}) {
    const auto res = run_command({"demo", name});
    INFO(res.output);
    CHECK(res.status == 0);
    CHECK(res.output.find("exit=0\n```") != std::string::npos);
  }
  CHECK(run_command({"demo", "kleisli-roundtrip"}).status == 2);
  CHECK(run_command({"demo", "lt-axiom", "--seed", "3"}).status == 2);
  const auto a = run_command({"demo", "kleisli-roundtrip", "--seed", "11"});
  const auto b = run_command({"demo", "kleisli-roundtrip", "--seed", "11"});
  CHECK(a.status == 0);
  CHECK(a.output == b.output);
  CHECK(run_command({"demo", "nonsense"}).status == 2);
  CHECK(run_command({}).status == 2);
}

TEST_CASE("extend without an axiom: add-constant path") {
  const auto spec = kSpecs + "/chain.spec";
  const auto res = run_command({"extend", spec, "--doctrine", "B", "--object", "lo"});
  INFO(res.output);
  CHECK(res.status == 0);
  CHECK(has_check(res.report, "primary not required", Outcome::pass));
  // the emitted blocks parse, validate and carry the same fibers
  const auto pos = res.output.find("extension:\n");
  REQUIRE(pos != std::string::npos);
  const auto end = res.output.find("\n\n", res.output.find("doctrine B_lo_doctrine", pos));
  const auto doc = parse_spec(res.output.substr(pos + 11, end - pos - 10));
  Report r;
  const auto env = build_spec(doc, kLimits, r);
  CHECK(r.ok());
  const auto& E = env.doctrines.at("B_lo_doctrine");
  CHECK(E->fiber(*E->base()->find_object("lo"))->size() == 2);
  // reports are byte-stable
  CHECK(run_command({"extend", spec, "--doctrine", "B", "--object", "lo"}).output == res.output);
}

TEST_CASE("extension spec over the one-object M3 doctrine") {
  Report r;
  const auto env = build_spec(parse_spec(kM3), kLimits, r);
  const auto M = env.doctrines.at("M");
  Report er;
  const auto e = extend(M, 0, resolve_element(env, "M", 0, "a"), kLimits, er);
  std::string why;
  const auto doc = extension_spec(e, "Ma", kLimits, why);
  REQUIRE(doc.has_value());
  Report vr;
  const auto back = build_spec(parse_spec(print_spec(*doc)), kLimits, vr);
  CHECK(vr.ok());
  // the downset below a: 0 < a
  CHECK(back.posets.at("Ma@t")->size() == 2);
  // a lazy base emits nothing
  const auto P = build_spec(parse_spec_file(kSpecs + "/powerset.spec"), kLimits, r).doctrines.at("P");
  const auto pe = add_constant(P, 1, kLimits, er);
  CHECK_FALSE(extension_spec(pe, "P1", kLimits, why).has_value());
  CHECK(why.find("lazy") != std::string::npos);
}

TEST_CASE("factorize: a constant violating the axiom exits nonzero") {
  const auto spec = kSpecs + "/chain.spec";
  const auto ok =
      run_command({"factorize", spec, "--model", "G", "--object", "lo", "--axiom", "T", "--constant", "1->1[0]"});
  INFO(ok.output);
  CHECK(ok.status == 0);
  CHECK(ok.output.find("fact.factor.constant=1->1[0]") != std::string::npos);
  const auto bad =
      run_command({"factorize", spec, "--model", "G", "--object", "lo", "--axiom", "F", "--constant", "1->1[0]"});
  CHECK(bad.status == 1);
  CHECK(bad.output.find("fact.error=ConstantDoesNotSatisfyAxiom") != std::string::npos);
  // no such arrow in the target base
  CHECK(run_command({"factorize", spec, "--model", "G", "--object", "lo", "--constant", "1->2[0]"}).status == 2);
}

TEST_CASE("detect and conservative") {
  const auto m3 = scratch("m3.spec", kM3);
  const auto joins = run_command({"detect", m3, "--doctrine", "M", "--kind", "joins"});
  CHECK(joins.status == 0);
  CHECK(joins.output.find("fact.structure.joins=holds") != std::string::npos);
  const auto heyting = run_command({"detect", m3, "--doctrine", "M", "--kind", "heyting"});
  CHECK(heyting.status == 1);
  CHECK(heyting.output.find("fact.structure.heyting=absent") != std::string::npos);
  // a survey reports absence as data
  CHECK(run_command({"detect", m3, "--doctrine", "M"}).status == 0);
  CHECK(run_command({"detect", m3, "--doctrine", "M", "--kind", "shiny"}).status == 2);

  const auto spec = kSpecs + "/chain.spec";
  const auto no = run_command({"conservative", spec, "--doctrine", "B", "--object", "lo", "--axiom", "F"});
  CHECK(no.output.find("fact.conservative.full=false") != std::string::npos);
  CHECK(no.output.find("fact.conservative.counterexample=") != std::string::npos);
  const auto yes = run_command({"conservative", spec, "--doctrine", "B", "--object", "lo", "--axiom", "T"});
  CHECK(yes.output.find("fact.conservative.full=true") != std::string::npos);
}

TEST_CASE("usage and parse errors exit 2") {
  CHECK(run_command({"validate", "/nonexistent/file.spec"}).status == 2);
  CHECK(run_command({"validate", scratch("bad.spec", "poset p {\n")}).status == 2);
  CHECK(run_command({"extend", kSpecs + "/chain.spec", "--doctrine", "B"}).status == 2);
  CHECK(run_command({"extend", kSpecs + "/chain.spec", "--doctrine", "Q", "--object", "lo"}).status == 2);
  const auto lt = scratch("lt.spec", "builtin L lt atoms=[p, q] axioms=[\"p | q\"]\n");
  CHECK(run_command({"validate", lt}).status == 0);
  // an lt axiom may be a formula
  const auto ext = run_command({"extend", lt, "--doctrine", "L", "--object", "t", "--axiom", "p & ~q"});
  INFO(ext.output);
  CHECK(ext.status == 0);
  CHECK(run_command({"extend", lt, "--doctrine", "L", "--object", "t", "--axiom", "p &"}).status == 2);
  CHECK(run_command({"print", kSpecs + "/chain.spec"}).output == print_spec(parse_spec_file(kSpecs + "/chain.spec")));
}
