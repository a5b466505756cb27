#include <doctest.h>

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "doctrina/error.hpp"
#include "doctrina/lattice.hpp"
#include "doctrina/poset.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace doctrina;
using Pairs = std::vector<std::pair<std::string, std::string>>;

namespace {

constexpr std::uint64_t kSeed = 20240611;
constexpr std::size_t kSuiteSize = 60;

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::UsageError;
}

std::size_t idx(const LatticeTables& t, std::size_t a, std::size_t b) { return a * t.n + b; }

// Random monotone map into a lattice: walk the source in a linear extension
// and pick any target element above the images of everything below.
std::vector<std::size_t> random_monotone(testgen::Rng& rng, const testgen::RawPoset& src,
                                         const testgen::RawPoset& tgt) {
  std::vector<std::size_t> order(src.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto below = [&](std::size_t x) {
      std::size_t k = 0;
      for (std::size_t c = 0; c < src.size(); ++c) k += src.leq[c][x];
      return k;
    };
    return below(a) < below(b);
  });
  std::vector<std::size_t> f(src.size(), 0);
  for (std::size_t a : order) {
    std::vector<std::size_t> ok;
    for (std::size_t c = 0; c < tgt.size(); ++c) {
      bool fits = true;
      for (std::size_t p = 0; p < src.size(); ++p)
        if (p != a && src.leq[p][a] && !tgt.leq[f[p]][c]) fits = false;
      if (fits) ok.push_back(c);
    }
    REQUIRE_FALSE(ok.empty());
    f[a] = ok[rng.below(ok.size())];
  }
  return f;
}

MonotoneMap as_map(PosetRef src, PosetRef tgt, const std::vector<std::size_t>& f) {
  return MonotoneMap(std::move(src), std::move(tgt), [f](Elem e) { return Elem{f[e]}; });
}

bool is_lattice(const testgen::RawPoset& p) {
  for (std::size_t a = 0; a < p.size(); ++a)
    for (std::size_t b = 0; b < p.size(); ++b)
      if (!oracle::meet(p, a, b) || !oracle::join(p, a, b)) return false;
  return true;
}

}  // namespace

TEST_CASE("validate_poset: singleton") {
  Pairs pairs{{"a", "a"}};
  auto p = validate_poset({"a"}, pairs);
  CHECK(p->size() == 1);
  CHECK(p->leq(0, 0));
}

TEST_CASE("validate_poset: chain without transitive closure") {
  Pairs pairs{{"0", "0"}, {"1", "1"}, {"2", "2"}, {"0", "1"}, {"1", "2"}};
  CHECK(code_of([&] { validate_poset({"0", "1", "2"}, pairs); }) == Errc::TransitivityViolation);
  try {
    validate_poset({"0", "1", "2"}, pairs);
  } catch (const Error& e) {
    CHECK(e.witness().find("(0,2)") != std::string::npos);
  }
}

TEST_CASE("validate_poset: one-atom Boolean algebra has nine order pairs") {
  const std::vector<std::string> els{"bot", "p", "np", "top"};
  Pairs pairs;
  for (const auto& e : els) pairs.emplace_back(e, e);
  for (const auto& e : {"p", "np", "top"}) pairs.emplace_back("bot", e);
  pairs.emplace_back("p", "top");
  pairs.emplace_back("np", "top");
  CHECK(pairs.size() == 9);
  auto p = validate_poset(els, pairs);
  std::size_t count = 0;
  for (Elem a = 0; a < 4; ++a)
    for (Elem b = 0; b < 4; ++b) count += p->leq(a, b);
  CHECK(count == 9);
  // duplicates are harmless
  pairs.emplace_back("p", "top");
  CHECK(validate_poset(els, pairs)->size() == 4);
}

TEST_CASE("validate_poset: malformed input") {
  Pairs missing_refl{{"a", "a"}};
  CHECK(code_of([&] { validate_poset({"a", "b"}, missing_refl); }) == Errc::ReflexivityViolation);
  Pairs both_ways{{"a", "a"}, {"b", "b"}, {"a", "b"}, {"b", "a"}};
  CHECK(code_of([&] { validate_poset({"a", "b"}, both_ways); }) == Errc::AntisymmetryViolation);
  Pairs unknown{{"a", "z"}};
  CHECK(code_of([&] { validate_poset({"a"}, unknown); }) == Errc::UnresolvedReference);
  Pairs refl{{"a", "a"}};
  CHECK(code_of([&] { validate_poset({"a", "a"}, refl); }) == Errc::DuplicateName);
}

TEST_CASE("lattice_ops: 2-chain, diamond, antichain") {
  auto chain = testgen::build(testgen::chain(2));
  auto c = lattice_ops(*chain);
  for (auto k : {CertKind::meets, CertKind::joins, CertKind::top, CertKind::bottom}) CHECK(c.has(k));

  Pairs covers{{"bot", "a"}, {"bot", "b"}, {"a", "top"}, {"b", "top"}};
  auto diamond = poset_from_covers({"bot", "a", "b", "top"}, covers);
  auto d = lattice_ops(*diamond);
  CHECK(d.has(CertKind::meets));
  CHECK(d.lattice.meet[idx(d.lattice, 1, 2)] == 0);
  CHECK(d.lattice.join[idx(d.lattice, 1, 2)] == 3);

  auto anti = lattice_ops(*testgen::build(testgen::antichain(2)));
  CHECK_FALSE(anti.has(CertKind::meets));
  CHECK_FALSE(anti.has(CertKind::joins));
  CHECK_FALSE(anti.has(CertKind::top));
  CHECK_FALSE(anti.has(CertKind::bottom));
  CHECK(anti.lattice.meet[idx(anti.lattice, 0, 1)] == kAbsent);
}

TEST_CASE("heyting_ops: one-atom algebra is Boolean, 3-chain is not") {
  auto ba = heyting_ops(*testgen::build(testgen::boolean_algebra(1)));
  CHECK(ba.has(CertKind::heyting));
  CHECK(ba.has(CertKind::boolean));
  CHECK(ba.has(CertKind::star_autonomous));

  auto ch = heyting_ops(*testgen::build(testgen::chain(3)));
  CHECK(ch.has(CertKind::heyting));
  CHECK_FALSE(ch.has(CertKind::boolean));
  CHECK(ch.pseudo_complement[1] == 0);  // not half = 0
  CHECK(ch.pseudo_complement[0] == 2);  // not 0 = 1
  CHECK_FALSE(ch.has(CertKind::star_autonomous));
}

TEST_CASE("heyting_ops: errors") {
  CHECK(code_of([] { heyting_ops(*testgen::build(testgen::antichain(2))); }) == Errc::MeetsRequired);
  CHECK(code_of([] { heyting_ops(*testgen::build(testgen::n5())); }) == Errc::NotAHeytingAlgebra);
  CHECK(code_of([] { heyting_ops(*testgen::build(testgen::m3())); }) == Errc::NotAHeytingAlgebra);
}

TEST_CASE("adjoints: identity") {
  auto p = testgen::build(testgen::n5());
  auto adj = adjoints(identity_map(p));
  REQUIRE(adj.left);
  REQUIRE(adj.right);
  CHECK_FALSE(first_difference(*adj.left, identity_map(p)));
  CHECK_FALSE(first_difference(*adj.right, identity_map(p)));
}

TEST_CASE("adjoints: diagonal of the 2-chain") {
  auto two = testgen::build(testgen::chain(2));
  // square, componentwise; index i*2+j
  Pairs covers{{"00", "01"}, {"00", "10"}, {"01", "11"}, {"10", "11"}};
  auto sq = poset_from_covers({"00", "01", "10", "11"}, covers);
  MonotoneMap diag(two, sq, [](Elem e) { return e * 3; });
  auto adj = adjoints(diag);
  REQUIRE(adj.left);
  REQUIRE(adj.right);
  for (Elem i = 0; i < 2; ++i)
    for (Elem j = 0; j < 2; ++j) {
      CHECK((*adj.left)(i * 2 + j) == std::max(i, j));
      CHECK((*adj.right)(i * 2 + j) == std::min(i, j));
    }
}

TEST_CASE("adjoints: constant top from a point into the 2-chain") {
  auto pt = testgen::build(testgen::chain(1));
  auto two = testgen::build(testgen::chain(2));
  auto adj = adjoints(MonotoneMap(pt, two, [](Elem) { return Elem{1}; }));
  REQUIRE(adj.left);
  CHECK((*adj.left)(0) == 0);
  CHECK((*adj.left)(1) == 0);
  // R(bot) would be the max of {a | top <= bot}, which is empty
  CHECK_FALSE(adj.right);
  auto want = oracle::right_adjoint(testgen::chain(1), testgen::chain(2), {1});
  CHECK_FALSE(want);
}

TEST_CASE("downset_and_quotient: top and bottom") {
  auto ba = testgen::build(testgen::boolean_algebra(2));
  auto at_top = downset_and_quotient(ba, 3);
  CHECK(at_top.downset->size() == 4);
  CHECK(at_top.quotient->size() == 4);
  for (Elem a = 0; a < 4; ++a) CHECK(at_top.from_quotient(at_top.to_quotient(a)) == a);
  auto at_bot = downset_and_quotient(ba, 0);
  CHECK(at_bot.downset->size() == 1);
  CHECK(at_bot.quotient->size() == 1);
}

TEST_CASE("downset_and_quotient: two-atom algebra at p") {
  // 16 elements: subsets of the four valuations of (p,q); bit v set means
  // valuation v satisfies. v = 2*p + q.
  auto ba = testgen::build(testgen::boolean_algebra(4));
  const Elem p = 0b1100, pq = 0b1000, pnq = 0b0100;
  auto dq = downset_and_quotient(ba, p);
  CHECK(dq.downset->size() == 4);
  CHECK(dq.quotient->size() == 4);
  auto down = dq.downset->elements();
  std::sort(down.begin(), down.end());
  CHECK(down == std::vector<Elem>{0, pnq, pq, p});
  CHECK(code_of([&] { downset_and_quotient(testgen::build(testgen::antichain(2)), 0); }) ==
        Errc::MeetsRequired);
}

TEST_CASE("subset lattices answer in closed form") {
  auto names = std::make_shared<const std::vector<std::string>>(std::vector<std::string>{"x", "y", "z"});
  auto s = std::make_shared<const SubsetLattice>(3, 0b101, names);
  CHECK(s->size() == 4);
  auto cert = heyting_ops(*s);
  CHECK(cert.has(CertKind::boolean));
  for (Elem e : s->elements()) CHECK(s->parse(s->label(e)) == e);
  auto below = s->below(0b100);
  CHECK(below->size() == 2);
  CHECK(code_of([] { SubsetLattice(65, 0); }) == Errc::ProbeTooLarge);
}

TEST_CASE("property: tables agree with brute force, serial and parallel") {
  for (const auto& raw : testgen::poset_suite(kSeed, kSuiteSize)) {
    auto p = testgen::build(raw);
    auto serial = lattice_tables(*p, Exec::serial);
    auto parallel = lattice_tables(*p, Exec::parallel);
    CHECK(serial == parallel);
    const std::size_t n = raw.size();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        auto m = oracle::meet(raw, a, b);
        auto j = oracle::join(raw, a, b);
        CHECK(serial.meet[a * n + b] == (m ? std::int32_t(*m) : kAbsent));
        CHECK(serial.join[a * n + b] == (j ? std::int32_t(*j) : kAbsent));
        if (m) {
          CHECK(raw.leq[*m][a]);
          CHECK(raw.leq[*m][b]);
          for (std::size_t c = 0; c < n; ++c)
            if (raw.leq[c][a] && raw.leq[c][b]) CHECK(raw.leq[c][*m]);
        }
      }
    auto t = oracle::top(raw), bt = oracle::bottom(raw);
    CHECK(serial.top == (t ? std::int32_t(*t) : kAbsent));
    CHECK(serial.bottom == (bt ? std::int32_t(*bt) : kAbsent));
  }
}

TEST_CASE("property: Heyting structure agrees with brute force") {
  std::size_t heyting_seen = 0, boolean_seen = 0;
  for (const auto& raw : testgen::poset_suite(kSeed + 1, kSuiteSize)) {
    if (!is_lattice(raw)) continue;
    auto p = testgen::build(raw);
    const std::size_t n = raw.size();
    const bool distributive = oracle::distributive(raw);
    if (!distributive) {
      CHECK(code_of([&] { heyting_ops(*p); }) == Errc::NotAHeytingAlgebra);
      continue;
    }
    ++heyting_seen;
    auto cert = heyting_ops(*p, Exec::serial);
    auto par = heyting_ops(*p, Exec::parallel);
    CHECK(cert.implication == par.implication);
    CHECK(cert.pseudo_complement == par.pseudo_complement);
    CHECK(cert.kinds == par.kinds);
    const auto& t = cert.lattice;
    auto imp = [&](std::size_t a, std::size_t b) { return std::size_t(cert.implication[a * n + b]); };
    auto meet = [&](std::size_t a, std::size_t b) { return std::size_t(t.meet[a * n + b]); };
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        CHECK(imp(a, b) == *oracle::implication(raw, a, b));
        for (std::size_t c = 0; c < n; ++c)
          CHECK(raw.leq[meet(a, c)][b] == raw.leq[c][imp(a, b)]);
        // ((x/\a) -> (x/\b)) /\ x = x /\ (a -> b)
        for (std::size_t x = 0; x < n; ++x)
          CHECK(meet(imp(meet(x, a), meet(x, b)), x) == meet(x, imp(a, b)));
      }
    for (std::size_t a = 0; a < n; ++a)
      CHECK(std::size_t(cert.pseudo_complement[a]) == *oracle::pseudo_complement(raw, a));
    bool involutive = true;
    for (std::size_t a = 0; a < n; ++a)
      involutive = involutive &&
                   std::size_t(cert.pseudo_complement[std::size_t(cert.pseudo_complement[a])]) == a;
    CHECK(cert.has(CertKind::boolean) == involutive);
    CHECK(cert.has(CertKind::boolean) == oracle::complemented(raw));
    boolean_seen += cert.has(CertKind::boolean);
    if (cert.has(CertKind::star_autonomous)) CHECK_FALSE(star_autonomy_violation(*p, cert.negation));
    if (cert.has(CertKind::boolean)) CHECK(cert.has(CertKind::star_autonomous));
  }
  CHECK(heyting_seen >= 10);
  CHECK(boolean_seen >= 4);
}

TEST_CASE("property: adjoints agree with brute force and satisfy the triple law") {
  testgen::Rng rng(kSeed + 2);
  auto suite = testgen::poset_suite(kSeed + 3, kSuiteSize);
  std::vector<testgen::RawPoset> lattices;
  for (const auto& raw : suite)
    if (is_lattice(raw)) lattices.push_back(raw);
  REQUIRE(lattices.size() >= 10);
  std::size_t left_seen = 0, right_seen = 0;
  for (int round = 0; round < 200; ++round) {
    const auto& rs = suite[rng.below(suite.size())];
    const auto& rt = lattices[rng.below(lattices.size())];
    auto table = random_monotone(rng, rs, rt);
    auto src = testgen::build(rs);
    auto tgt = testgen::build(rt);
    auto f = as_map(src, tgt, table);
    REQUIRE_FALSE(monotonicity_violation(f));
    auto adj = adjoints(f, Exec::serial);
    auto par = adjoints(f, Exec::parallel);
    auto want_left = oracle::left_adjoint(rs, rt, table);
    auto want_right = oracle::right_adjoint(rs, rt, table);
    CHECK(adj.left.has_value() == want_left.has_value());
    CHECK(adj.right.has_value() == want_right.has_value());
    CHECK(par.left.has_value() == want_left.has_value());
    CHECK(par.right.has_value() == want_right.has_value());
    if (adj.left && want_left) {
      ++left_seen;
      auto& L = *adj.left;
      for (std::size_t b = 0; b < rt.size(); ++b) {
        CHECK(L(b) == (*want_left)[b]);
        CHECK((*par.left)(b) == L(b));
        CHECK(L(f(L(b))) == L(b));
      }
      for (std::size_t a = 0; a < rs.size(); ++a) CHECK(f(L(f(a))) == f(a));
    }
    if (adj.right && want_right) {
      ++right_seen;
      auto& R = *adj.right;
      for (std::size_t b = 0; b < rt.size(); ++b) {
        CHECK(R(b) == (*want_right)[b]);
        CHECK(R(f(R(b))) == R(b));
      }
      for (std::size_t a = 0; a < rs.size(); ++a) CHECK(f(R(f(a))) == f(a));
    }
  }
  CHECK(left_seen >= 5);
  CHECK(right_seen >= 5);
}

TEST_CASE("property: downset and quotient are isomorphic") {
  testgen::Rng rng(kSeed + 4);
  for (const auto& raw : testgen::poset_suite(kSeed + 5, kSuiteSize)) {
    if (!is_lattice(raw)) continue;
    auto p = testgen::build(raw);
    const Elem x = rng.below(raw.size());
    auto dq = downset_and_quotient(p, x);
    std::size_t below_x = 0;
    for (std::size_t a = 0; a < raw.size(); ++a) below_x += raw.leq[a][x];
    CHECK(dq.downset->size() == below_x);
    CHECK(dq.quotient->size() == below_x);
    for (Elem a : dq.downset->elements()) CHECK(dq.from_quotient(dq.to_quotient(a)) == a);
    for (Elem c : dq.quotient->elements()) CHECK(dq.to_quotient(dq.from_quotient(c)) == c);
    // [a] <= [b] iff x /\ a <= b, checked on all of P
    for (Elem a = 0; a < raw.size(); ++a)
      for (Elem b = 0; b < raw.size(); ++b) {
        auto xa = *oracle::meet(raw, x, a);
        auto xb = *oracle::meet(raw, x, b);
        CHECK(dq.quotient->leq(dq.to_quotient(xa), dq.to_quotient(xb)) == raw.leq[xa][b]);
      }
  }
}

TEST_CASE("property: covers round trip") {
  for (const auto& raw : testgen::poset_suite(kSeed + 6, kSuiteSize)) {
    auto p = testgen::build(raw);
    Pairs covers;
    for (auto [a, b] : covering_pairs(*p)) covers.emplace_back(p->label(a), p->label(b));
    auto q = poset_from_covers(raw.names, covers);
    for (Elem a = 0; a < raw.size(); ++a)
      for (Elem b = 0; b < raw.size(); ++b) CHECK(q->leq(a, b) == raw.leq[a][b]);
  }
}

TEST_CASE("monotone maps from tables") {
  auto two = testgen::build(testgen::chain(2));
  Pairs flip{{"c0", "c1"}, {"c1", "c0"}};
  CHECK(code_of([&] { monotone_map_from_table(two, two, flip); }) == Errc::NotMonotone);
  Pairs partial{{"c0", "c1"}};
  CHECK(code_of([&] { monotone_map_from_table(two, two, partial); }) == Errc::NotMonotone);
  Pairs up{{"c0", "c1"}, {"c1", "c1"}};
  auto m = monotone_map_from_table(two, two, up);
  CHECK(m(0) == 1);
  CHECK(first_difference(m, identity_map(two)) == Elem{0});
}
