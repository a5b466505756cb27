#pragma once

// Brute-force oracles on doctrines. Fibers are copied into relation matrices
// and every structure is recomputed from the order alone.

#include <map>
#include <optional>
#include <vector>

#include "doctrina/doctrine.hpp"
#include "support/oracles.hpp"

namespace oracle {

struct RawFiber {
  std::vector<doctrina::Elem> els;
  RawPoset order;

  std::size_t size() const { return els.size(); }
  std::size_t idx(doctrina::Elem e) const {
    for (std::size_t i = 0; i < els.size(); ++i)
      if (els[i] == e) return i;
    throw std::logic_error("element outside the fiber");
  }
};

inline RawFiber raw_fiber(const doctrina::Poset& p) {
  RawFiber f;
  f.els = p.elements();
  const std::size_t n = f.els.size();
  f.order.leq.assign(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a) {
    f.order.names.push_back(p.label(f.els[a]));
    for (std::size_t b = 0; b < n; ++b) f.order.leq[a][b] = p.leq(f.els[a], f.els[b]);
  }
  return f;
}

// Values of a reindexing as indices: out[i] = index of P(f)(els_cod[i]).
inline std::vector<std::size_t> raw_map(const doctrina::Doctrine& d, const doctrina::Arrow& f,
                                        const RawFiber& cod, const RawFiber& dom) {
  auto m = d.reindex(f);
  std::vector<std::size_t> out(cod.size());
  for (std::size_t i = 0; i < cod.size(); ++i) out[i] = dom.idx(m(cod.els[i]));
  return out;
}

// Candidates for the fibered equality over A: every element of P(A x A)
// meeting clauses (1) and (2), in enumeration order.
inline std::vector<doctrina::Elem> equality_candidates(const doctrina::Doctrine& d, doctrina::Obj a) {
  const auto& C = *d.base();
  const auto aa = C.product(a, a);
  const RawFiber fa = raw_fiber(*d.fiber(a));
  const RawFiber faa = raw_fiber(*d.fiber(aa));
  const auto diag = raw_map(d, doctrina::diagonal(C, a), faa, fa);
  const auto p1 = raw_map(d, C.pr1(a, a), fa, faa);
  const auto p2 = raw_map(d, C.pr2(a, a), fa, faa);
  const auto top = *oracle::top(fa.order);
  std::vector<doctrina::Elem> out;
  for (std::size_t x = 0; x < faa.size(); ++x) {
    if (!fa.order.leq[top][diag[x]]) continue;
    bool ok = true;
    for (std::size_t al = 0; al < fa.size() && ok; ++al) {
      auto m = oracle::meet(faa.order, p1[al], x);
      ok = m && faa.order.leq[*m][p2[al]];
    }
    if (ok) out.push_back(faa.els[x]);
  }
  return out;
}

struct ElementaryVerdict {
  bool applicable = true;  // every fiber involved has at most `cap` elements
  bool holds = false;
  bool unique = true;
  std::map<doctrina::Obj, doctrina::Elem> delta;
};

inline ElementaryVerdict elementary(const doctrina::Doctrine& d, std::size_t cap = 64) {
  const auto& C = *d.base();
  ElementaryVerdict v;
  const auto objs = C.objects();
  auto small = [&](doctrina::Obj a) { return d.fiber(C.product(a, a))->size() <= cap; };
  std::map<doctrina::Obj, std::vector<doctrina::Elem>> cand;
  auto get = [&](doctrina::Obj a) -> const std::vector<doctrina::Elem>& {
    auto it = cand.find(a);
    if (it == cand.end()) it = cand.emplace(a, equality_candidates(d, a)).first;
    return it->second;
  };
  for (auto a : objs) {
    if (!small(a)) return {false};
    const auto& c = get(a);
    if (c.empty()) return v;
    v.delta[a] = c.front();
    v.unique = v.unique && c.size() == 1;
  }
  for (auto a : objs)
    for (auto b : objs) {
      const auto q = C.product(a, b);
      if (!small(q)) return {false};
      const auto& cq = get(q);
      if (cq.empty()) return v;
      // clause 3 with the chosen witnesses
      const auto qq = C.product(q, q);
      const auto p = C.pr1(q, q), r = C.pr2(q, q);
      const auto u = C.pair(C.compose(C.pr1(a, b), p), C.compose(C.pr1(a, b), r));
      const auto w = C.pair(C.compose(C.pr2(a, b), p), C.compose(C.pr2(a, b), r));
      const RawFiber fqq = raw_fiber(*d.fiber(qq));
      const auto da = fqq.idx(d.reindex(u)(v.delta[a]));
      const auto db = fqq.idx(d.reindex(w)(v.delta[b]));
      auto box = oracle::meet(fqq.order, da, db);
      if (!box || !fqq.order.leq[*box][fqq.idx(cq.front())]) return v;
    }
  v.holds = true;
  return v;
}

}  // namespace oracle
