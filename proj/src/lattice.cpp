#include "doctrina/lattice.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "doctrina/error.hpp"

namespace doctrina {

namespace {

// Row r holds the set {c | rel(c, r)} as packed words.
struct BitRows {
  std::size_t n = 0;
  std::size_t words = 0;
  std::vector<std::uint64_t> data;

  BitRows(std::size_t n_, std::size_t w) : n(n_), words(w), data(n_ * w, 0) {}
  std::uint64_t* row(std::size_t r) { return data.data() + r * words; }
  const std::uint64_t* row(std::size_t r) const { return data.data() + r * words; }
  bool test(std::size_t r, std::size_t c) const { return (row(r)[c / 64] >> (c % 64)) & 1; }
  void set(std::size_t r, std::size_t c) { row(r)[c / 64] |= std::uint64_t{1} << (c % 64); }
};

BitRows down_rows(const Poset& p, const std::vector<Elem>& els) {
  const std::size_t n = els.size();
  BitRows rows(n, (n + 63) / 64);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (p.leq(els[c], els[r])) rows.set(r, c);
  return rows;
}

BitRows up_rows(const Poset& p, const std::vector<Elem>& els) {
  const std::size_t n = els.size();
  BitRows rows(n, (n + 63) / 64);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (p.leq(els[r], els[c])) rows.set(r, c);
  return rows;
}

std::vector<int> row_popcounts(const BitRows& rows) {
  std::vector<int> pc(rows.n, 0);
  for (std::size_t r = 0; r < rows.n; ++r)
    for (std::size_t w = 0; w < rows.words; ++w) pc[r] += std::popcount(rows.row(r)[w]);
  return pc;
}

// The member m of `set` whose row equals `set` exactly (the extremum of set
// with respect to the order encoded by `rows`), or kAbsent.
std::int32_t extremum(const BitRows& rows, const std::vector<int>& pc, const std::uint64_t* set) {
  std::int32_t best = kAbsent;
  for (std::size_t w = 0; w < rows.words; ++w) {
    std::uint64_t bits = set[w];
    while (bits) {
      std::size_t c = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
      bits &= bits - 1;
      if (best == kAbsent || pc[c] > pc[static_cast<std::size_t>(best)]) best = static_cast<std::int32_t>(c);
    }
  }
  if (best == kAbsent) return kAbsent;
  const std::uint64_t* r = rows.row(static_cast<std::size_t>(best));
  for (std::size_t w = 0; w < rows.words; ++w)
    if ((set[w] & ~r[w]) != 0) return kAbsent;
  return best;
}

// Reference: greatest element among those satisfying `pick`, by definition.
template <class Pick>
std::int32_t greatest_index(const Poset& p, const std::vector<Elem>& els, Pick pick) {
  std::int32_t best = kAbsent;
  for (std::size_t c = 0; c < els.size(); ++c)
    if (pick(c) && (best == kAbsent || p.leq(els[static_cast<std::size_t>(best)], els[c])))
      best = static_cast<std::int32_t>(c);
  if (best == kAbsent) return kAbsent;
  for (std::size_t c = 0; c < els.size(); ++c)
    if (pick(c) && !p.leq(els[c], els[static_cast<std::size_t>(best)])) return kAbsent;
  return best;
}

template <class Pick>
std::int32_t least_index(const Poset& p, const std::vector<Elem>& els, Pick pick) {
  std::int32_t best = kAbsent;
  for (std::size_t c = 0; c < els.size(); ++c)
    if (pick(c) && (best == kAbsent || p.leq(els[c], els[static_cast<std::size_t>(best)])))
      best = static_cast<std::int32_t>(c);
  if (best == kAbsent) return kAbsent;
  for (std::size_t c = 0; c < els.size(); ++c)
    if (pick(c) && !p.leq(els[static_cast<std::size_t>(best)], els[c])) return kAbsent;
  return best;
}

std::vector<Elem> enumerate(const Poset& p) { return p.elements(); }

}  // namespace

LatticeTables lattice_tables(const Poset& p, Exec exec) {
  const auto els = enumerate(p);
  const std::size_t n = els.size();
  LatticeTables t;
  t.n = n;
  t.meet.assign(n * n, kAbsent);
  t.join.assign(n * n, kAbsent);

  if (exec == Exec::serial) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        t.meet[a * n + b] = greatest_index(p, els, [&](std::size_t c) {
          return p.leq(els[c], els[a]) && p.leq(els[c], els[b]);
        });
        t.join[a * n + b] = least_index(p, els, [&](std::size_t c) {
          return p.leq(els[a], els[c]) && p.leq(els[b], els[c]);
        });
      }
    t.top = greatest_index(p, els, [](std::size_t) { return true; });
    t.bottom = least_index(p, els, [](std::size_t) { return true; });
    return t;
  }

  const BitRows down = down_rows(p, els);
  const BitRows up = up_rows(p, els);
  const auto down_pc = row_popcounts(down);
  const auto up_pc = row_popcounts(up);
  const long sn = static_cast<long>(n);
#pragma omp parallel
  {
    std::vector<std::uint64_t> lower(down.words), upper(up.words);
#pragma omp for schedule(dynamic, 4)
    for (long sa = 0; sa < sn; ++sa) {
      const std::size_t a = static_cast<std::size_t>(sa);
      for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t w = 0; w < down.words; ++w) {
          lower[w] = down.row(a)[w] & down.row(b)[w];
          upper[w] = up.row(a)[w] & up.row(b)[w];
        }
        t.meet[a * n + b] = extremum(down, down_pc, lower.data());
        t.join[a * n + b] = extremum(up, up_pc, upper.data());
      }
    }
  }
  std::vector<std::uint64_t> all(down.words, 0);
  for (std::size_t c = 0; c < n; ++c) all[c / 64] |= std::uint64_t{1} << (c % 64);
  t.top = extremum(down, down_pc, all.data());
  t.bottom = extremum(up, up_pc, all.data());
  return t;
}

std::vector<std::int32_t> implication_table(const Poset& p, const LatticeTables& t, Exec exec) {
  const auto els = enumerate(p);
  const std::size_t n = els.size();
  std::vector<std::int32_t> imp(n * n, kAbsent);
  auto below = [&](std::int32_t m, std::size_t b) {
    return m != kAbsent && p.leq(els[static_cast<std::size_t>(m)], els[b]);
  };

  if (exec == Exec::serial) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        imp[a * n + b] = greatest_index(p, els, [&](std::size_t c) { return below(t.meet[a * n + c], b); });
    return imp;
  }

  const BitRows down = down_rows(p, els);
  const auto pc = row_popcounts(down);
  const long sn = static_cast<long>(n);
#pragma omp parallel
  {
    std::vector<std::uint64_t> set(down.words);
#pragma omp for schedule(dynamic, 4)
    for (long sa = 0; sa < sn; ++sa) {
      const std::size_t a = static_cast<std::size_t>(sa);
      for (std::size_t b = 0; b < n; ++b) {
        std::fill(set.begin(), set.end(), 0);
        for (std::size_t c = 0; c < n; ++c) {
          auto m = t.meet[a * n + c];
          if (m != kAbsent && down.test(b, static_cast<std::size_t>(m)))
            set[c / 64] |= std::uint64_t{1} << (c % 64);
        }
        imp[a * n + b] = extremum(down, pc, set.data());
      }
    }
  }
  return imp;
}

std::vector<std::int32_t> pseudo_complement_table(const Poset& p, const LatticeTables& t, Exec exec) {
  const auto els = enumerate(p);
  const std::size_t n = els.size();
  std::vector<std::int32_t> neg(n, kAbsent);
  if (t.bottom == kAbsent) return neg;

  if (exec == Exec::serial) {
    for (std::size_t a = 0; a < n; ++a)
      neg[a] = greatest_index(p, els, [&](std::size_t c) { return t.meet[a * n + c] == t.bottom; });
    return neg;
  }

  const BitRows down = down_rows(p, els);
  const auto pc = row_popcounts(down);
  const long sn = static_cast<long>(n);
#pragma omp parallel
  {
    std::vector<std::uint64_t> set(down.words);
#pragma omp for schedule(static)
    for (long sa = 0; sa < sn; ++sa) {
      const std::size_t a = static_cast<std::size_t>(sa);
      std::fill(set.begin(), set.end(), 0);
      for (std::size_t c = 0; c < n; ++c)
        if (t.meet[a * n + c] == t.bottom) set[c / 64] |= std::uint64_t{1} << (c % 64);
      neg[a] = extremum(down, pc, set.data());
    }
  }
  return neg;
}

StructureCertificate lattice_ops(const Poset& p, Exec exec) {
  StructureCertificate cert;
  cert.elements = enumerate(p);
  cert.lattice = lattice_tables(p, exec);
  const auto& t = cert.lattice;
  auto complete = [](const std::vector<std::int32_t>& v) {
    return std::none_of(v.begin(), v.end(), [](std::int32_t x) { return x == kAbsent; });
  };
  if (complete(t.meet)) cert.kinds.insert(CertKind::meets);
  if (complete(t.join)) cert.kinds.insert(CertKind::joins);
  if (t.top != kAbsent) cert.kinds.insert(CertKind::top);
  if (t.bottom != kAbsent) cert.kinds.insert(CertKind::bottom);
  return cert;
}

StructureCertificate heyting_ops(const Poset& p, Exec exec) {
  StructureCertificate cert = lattice_ops(p, exec);
  if (!cert.has(CertKind::meets) || !cert.has(CertKind::top))
    fail(Errc::MeetsRequired, "heyting_ops needs finite meets and a top");
  const std::size_t n = cert.elements.size();
  cert.implication = implication_table(p, cert.lattice, exec);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (cert.implication[a * n + b] == kAbsent)
        fail(Errc::NotAHeytingAlgebra, "no relative pseudo-complement for (" + p.label(cert.elements[a]) +
                                           "," + p.label(cert.elements[b]) + ")");
  cert.kinds.insert(CertKind::heyting);
  cert.pseudo_complement = pseudo_complement_table(p, cert.lattice, exec);
  if (cert.lattice.bottom != kAbsent) {
    cert.kinds.insert(CertKind::pseudo_complement);
    const auto bot = static_cast<std::size_t>(cert.lattice.bottom);
    bool boolean = true;
    for (std::size_t a = 0; a < n && boolean; ++a) {
      auto na = static_cast<std::size_t>(cert.implication[a * n + bot]);
      boolean = static_cast<std::size_t>(cert.implication[na * n + bot]) == a;
    }
    if (boolean) cert.kinds.insert(CertKind::boolean);
  }
  if (auto neg = find_star_negation(p, cert.lattice)) {
    cert.negation = std::move(*neg);
    cert.kinds.insert(CertKind::star_autonomous);
  }
  return cert;
}

std::optional<std::tuple<Elem, Elem, Elem>> star_autonomy_violation(
    const Poset& p, std::span<const std::int32_t> negation) {
  const auto els = enumerate(p);
  const std::size_t n = els.size();
  for (std::size_t a = 0; a < n; ++a) {
    auto na = negation[a];
    if (na == kAbsent || negation[static_cast<std::size_t>(na)] != static_cast<std::int32_t>(a))
      return std::make_tuple(els[a], els[a], els[a]);
  }
  auto index = [&](Elem e) { return *p.index_of(e); };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      auto ab = p.meet(els[a], els[b]);
      if (!ab) return std::make_tuple(els[a], els[b], els[b]);
      for (std::size_t c = 0; c < n; ++c) {
        auto bc = p.meet(els[b], els[c]);
        if (!bc) return std::make_tuple(els[a], els[b], els[c]);
        bool lhs = p.leq(*ab, els[static_cast<std::size_t>(negation[c])]);
        bool rhs = p.leq(els[a], els[static_cast<std::size_t>(negation[index(*bc)])]);
        if (lhs != rhs) return std::make_tuple(els[a], els[b], els[c]);
      }
    }
  return std::nullopt;
}

std::optional<std::vector<std::int32_t>> find_star_negation(const Poset& p, const LatticeTables& t) {
  const std::size_t n = t.n;
  if (std::any_of(t.meet.begin(), t.meet.end(), [](std::int32_t x) { return x == kAbsent; }))
    return std::nullopt;
  const auto imp = implication_table(p, t, Exec::parallel);
  for (std::size_t z = 0; z < n; ++z) {
    std::vector<std::int32_t> neg(n);
    bool total = true;
    for (std::size_t c = 0; c < n && total; ++c) {
      neg[c] = imp[c * n + z];
      total = neg[c] != kAbsent;
    }
    if (total && !star_autonomy_violation(p, neg)) return neg;
  }
  return std::nullopt;
}

Adjoints adjoints(const MonotoneMap& f, Exec exec) {
  const PosetRef src = f.source();
  const PosetRef tgt = f.target();
  const auto pe = enumerate(*src);
  const auto qe = enumerate(*tgt);
  const std::size_t np = pe.size();
  const std::size_t nq = qe.size();
  std::vector<Elem> fv(np);
  for (std::size_t i = 0; i < np; ++i) fv[i] = f(pe[i]);

  std::vector<std::int32_t> left(nq, kAbsent), right(nq, kAbsent);
  auto solve = [&](std::size_t b) {
    left[b] = least_index(*src, pe, [&](std::size_t a) { return tgt->leq(qe[b], fv[a]); });
    right[b] = greatest_index(*src, pe, [&](std::size_t a) { return tgt->leq(fv[a], qe[b]); });
  };
  if (exec == Exec::parallel) {
    const long snq = static_cast<long>(nq);
#pragma omp parallel for schedule(dynamic, 8)
    for (long b = 0; b < snq; ++b) solve(static_cast<std::size_t>(b));
  } else {
    for (std::size_t b = 0; b < nq; ++b) solve(b);
  }

  auto build = [&](const std::vector<std::int32_t>& table) -> std::optional<MonotoneMap> {
    if (std::any_of(table.begin(), table.end(), [](std::int32_t x) { return x == kAbsent; }))
      return std::nullopt;
    std::vector<Elem> values(nq);
    for (std::size_t b = 0; b < nq; ++b) values[b] = pe[static_cast<std::size_t>(table[b])];
    return tabulate(MonotoneMap(tgt, src, [tgt, values](Elem e) { return values[*tgt->index_of(e)]; }));
  };
  Adjoints out{build(left), build(right)};

  // verify before returning
  if (out.left) {
    if (monotonicity_violation(*out.left)) fail(Errc::InternalInvariantViolation, "left adjoint not monotone");
    for (std::size_t b = 0; b < nq; ++b)
      for (std::size_t a = 0; a < np; ++a)
        if (src->leq((*out.left)(qe[b]), pe[a]) != tgt->leq(qe[b], fv[a]))
          fail(Errc::InternalInvariantViolation, "left adjoint fails the Galois condition");
  }
  if (out.right) {
    if (monotonicity_violation(*out.right)) fail(Errc::InternalInvariantViolation, "right adjoint not monotone");
    for (std::size_t b = 0; b < nq; ++b)
      for (std::size_t a = 0; a < np; ++a)
        if (src->leq(pe[a], (*out.right)(qe[b])) != tgt->leq(fv[a], qe[b]))
          fail(Errc::InternalInvariantViolation, "right adjoint fails the Galois condition");
  }
  return out;
}

DownsetQuotient downset_and_quotient(const PosetRef& p, Elem x) {
  const auto els = enumerate(*p);
  std::vector<Elem> cut(els.size());
  for (std::size_t i = 0; i < els.size(); ++i) {
    auto m = p->meet(x, els[i]);
    if (!m) fail(Errc::MeetsRequired, "no meet of " + p->label(x) + " and " + p->label(els[i]));
    cut[i] = *m;
  }

  // classes keyed by x /\ a, represented by the first a in enumeration order
  std::map<Elem, std::size_t> class_of;
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < els.size(); ++i)
    if (class_of.emplace(cut[i], reps.size()).second) reps.push_back(i);

  const std::size_t k = reps.size();
  std::vector<std::string> names;
  std::vector<std::uint8_t> rel(k * k, 0);
  for (std::size_t i = 0; i < k; ++i) names.push_back("[" + p->label(els[reps[i]]) + "]");
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      rel[i * k + j] = p->leq(cut[reps[i]], els[reps[j]]) ? 1 : 0;
  PosetRef quotient = std::make_shared<const FinitePoset>(std::move(names), std::move(rel));
  PosetRef downset = p->below(x);

  std::vector<Elem> rep_cut(k);
  for (std::size_t i = 0; i < k; ++i) rep_cut[i] = cut[reps[i]];

  DownsetQuotient out{
      downset, quotient,
      MonotoneMap(downset, quotient,
                  [p, x, class_of](Elem a) -> Elem { return class_of.at(*p->meet(x, a)); }),
      MonotoneMap(quotient, downset, [rep_cut](Elem c) { return rep_cut[c]; }),
  };

  if (monotonicity_violation(out.to_quotient) || monotonicity_violation(out.from_quotient))
    fail(Errc::InternalInvariantViolation, "quotient iso is not monotone");
  for (Elem a : downset->elements())
    if (out.from_quotient(out.to_quotient(a)) != a)
      fail(Errc::InternalInvariantViolation, "quotient round trip fails at " + p->label(a));
  for (std::size_t c = 0; c < k; ++c)
    if (out.to_quotient(out.from_quotient(c)) != c)
      fail(Errc::InternalInvariantViolation, "quotient round trip fails at class " + quotient->label(c));
  return out;
}

}  // namespace doctrina
