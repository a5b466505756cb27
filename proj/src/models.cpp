#include "doctrina/models.hpp"

#include <algorithm>
#include <bit>
#include <random>

#include "doctrina/error.hpp"

namespace doctrina {

namespace {

Elem full_mask(Obj n) { return n >= 64 ? ~Elem{0} : (Elem{1} << n) - 1; }

}  // namespace

DoctrineRef powerset_doctrine(std::vector<Obj> probes, const Limits& limits) {
  for (Obj p : probes)
    if (p >= 64 || (std::size_t{1} << p) > limits.fiber_cap)
      fail(Errc::ProbeTooLarge, "powerset of a " + std::to_string(p) + "-element probe exceeds the fiber cap");
  auto base = std::make_shared<const FinSetCategory>(std::move(probes));
  return make_doctrine(
      "powerset", base,
      [](Obj n) -> PosetRef {
        if (n > 64) fail(Errc::ProbeTooLarge, "subsets of a " + std::to_string(n) + "-element set");
        return std::make_shared<SubsetLattice>(n, full_mask(n));
      },
      [base](const Arrow& f) {
        // inverse image
        auto src = std::make_shared<SubsetLattice>(f.cod, full_mask(f.cod));
        auto dst = std::make_shared<SubsetLattice>(f.dom, full_mask(f.dom));
        return MonotoneMap(src, dst, [table = f.rep](Elem s) {
          Elem out = 0;
          for (std::size_t i = 0; i < table.size(); ++i)
            if ((s >> table[i]) & 1) out |= Elem{1} << i;
          return out;
        });
      });
}

Elem direct_image(Obj c, Obj b, Elem s) {
  Elem out = 0;
  for (Obj x = 0; x < c; ++x)
    for (Obj y = 0; y < b; ++y)
      if ((s >> (x * b + y)) & 1) out |= Elem{1} << x;
  return out;
}

Elem universal_image(Obj c, Obj b, Elem s) {
  Elem out = 0;
  for (Obj x = 0; x < c; ++x) {
    bool all = true;
    for (Obj y = 0; y < b && all; ++y) all = (s >> (x * b + y)) & 1;
    if (all) out |= Elem{1} << x;
  }
  return out;
}

RandomDoctrine random_semilattice_doctrine(std::uint64_t seed, const RandomBounds& bounds) {
  std::mt19937_64 rng(seed);
  // plain modulo keeps the stream identical across standard libraries
  auto below = [&](std::uint64_t n) -> std::uint64_t { return n == 0 ? 0 : rng() % n; };

  // base: a family of subsets of a 3-point ground set closed under
  // intersection, with the full set as top
  const std::size_t want = 1 + below(std::max(1u, bounds.max_objects));
  std::vector<unsigned> family{7};
  auto close = [](std::vector<unsigned> fam) {
    for (bool grew = true; grew;) {
      grew = false;
      const auto snap = fam;
      for (unsigned x : snap)
        for (unsigned y : snap)
          if (std::find(fam.begin(), fam.end(), x & y) == fam.end()) {
            fam.push_back(x & y);
            grew = true;
          }
    }
    return fam;
  };
  for (int tries = 0; tries < 8 && family.size() < want; ++tries) {
    const auto pick = static_cast<unsigned>(below(8));
    if (std::find(family.begin(), family.end(), pick) != family.end()) continue;
    auto next = family;
    next.push_back(pick);
    next = close(next);
    if (next.size() <= want) family = next;
  }
  std::sort(family.begin(), family.end(), [](unsigned x, unsigned y) {
    return std::popcount(x) != std::popcount(y) ? std::popcount(x) < std::popcount(y) : x < y;
  });
  const std::size_t n = family.size();
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("o" + std::to_string(i));
  std::vector<std::pair<std::string, std::string>> leq;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if ((family[i] & ~family[j]) == 0) leq.emplace_back(names[i], names[j]);
  auto lattice = validate_poset(names, leq);
  auto base = semilattice_to_category(lattice);

  RandomDoctrine out;
  out.base = base;
  out.points = static_cast<unsigned>(below(bounds.max_points + 1));
  std::vector<std::size_t> label(out.points);
  for (auto& l : label) l = below(n);
  out.support.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (unsigned t = 0; t < out.points; ++t)
      if (lattice->leq(label[t], a)) out.support[a] |= Elem{1} << t;

  // order on points for the downset variant; t <= u only when t < u
  std::vector<Elem> down(out.points, 0);  // down[u] = {t | t <= u}
  for (unsigned u = 0; u < out.points; ++u) {
    down[u] = Elem{1} << u;
    for (unsigned t = 0; t < u; ++t)
      if (below(3) == 0) down[u] |= down[t];
  }

  std::vector<PosetRef> fibers(n);
  for (std::size_t a = 0; a < n; ++a) {
    auto whole = std::make_shared<SubsetLattice>(out.points, out.support[a]);
    if (!bounds.downset_fibers) {
      fibers[a] = whole;
      continue;
    }
    std::vector<Elem> members;
    for (std::size_t i = 0, m = whole->size(); i < m; ++i) {
      Elem x = whole->at(i);
      bool closed = true;
      for (unsigned u = 0; u < out.points && closed; ++u)
        if ((x >> u) & 1) closed = (down[u] & out.support[a] & ~x) == 0;
      if (closed) members.push_back(x);
    }
    fibers[a] = std::make_shared<SubPoset>(whole, std::move(members));
  }

  auto shared = std::make_shared<const std::vector<PosetRef>>(std::move(fibers));
  auto support = out.support;
  out.doctrine = make_doctrine(
      "random" + std::to_string(seed), base, [shared](Obj a) { return shared->at(a); },
      [shared, support](const Arrow& f) {
        const Elem keep = support[f.dom];
        return MonotoneMap(shared->at(f.cod), shared->at(f.dom), [keep](Elem x) { return x & keep; });
      });
  return out;
}

}  // namespace doctrina
