#include "doctrina/doctrine.hpp"

#include "doctrina/error.hpp"

namespace doctrina {

LambdaDoctrine::LambdaDoctrine(std::string name, CategoryRef base, FiberFn fiber, ReindexFn reindex)
    : name_(std::move(name)), base_(std::move(base)), fiber_(std::move(fiber)), reindex_(std::move(reindex)) {}

PosetRef LambdaDoctrine::fiber(Obj a) const {
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(a); it != cache_.end()) return it->second;
  }
  // built outside the lock; fiber callbacks may ask for other fibers
  PosetRef p = fiber_(a);
  std::lock_guard lock(mu_);
  return cache_.emplace(a, std::move(p)).first->second;
}

DoctrineRef make_doctrine(std::string name, CategoryRef base, LambdaDoctrine::FiberFn fiber,
                          LambdaDoctrine::ReindexFn reindex) {
  return std::make_shared<LambdaDoctrine>(std::move(name), std::move(base), std::move(fiber),
                                          std::move(reindex));
}

DoctrineRef trivial_doctrine(CategoryRef base) {
  std::vector<std::pair<std::string, std::string>> refl{{"*", "*"}};
  PosetRef point = validate_poset({"*"}, refl);
  return make_doctrine(
      "1", std::move(base), [point](Obj) { return point; },
      [point](const Arrow&) { return MonotoneMap(point, point, [](Elem) { return Elem{0}; }); });
}

DoctrineRef table_doctrine(std::string name, std::shared_ptr<const TableCategory> base,
                           std::vector<PosetRef> fibers,
                           std::map<std::uint32_t, std::vector<Elem>> reindex) {
  const auto& C = *base;
  if (fibers.size() != C.object_count())
    fail(Errc::UnresolvedReference, "expected one fiber per object of the base");
  for (std::uint32_t i = 0; i < C.arrow_count(); ++i) {
    auto it = reindex.find(i);
    const auto& info = C.info(i);
    if (it == reindex.end()) continue;
    if (it->second.size() != fibers[info.cod]->size())
      fail(Errc::UnresolvedReference, "reindexing table for " + info.name + " has the wrong length");
    for (Elem e : it->second)
      if (!fibers[info.dom]->contains(e))
        fail(Errc::UnresolvedReference, "reindexing " + info.name + " leaves fiber " + C.object_label(info.dom));
  }
  for (Obj a = 0; a < C.object_count(); ++a) {
    auto id = C.identity(a).rep[0];
    if (!reindex.count(id)) {
      std::vector<Elem> t(fibers[a]->size());
      for (std::size_t k = 0; k < t.size(); ++k) t[k] = fibers[a]->at(k);
      reindex.emplace(id, std::move(t));
    }
  }
  // close under composition: P(g . f) = P(f) P(g)
  for (bool grew = true; grew;) {
    grew = false;
    for (std::uint32_t f = 0; f < C.arrow_count(); ++f) {
      auto tf = reindex.find(f);
      if (tf == reindex.end()) continue;
      for (std::uint32_t g = 0; g < C.arrow_count(); ++g) {
        if (C.info(g).dom != C.info(f).cod) continue;
        auto tg = reindex.find(g);
        if (tg == reindex.end()) continue;
        auto h = C.compose(C.arrow(g), C.arrow(f)).rep[0];
        if (reindex.count(h)) continue;
        const auto& mid = *fibers[C.info(f).cod];
        std::vector<Elem> th(tg->second.size());
        for (std::size_t k = 0; k < th.size(); ++k) th[k] = tf->second[*mid.index_of(tg->second[k])];
        reindex.emplace(h, std::move(th));
        grew = true;
        tf = reindex.find(f);
      }
    }
  }
  for (std::uint32_t i = 0; i < C.arrow_count(); ++i)
    if (!reindex.count(i)) fail(Errc::UnresolvedReference, "no reindexing for arrow " + C.info(i).name);

  auto tables = std::make_shared<const std::map<std::uint32_t, std::vector<Elem>>>(std::move(reindex));
  auto fib = std::make_shared<const std::vector<PosetRef>>(std::move(fibers));
  return make_doctrine(
      std::move(name), base, [fib](Obj a) { return fib->at(a); },
      [fib, tables](const Arrow& f) {
        const auto& t = tables->at(f.rep.at(0));
        PosetRef src = fib->at(f.cod);
        return MonotoneMap(src, fib->at(f.dom), [&t, src, tables](Elem e) { return t[*src->index_of(e)]; });
      });
}

HomTable::HomTable(const Category& c, std::vector<Obj> objects, std::size_t cap)
    : objects_(std::move(objects)) {
  for (Obj a : objects_)
    for (Obj b : objects_) {
      auto h = c.hom(a, b, cap);
      if (!h) truncated_ = true;
      homs_.emplace(std::make_pair(a, b), std::move(h));
    }
}

const std::optional<std::vector<Arrow>>& HomTable::operator()(Obj a, Obj b) const {
  return homs_.at({a, b});
}

std::vector<Arrow> HomTable::arrows() const {
  std::vector<Arrow> out;
  for (const auto& [_, h] : homs_)
    if (h) out.insert(out.end(), h->begin(), h->end());
  return out;
}

std::string probe_list(const Category& c) {
  std::string out;
  for (Obj a : c.objects()) {
    if (!out.empty()) out += ',';
    out += c.object_label(a);
  }
  return "{" + out + "}";
}

void validate_doctrine(const Doctrine& d, const Limits& limits, Report& report) {
  const Category& C = *d.base();
  HomTable homs(C, C.objects(), limits.hom_cap);
  Budget budget(limits.check_budget);
  std::vector<std::string> big;

  auto enumerable = [&](Obj a) { return d.fiber(a)->size() <= limits.fiber_cap; };
  for (Obj a : homs.objects()) {
    if (!enumerable(a)) {
      big.push_back(C.object_label(a));
      continue;
    }
    auto m = d.reindex(C.identity(a));
    if (auto e = first_difference(m, identity_map(d.fiber(a))))
      fail(Errc::ReindexIdentityViolation,
           "P(id_" + C.object_label(a) + ") moves " + d.fiber(a)->label(*e));
  }

  const auto arrows = homs.arrows();
  for (const Arrow& f : arrows) {
    if (!enumerable(f.cod)) continue;
    auto m = d.reindex(f);
    if (m.source()->size() != d.fiber(f.cod)->size() || m.target()->size() != d.fiber(f.dom)->size())
      fail(Errc::ReindexCompositionViolation, "P(" + C.arrow_label(f) + ") has the wrong fibers");
    if (!budget.spend(m.source()->size())) break;
    if (auto bad = monotonicity_violation(retarget(m, d.fiber(f.cod), d.fiber(f.dom))))
      fail(Errc::NotMonotone, "P(" + C.arrow_label(f) + ") at " + d.fiber(f.cod)->label(bad->first) + " <= " +
                                  d.fiber(f.cod)->label(bad->second));
  }

  bool composites_done = !budget.exhausted();
  for (const Arrow& f : arrows) {
    if (!composites_done) break;
    for (Obj c : homs.objects()) {
      const auto& hg = homs(f.cod, c);
      if (!hg || !enumerable(c)) continue;
      const auto pf = d.reindex(f);
      for (const Arrow& g : *hg) {
        const PosetRef& fc = d.fiber(c);
        if (!budget.spend(fc->size())) {
          composites_done = false;
          break;
        }
        const auto pgf = d.reindex(C.compose(g, f));
        const auto pg = d.reindex(g);
        for (std::size_t i = 0, n = fc->size(); i < n; ++i) {
          Elem e = fc->at(i);
          if (pgf(e) != pf(pg(e)))
            fail(Errc::ReindexCompositionViolation, "P(" + C.arrow_label(g) + " . " + C.arrow_label(f) +
                                                        ") != P(" + C.arrow_label(f) + ") P(" +
                                                        C.arrow_label(g) + ") at " + fc->label(e));
        }
      }
      if (!composites_done) break;
    }
  }

  if (C.lazy()) report.fact("probes", probe_list(C));
  report.pass("doctrine: reindex identities", big.empty() ? "" : "fibers over the fiber cap skipped");
  if (homs.truncated())
    report.skip("doctrine: reindex composites", "some hom-sets exceed the hom cap");
  else if (!composites_done)
    report.skip("doctrine: reindex composites", "check budget spent");
  else
    report.pass("doctrine: reindex composites");
}

}  // namespace doctrina
