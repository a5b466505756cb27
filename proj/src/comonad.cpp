#include "doctrina/comonad.hpp"

#include <algorithm>

#include "doctrina/error.hpp"

namespace doctrina {

namespace {

std::string lbl(const Category& c, Obj a) { return c.object_label(a); }

// Runs a base-level validator and reports its failures under `code`.
template <class Body>
void as(Errc code, std::string_view prefix, Body&& body) {
  try {
    body();
  } catch (const Error& e) {
    if (e.code() == Errc::FunctorLawViolation || e.code() == Errc::NaturalitySquareViolation ||
        e.code() == Errc::CompositionUndefined)
      fail(code, std::string(prefix) + e.witness());
    throw;
  }
}

}  // namespace

Comonad identity_comonad(DoctrineRef d) {
  Comonad k;
  const CategoryRef c = d->base();
  k.doctrine = d;
  k.functor = identity_functor(c);
  k.k = [d](Obj a) { return identity_map(d->fiber(a)); };
  auto id = [c](Obj a) { return c->identity(a); };
  k.gamma = NatTransf{k.functor, compose(k.functor, k.functor), id};
  k.epsilon = NatTransf{k.functor, identity_functor(c), id};
  return k;
}

void validate_comonad(const Comonad& km, const Limits& limits, Report& report) {
  const Category& C = km.base();
  const Doctrine& P = *km.doctrine;
  const Functor& K = km.functor;

  Report sub;
  as(Errc::ComonadLawViolation, "K: ", [&] { validate_functor(K, false, limits, sub); });
  report.merge(sub, "comonad: K ");
  sub = Report{};
  as(Errc::ComonadLawViolation, "gamma: ", [&] { validate_nat_transf(km.gamma, limits, sub); });
  report.merge(sub, "comonad: gamma ");
  sub = Report{};
  as(Errc::ComonadLawViolation, "epsilon: ", [&] { validate_nat_transf(km.epsilon, limits, sub); });
  report.merge(sub, "comonad: epsilon ");

  const auto objs = C.objects();
  for (Obj a : objs) {
    const Obj ka = K(a);
    const Arrow g = km.gamma(a);
    const Arrow id = C.identity(ka);
    if (C.compose(km.epsilon(ka), g) != id)
      fail(Errc::ComonadLawViolation, "epsilon_KA . gamma_A != id at " + lbl(C, a));
    if (C.compose(K(km.epsilon(a)), g) != id)
      fail(Errc::ComonadLawViolation, "K(epsilon_A) . gamma_A != id at " + lbl(C, a));
    if (C.compose(km.gamma(ka), g) != C.compose(K(g), g))
      fail(Errc::ComonadLawViolation, "gamma_KA . gamma_A != K(gamma_A) . gamma_A at " + lbl(C, a));
  }
  report.pass("comonad: counit and coassociativity");

  // k is natural: k_A P(h) = P(Kh) k_B
  HomTable homs(C, objs, limits.hom_cap);
  Budget budget(limits.check_budget);
  bool skipped = homs.truncated();
  for (Obj a : objs) {
    const auto pa = P.fiber(a);
    if (pa->size() > limits.fiber_cap) {
      skipped = true;
      continue;
    }
    if (auto bad = monotonicity_violation(retarget(km.k(a), pa, P.fiber(K(a)))))
      fail(Errc::ComonadLawViolation, "k_" + lbl(C, a) + " is not monotone at " + pa->label(bad->first));
  }
  for (const Arrow& h : homs.arrows()) {
    const auto pb = P.fiber(h.cod);
    if (pb->size() > limits.fiber_cap) continue;
    if (!budget.spend(pb->size())) {
      skipped = true;
      break;
    }
    const auto lhs = compose(km.k(h.dom), P.reindex(h));
    const auto rhs = compose(P.reindex(K(h)), km.k(h.cod));
    for (Elem x : pb->elements())
      if (lhs(x) != rhs(x))
        fail(Errc::ComonadLawViolation, "k is not natural at " + C.arrow_label(h) + " on " + pb->label(x));
  }
  if (skipped)
    report.skip("comonad: k natural", "hom cap, fiber cap or check budget reached");
  else
    report.pass("comonad: k natural");

  bool gamma_eq = true, epsilon_eq = true;
  skipped = false;
  for (Obj a : objs) {
    const auto pa = P.fiber(a);
    if (pa->size() > limits.fiber_cap) {
      skipped = true;
      continue;
    }
    const Obj ka = K(a);
    const auto pka = P.fiber(ka);
    const auto ka_map = km.k(a);
    const auto kka = km.k(ka);
    const auto pg = P.reindex(km.gamma(a));
    const auto pe = P.reindex(km.epsilon(a));
    for (Elem x : pa->elements()) {
      const Elem kx = ka_map(x);
      const Elem up = pg(kka(kx));
      if (!pka->leq(kx, up))
        fail(Errc::TwoArrowInequalityViolation,
             "k_A <= P(gamma_A) k_KA k_A fails at " + lbl(C, a) + ", " + pa->label(x));
      const Elem back = pe(x);
      if (!pka->leq(kx, back))
        fail(Errc::TwoArrowInequalityViolation, "k_A <= P(epsilon_A) fails at " + lbl(C, a) + ", " + pa->label(x));
      gamma_eq = gamma_eq && kx == up;
      epsilon_eq = epsilon_eq && kx == back;
    }
  }
  if (skipped)
    report.skip("comonad: 2-arrow inequalities", "fibers over the fiber cap skipped");
  else
    report.pass("comonad: 2-arrow inequalities");
  report.fact("comonad.gamma_equality", gamma_eq ? "true" : "false");
  report.fact("comonad.epsilon_equality", epsilon_eq ? "true" : "false");
}

// ---- Kleisli category ----

KleisliCategory::KleisliCategory(Comonad k) : k_(std::move(k)), base_(k_.doctrine->base()) {}

Arrow KleisliCategory::underlying(const Arrow& g) const { return Arrow{k_.functor(g.dom), g.cod, g.rep}; }

Arrow KleisliCategory::lift(Obj a, const Arrow& f) const {
  if (f.dom != k_.functor(a))
    fail(Errc::CompositionUndefined, "arrow out of " + base_->object_label(f.dom) + " is not KA for A = " +
                                         base_->object_label(a));
  return Arrow{a, f.cod, f.rep};
}

std::string KleisliCategory::arrow_label(const Arrow& f) const { return base_->arrow_label(underlying(f)); }

Arrow KleisliCategory::identity(Obj a) const { return lift(a, k_.epsilon(a)); }

Arrow KleisliCategory::cofree_image(const Arrow& g) const {
  return base_->compose(k_.functor(underlying(g)), k_.gamma(g.dom));
}

Arrow KleisliCategory::compose(const Arrow& h, const Arrow& g) const {
  if (g.cod != h.dom) fail(Errc::CompositionUndefined, arrow_label(h) + " after " + arrow_label(g));
  return lift(g.dom, base_->compose(underlying(h), cofree_image(g)));
}

std::optional<std::vector<Arrow>> KleisliCategory::hom(Obj a, Obj b, std::size_t cap) const {
  auto h = base_->hom(k_.functor(a), b, cap);
  if (!h) return std::nullopt;
  std::vector<Arrow> out;
  out.reserve(h->size());
  for (const Arrow& f : *h) out.push_back(lift(a, f));
  return out;
}

Arrow KleisliCategory::free(const Arrow& f) const { return lift(f.dom, base_->compose(f, k_.epsilon(f.dom))); }

Arrow KleisliCategory::bang(Obj a) const { return free(base_->bang(a)); }
Arrow KleisliCategory::pr1(Obj a, Obj b) const { return free(base_->pr1(a, b)); }
Arrow KleisliCategory::pr2(Obj a, Obj b) const { return free(base_->pr2(a, b)); }

Arrow KleisliCategory::pair(const Arrow& f, const Arrow& g) const {
  if (f.dom != g.dom) fail(Errc::CompositionUndefined, "pairing arrows with different domains");
  return lift(f.dom, base_->pair(underlying(f), underlying(g)));
}

Arrow kleisli_unit(const KleisliCategory& ck, Obj a) {
  const Comonad& k = ck.comonad();
  return ck.lift(a, k.base().identity(k.functor(a)));
}

void validate_oplax(const Comonad& k, const OplaxMorphism& om, const Limits& limits, Report& report) {
  const DoctrineMorphism& m = om.morphism;
  const Category& C = k.base();
  const Category& D = *m.target->base();
  const Doctrine& P = *k.doctrine;
  const Doctrine& R = *m.target;
  const Functor& F = m.functor;
  const Functor& K = k.functor;

  check_naturality(m, limits, report);

  const auto objs = C.objects();
  HomTable homs(C, objs, limits.hom_cap);
  for (const Arrow& h : homs.arrows())
    if (D.compose(F(K(h)), om.j(h.dom)) != D.compose(om.j(h.cod), F(h)))
      fail(Errc::NaturalityViolation, "j is not natural at " + C.arrow_label(h));
  report.expect(!homs.truncated(), "oplax: j natural", "some hom-sets exceed the hom cap");

  for (Obj a : objs) {
    const Arrow j = om.j(a);
    if (D.compose(F(k.epsilon(a)), j) != D.identity(F(a)))
      fail(Errc::CoherenceViolation, "F(epsilon_A) . j_A != id at " + lbl(C, a));
    if (D.compose(F(k.gamma(a)), j) != D.compose(om.j(K(a)), j))
      fail(Errc::CoherenceViolation, "F(gamma_A) . j_A != j_KA . j_A at " + lbl(C, a));
  }
  report.pass("oplax: coherence");

  Budget budget(limits.check_budget);
  bool skipped = false;
  for (Obj a : objs) {
    const auto pa = P.fiber(a);
    if (pa->size() > limits.fiber_cap || !budget.spend(pa->size())) {
      skipped = true;
      continue;
    }
    const Obj ka = K(a);
    std::optional<MonotoneMap> mka;
    try {
      mka = m(ka);
    } catch (const Error& e) {
      // the fiber over KA may be too large to build even when A's is not
      if (e.code() != Errc::EnumerationBudgetExceeded && e.code() != Errc::ProbeTooLarge) throw;
      skipped = true;
      continue;
    }
    const auto fa = m(a);
    const auto rhs = compose(R.reindex(om.j(a)), compose(*mka, k.k(a)));
    const auto target = R.fiber(F(a));
    for (Elem x : pa->elements())
      if (!target->leq(fa(x), rhs(x)))
        fail(Errc::LaxInequalityViolation, "f_A <= R(j_A) f_KA k_A fails at (" + lbl(C, a) + ", " +
                                               pa->label(x) + ")");
  }
  if (skipped)
    report.skip("oplax: inequality", "fibers over the fiber cap or budget skipped");
  else
    report.pass("oplax: inequality");
}

KleisliBundle build_kleisli_doctrine(const Comonad& k, const Limits& limits, Report& report) {
  KleisliBundle kb;
  kb.comonad = k;
  auto ck = std::make_shared<const KleisliCategory>(k);
  kb.category = ck;
  const DoctrineRef P = k.doctrine;
  const std::size_t cap = limits.fiber_cap;

  Report sub;
  validate_category(*ck, limits, sub);
  report.merge(sub, "kleisli: ");

  // reindexing restricts to the fibers of the doctrine being defined
  auto self = std::make_shared<std::weak_ptr<const Doctrine>>();
  kb.doctrine = make_doctrine(
      "(" + P->name() + ")_K", ck,
      [P, k, cap](Obj a) -> PosetRef {
        const Obj ka = k.functor(a);
        const auto whole = P->fiber(ka);
        if (whole->size() > cap)
          fail(Errc::EnumerationBudgetExceeded,
               "P(K" + k.base().object_label(a) + ") has " + std::to_string(whole->size()) + " elements");
        const auto close = compose(P->reindex(k.gamma(a)), k.k(ka));
        std::vector<Elem> keep;
        for (Elem x : whole->elements())
          if (whole->leq(x, close(x))) keep.push_back(x);
        return std::make_shared<SubPoset>(whole, std::move(keep));
      },
      [P, ck, self](const Arrow& g) {
        const auto d = self->lock();
        return retarget(P->reindex(ck->cofree_image(g)), d->fiber(g.cod), d->fiber(g.dom));
      });
  *self = kb.doctrine;
  sub = Report{};
  validate_doctrine(*kb.doctrine, limits, sub);
  report.merge(sub, "kleisli: ");

  // universal arrow (F_K, k) with j = u
  DoctrineMorphism& u = kb.universal.morphism;
  u.source = P;
  u.target = kb.doctrine;
  u.functor = Functor{P->base(), ck, [](Obj a) { return a; }, [ck](const Arrow& f) { return ck->free(f); }};
  u.component = [P, k, pk = kb.doctrine](Obj a) { return retarget(k.k(a), P->fiber(a), pk->fiber(a)); };
  kb.universal.j = [ck](Obj a) { return kleisli_unit(*ck, a); };
  sub = Report{};
  validate_oplax(k, kb.universal, limits, sub);
  report.merge(sub, "kleisli: universal ");

  // squiggly arrows against morphisms of free coalgebras
  const Category& C = k.base();
  const Functor& K = k.functor;
  const auto objs = C.objects();
  bool skipped = false;
  for (Obj a : objs)
    for (Obj b : objs) {
      const auto sq = ck->hom(a, b, limits.hom_cap);
      const auto co = C.hom(K(a), K(b), limits.hom_cap);
      if (!sq || !co) {
        skipped = true;
        continue;
      }
      for (const Arrow& g : *sq) {
        const Arrow f = ck->cofree_image(g);
        if (C.compose(K(f), k.gamma(a)) != C.compose(k.gamma(b), f))
          fail(Errc::CoherenceViolation, "K(g) gamma_A is not a coalgebra morphism for g = " + ck->arrow_label(g));
        if (C.compose(k.epsilon(b), f) != ck->underlying(g))
          fail(Errc::CoherenceViolation, "epsilon_B K(g) gamma_A != g for g = " + ck->arrow_label(g));
      }
      for (const Arrow& f : *co) {
        if (C.compose(K(f), k.gamma(a)) != C.compose(k.gamma(b), f)) continue;
        if (ck->cofree_image(ck->lift(a, C.compose(k.epsilon(b), f))) != f)
          fail(Errc::CoherenceViolation, "K(epsilon_B f) gamma_A != f for f = " + C.arrow_label(f));
      }
    }
  if (skipped)
    report.skip("kleisli: squiggly presentation", "some hom-sets exceed the hom cap");
  else
    report.pass("kleisli: squiggly presentation");
  return kb;
}

// ---- Eilenberg-Moore ----

EMCategory::EMCategory(CategoryRef base, Functor k, std::vector<Coalgebra> coalgebras, std::size_t hom_cap)
    : base_(std::move(base)), k_(std::move(k)), coalgebras_(std::move(coalgebras)), hom_cap_(hom_cap) {}

std::vector<Obj> EMCategory::objects() const {
  std::vector<Obj> out(coalgebras_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<Obj>(i);
  return out;
}

std::string EMCategory::object_label(Obj a) const {
  const auto& c = coalgebra(a);
  return "(" + base_->object_label(c.carrier) + "," + base_->arrow_label(c.structure) + ")";
}

Arrow EMCategory::underlying(const Arrow& f) const {
  return Arrow{coalgebra(f.dom).carrier, coalgebra(f.cod).carrier, f.rep};
}

Arrow EMCategory::identity(Obj a) const { return Arrow{a, a, base_->identity(coalgebra(a).carrier).rep}; }

Arrow EMCategory::compose(const Arrow& g, const Arrow& f) const {
  if (f.cod != g.dom) fail(Errc::CompositionUndefined, "coalgebra morphisms do not compose");
  return Arrow{f.dom, g.cod, base_->compose(underlying(g), underlying(f)).rep};
}

std::optional<std::vector<Arrow>> EMCategory::hom(Obj a, Obj b, std::size_t cap) const {
  const auto& ca = coalgebra(a);
  const auto& cb = coalgebra(b);
  auto h = base_->hom(ca.carrier, cb.carrier, hom_cap_);
  if (!h) return std::nullopt;
  std::vector<Arrow> out;
  for (const Arrow& f : *h)
    if (base_->compose(k_(f), ca.structure) == base_->compose(cb.structure, f)) out.push_back(Arrow{a, b, f.rep});
  if (out.size() > cap) return std::nullopt;
  return out;
}

std::optional<Obj> EMCategory::find(Obj carrier, const Arrow& structure) const {
  for (std::size_t i = 0; i < coalgebras_.size(); ++i)
    if (coalgebras_[i].carrier == carrier && coalgebras_[i].structure == structure) return static_cast<Obj>(i);
  return std::nullopt;
}

EMBundle build_em_doctrine(const Comonad& k, const Limits& limits, Report& report) {
  const CategoryRef base = k.doctrine->base();
  const Category& C = *base;
  if (C.lazy()) fail(Errc::LazyBaseUnsupported, "coalgebras range over every object; base is given by probes");
  std::vector<EMCategory::Coalgebra> coalgebras;
  std::size_t candidates = 0;
  for (Obj a : C.objects()) {
    const auto h = C.hom(a, k.functor(a), limits.em_budget);
    if (!h || (candidates += h->size()) > limits.em_budget)
      fail(Errc::EnumerationBudgetExceeded, "more than " + std::to_string(limits.em_budget) +
                                                " candidate coalgebra structures");
    for (const Arrow& c : *h) {
      if (C.compose(k.epsilon(a), c) != C.identity(a)) continue;
      if (C.compose(k.gamma(a), c) != C.compose(k.functor(c), c)) continue;
      coalgebras.push_back({a, c});
    }
  }
  report.fact("em.candidates", std::to_string(candidates));
  report.fact("em.coalgebras", std::to_string(coalgebras.size()));

  auto em = std::make_shared<const EMCategory>(base, k.functor, std::move(coalgebras), limits.hom_cap);
  const DoctrineRef P = k.doctrine;
  auto fibers = std::make_shared<std::vector<PosetRef>>();
  for (Obj i : em->objects()) {
    const auto& c = em->coalgebra(i);
    const auto whole = P->fiber(c.carrier);
    const auto close = compose(P->reindex(c.structure), k.k(c.carrier));
    std::vector<Elem> keep;
    for (Elem x : whole->elements())
      if (whole->leq(x, close(x))) keep.push_back(x);
    fibers->push_back(std::make_shared<SubPoset>(whole, std::move(keep)));
  }
  EMBundle out;
  out.category = em;
  out.doctrine = make_doctrine(
      P->name() + "^K", em, [fibers](Obj a) { return fibers->at(a); },
      [fibers, P, em](const Arrow& f) {
        return retarget(P->reindex(em->underlying(f)), fibers->at(f.cod), fibers->at(f.dom));
      });
  Report sub;
  validate_category(*em, limits, sub);
  validate_doctrine(*out.doctrine, limits, sub);
  report.merge(sub, "em: ");
  return out;
}

// ---- factorization ----

DoctrineMorphism factorize_oplax_raw(const KleisliBundle& kb, const OplaxMorphism& om) {
  const DoctrineMorphism& m = om.morphism;
  const auto ck = kb.category;
  const auto j = om.j;
  DoctrineMorphism out;
  out.source = kb.doctrine;
  out.target = m.target;
  const Functor F = m.functor;
  const CategoryRef D = m.target->base();
  out.functor = Functor{ck, D, F.on_object, [F, D, ck, j](const Arrow& g) {
                          return D->compose(F(ck->underlying(g)), j(g.dom));
                        }};
  const Functor K = kb.comonad.functor;
  const DoctrineRef R = m.target;
  const DoctrineRef PK = kb.doctrine;
  out.component = [m, R, PK, K, j, F](Obj a) {
    return retarget(compose(R->reindex(j(a)), m(K(a))), PK->fiber(a), R->fiber(F(a)));
  };
  return out;
}

std::string_view uniqueness_mode_name(UniquenessMode m) {
  switch (m) {
    case UniquenessMode::competitors: return "competitors";
    case UniquenessMode::exhaustive: return "exhaustive";
    case UniquenessMode::budget_exceeded: return "budget-exceeded";
  }
  return "?";
}

std::optional<std::string> morphism_difference(const DoctrineMorphism& a, const DoctrineMorphism& b,
                                               const Limits& limits) {
  const Category& S = *a.source->base();
  const auto objs = S.objects();
  for (Obj x : objs)
    if (a.functor(x) != b.functor(x)) return "functors differ on object " + S.object_label(x);
  HomTable homs(S, objs, limits.hom_cap);
  for (const Arrow& f : homs.arrows())
    if (a.functor(f) != b.functor(f)) return "functors differ on arrow " + S.arrow_label(f);
  Budget budget(limits.check_budget);
  for (Obj x : objs) {
    const auto px = a.source->fiber(x);
    if (px->size() > limits.fiber_cap || !budget.spend(px->size())) continue;
    const auto fa = a(x);
    const auto fb = b(x);
    for (Elem e : px->elements())
      if (fa(e) != fb(e)) return "components differ at (" + S.object_label(x) + ", " + px->label(e) + ")";
  }
  return std::nullopt;
}

namespace {

// Product enumeration over per-position candidate lists with a node budget.
// `partial` sees the prefix assigned so far and prunes.
template <class Partial, class Leaf>
bool backtrack(const std::vector<std::vector<Arrow>>& cands, Budget& budget, Partial&& partial, Leaf&& leaf) {
  Family cur(cands.size());
  std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
    if (i == cands.size()) {
      leaf(cur);
      return true;
    }
    for (const Arrow& x : cands[i]) {
      if (!budget.spend()) return false;
      cur[i] = x;
      if (!partial(cur, i)) continue;
      if (!go(i + 1)) return false;
    }
    return true;
  };
  return go(0);
}

}  // namespace

Factorization factorize_oplax(const KleisliBundle& kb, const OplaxMorphism& om,
                              const std::vector<Competitor>& competitors, bool exhaustive, const Limits& limits,
                              Report& report) {
  const auto& ck = *kb.category;
  const DoctrineMorphism& m = om.morphism;
  Factorization out;
  out.morphism = factorize_oplax_raw(kb, om);

  const auto composite = compose(out.morphism, kb.universal.morphism);
  if (auto diff = morphism_difference(composite, m, limits)) fail(Errc::CompositeMismatch, *diff);
  const auto objs = ck.objects();
  for (Obj a : objs)
    if (out.morphism.functor(kleisli_unit(ck, a)) != om.j(a))
      fail(Errc::CompositeMismatch, "F'(u_A) != j_A at " + ck.object_label(a));
  report.pass("factorize: composite equals the oplax morphism");

  auto same_composite = [&](const DoctrineMorphism& g) {
    if (morphism_difference(compose(g, kb.universal.morphism), m, limits)) return false;
    for (Obj a : objs)
      if (g.functor(kleisli_unit(ck, a)) != om.j(a)) return false;
    return true;
  };
  for (const auto& c : competitors) {
    if (!same_composite(c.morphism)) {
      report.pass("factorize: competitor " + c.name, "composite differs, not a factorization");
      continue;
    }
    if (auto diff = morphism_difference(c.morphism, out.morphism, limits))
      fail(Errc::UniquenessCounterexample, c.name + ": " + *diff);
    report.pass("factorize: competitor " + c.name, "equals the factorization");
  }

  if (exhaustive) {
    const Category& C = kb.comonad.base();
    const CategoryRef D = m.target->base();
    const Functor& F = m.functor;
    const Functor& K = kb.comonad.functor;
    std::vector<std::vector<Arrow>> cands;
    bool capped = false;
    for (Obj a : objs) {
      auto h = D->hom(F(a), F(K(a)), limits.hom_cap);
      if (!h) {
        capped = true;
        break;
      }
      // identities of C_K must go to identities: F(epsilon_A) x = id
      std::vector<Arrow> keep;
      for (const Arrow& x : *h)
        if (D->compose(F(kb.comonad.epsilon(a)), x) == D->identity(F(a))) keep.push_back(x);
      cands.push_back(std::move(keep));
    }
    Budget budget(limits.search_budget);
    std::size_t with_j = 0, without_j = 0;
    const DoctrineRef R = m.target;
    const DoctrineRef PK = kb.doctrine;
    const auto ckp = kb.category;
    bool done = !capped && backtrack(
                               cands, budget, [](const Family&, std::size_t) { return true; },
                               [&](const Family& x) {
                                 DoctrineMorphism g;
                                 g.source = PK;
                                 g.target = R;
                                 auto pos = [objs](Obj a) {
                                   return static_cast<std::size_t>(std::find(objs.begin(), objs.end(), a) -
                                                                   objs.begin());
                                 };
                                 g.functor = Functor{ckp, D, F.on_object, [=](const Arrow& f) {
                                                       return D->compose(F(ckp->underlying(f)), x[pos(f.dom)]);
                                                     }};
                                 g.component = [=](Obj a) {
                                   return retarget(compose(R->reindex(x[pos(a)]), m(K(a))), PK->fiber(a),
                                                   R->fiber(F(a)));
                                 };
                                 if (morphism_difference(compose(g, kb.universal.morphism), m, limits)) return;
                                 try {
                                   Report scratch;
                                   validate_functor(g.functor, false, limits, scratch);
                                 } catch (const Error&) {
                                   return;
                                 }
                                 ++without_j;
                                 bool j_ok = true;
                                 for (std::size_t i = 0; i < objs.size(); ++i) j_ok = j_ok && x[i] == om.j(objs[i]);
                                 if (!j_ok) return;
                                 ++with_j;
                                 if (auto diff = morphism_difference(g, out.morphism, limits))
                                   fail(Errc::UniquenessCounterexample, "exhaustive search: " + *diff);
                               });
    (void)C;
    if (done) {
      out.mode = UniquenessMode::exhaustive;
      out.candidates = with_j;
      if (with_j != 1)
        fail(Errc::UniquenessCounterexample, std::to_string(with_j) + " 1-cells have the same composite");
      report.pass("factorize: exhaustive uniqueness");
      report.fact("factorize.candidates", std::to_string(with_j));
      report.fact("factorize.candidates_ignoring_j", std::to_string(without_j));
    } else {
      out.mode = UniquenessMode::budget_exceeded;
      report.skip("factorize: exhaustive uniqueness", "hom cap or search budget reached");
    }
  }
  report.fact("factorize.mode", std::string(uniqueness_mode_name(out.mode)));
  return out;
}

// ---- 2-cells ----

std::vector<Family> enumerate_two_cells(const DoctrineMorphism& m, const DoctrineMorphism& n,
                                        const std::function<bool(const Family&)>& extra, const Limits& limits,
                                        bool* exhausted) {
  const Category& S = *m.source->base();
  const Category& D = *m.target->base();
  const Doctrine& P = *m.source;
  const Doctrine& R = *m.target;
  const auto objs = S.objects();
  *exhausted = false;

  std::vector<std::vector<Arrow>> cands;
  for (Obj a : objs) {
    const auto h = D.hom(m.functor(a), n.functor(a), limits.hom_cap);
    const auto pa = P.fiber(a);
    if (!h || pa->size() > limits.fiber_cap) {
      *exhausted = true;
      return {};
    }
    const auto fa = m(a);
    const auto ga = n(a);
    const auto target = R.fiber(m.functor(a));
    std::vector<Arrow> keep;
    for (const Arrow& t : *h) {
      const auto rt = R.reindex(t);
      bool ok = true;
      for (Elem x : pa->elements())
        if (!(ok = target->leq(fa(x), rt(ga(x))))) break;
      if (ok) keep.push_back(t);
    }
    cands.push_back(std::move(keep));
  }
  HomTable homs(S, objs, limits.hom_cap);
  if (homs.truncated()) {
    *exhausted = true;
    return {};
  }
  auto pos = [&](Obj a) { return static_cast<std::size_t>(std::find(objs.begin(), objs.end(), a) - objs.begin()); };
  Budget budget(limits.search_budget);
  std::vector<Family> out;
  const bool done = backtrack(
      cands, budget,
      [&](const Family& cur, std::size_t i) {
        // squares whose endpoints are both assigned, one of them at i
        for (std::size_t k = 0; k <= i; ++k)
          for (const auto* h : {&homs(objs[i], objs[k]), &homs(objs[k], objs[i])})
            for (const Arrow& f : **h)
              if (D.compose(n.functor(f), cur[pos(f.dom)]) != D.compose(cur[pos(f.cod)], m.functor(f)))
                return false;
        return true;
      },
      [&](const Family& cur) {
        if (!extra || extra(cur)) out.push_back(cur);
      });
  if (!done) *exhausted = true;
  return out;
}

TwoCellIsoReport two_cell_iso_check(const KleisliBundle& kb, const OplaxMorphism& m, const OplaxMorphism& n,
                                    const Limits& limits, Report& report) {
  const Category& C = kb.comonad.base();
  if (C.lazy()) fail(Errc::LazyBaseUnsupported, "2-cells are enumerated over every object");
  const Category& D = *m.morphism.target->base();
  const auto objs = C.objects();
  const Functor& K = kb.comonad.functor;
  auto pos = [&](Obj a) { return static_cast<std::size_t>(std::find(objs.begin(), objs.end(), a) - objs.begin()); };

  bool ex1 = false, ex2 = false;
  // condition 3: j^N_A theta_A = theta_KA j^M_A
  const auto composite = enumerate_two_cells(
      m.morphism, n.morphism,
      [&](const Family& t) {
        for (Obj a : objs)
          if (D.compose(n.j(a), t[pos(a)]) != D.compose(t[pos(K(a))], m.j(a))) return false;
        return true;
      },
      limits, &ex1);
  const auto mf = factorize_oplax_raw(kb, m);
  const auto nf = factorize_oplax_raw(kb, n);
  const auto factorized = enumerate_two_cells(mf, nf, nullptr, limits, &ex2);
  if (ex1 || ex2) fail(Errc::EnumerationBudgetExceeded, "2-cell search exceeded the hom cap or search budget");

  TwoCellIsoReport out;
  out.composite_cells = composite.size();
  out.factorized_cells = factorized.size();
  out.bijection = composite == factorized;
  report.fact("two_cells.composite", std::to_string(out.composite_cells));
  report.fact("two_cells.factorized", std::to_string(out.factorized_cells));
  report.expect(out.bijection, "two-cells: theta -> theta' is a bijection",
                "the two hom-sets differ (" + std::to_string(out.composite_cells) + " vs " +
                    std::to_string(out.factorized_cells) + ")");
  return out;
}

}  // namespace doctrina
