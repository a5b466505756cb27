#include "doctrina/reader.hpp"

#include <algorithm>

#include "doctrina/error.hpp"

namespace doctrina {

namespace {

std::string lbl(const Category& c, Obj a) { return c.object_label(a); }

Elem phi_or_top(const Doctrine& p, Obj x, const std::optional<Elem>& phi) {
  if (phi) return *phi;
  const auto t = p.fiber(x)->top();
  if (!t) fail(Errc::PrerequisiteMissing, "P(" + lbl(*p.base(), x) + ") has no top");
  return *t;
}

std::vector<Elem> sorted_elements(const Poset& p) {
  auto v = p.elements();
  std::sort(v.begin(), v.end());
  return v;
}

std::size_t position(const std::vector<Obj>& objs, Obj a) {
  return static_cast<std::size_t>(std::find(objs.begin(), objs.end(), a) - objs.begin());
}

}  // namespace

Comonad build_reader_comonad(DoctrineRef p, Obj x, std::optional<Elem> phi, const Limits& limits) {
  const CategoryRef cat = p->base();
  if (!cat->has_products()) fail(Errc::PrerequisiteMissing, "the base has no chosen products");
  const auto px = p->fiber(x);
  if (phi && !px->contains(*phi)) fail(Errc::UnresolvedReference, "phi is not an element of P(" + lbl(*cat, x) + ")");
  if (phi && px->top() == phi) phi.reset();
  if (phi) {
    const auto r = detect_structure(*p, Kind::primary, limits);
    if (r.outcome != Outcome::pass)
      fail(Errc::PrimaryRequired, "an axiom other than top needs meets: " +
                                      (r.witness.empty() ? std::string("primary undecided") : r.witness));
  }

  Comonad k;
  k.doctrine = p;
  k.functor = Functor{cat, cat, [cat, x](Obj a) { return cat->product(x, a); },
                      [cat, x](const Arrow& f) { return cross(*cat, cat->identity(x), f); }};
  if (phi) {
    k.k = [p, cat, x, phi = *phi](Obj a) {
      const auto fx = p->fiber(cat->product(x, a));
      const Elem w = p->reindex(cat->pr1(x, a))(phi);
      const auto weaken = p->reindex(cat->pr2(x, a));
      return MonotoneMap(p->fiber(a), fx, [fx, w, weaken](Elem e) { return *fx->meet(w, weaken(e)); });
    };
  } else {
    k.k = [p, cat, x](Obj a) { return p->reindex(cat->pr2(x, a)); };
  }
  k.gamma = NatTransf{k.functor, compose(k.functor, k.functor),
                      [cat, x](Obj a) { return cat->pair(cat->pr1(x, a), cat->identity(cat->product(x, a))); }};
  k.epsilon = NatTransf{k.functor, identity_functor(cat), [cat, x](Obj a) { return cat->pr2(x, a); }};
  return k;
}

Elem Extension::top(Obj a) const {
  const Category& C = *source->base();
  if (phi) return source->reindex(C.pr1(x, a))(*phi);
  const auto t = source->fiber(C.product(x, a))->top();
  if (!t) fail(Errc::PrerequisiteMissing, "P(X x " + lbl(C, a) + ") has no top");
  return *t;
}

Extension extend(DoctrineRef p, Obj x, std::optional<Elem> phi, const Limits& limits, Report& report) {
  const CategoryRef cat = p->base();
  Extension e;
  e.source = p;
  e.x = x;
  e.phi = phi;
  e.comonad = build_reader_comonad(p, x, phi, limits);
  // build_reader_comonad drops an axiom equal to top
  const bool axiom = phi && p->fiber(x)->top() != phi;
  if (!axiom) e.phi.reset();
  report.fact("extension.primary_required", axiom ? "true" : "false");

  Report sub;
  validate_comonad(e.comonad, limits, sub);
  report.merge(sub, "extension: ");
  sub = Report{};
  e.bundle = build_kleisli_doctrine(e.comonad, limits, sub);
  report.merge(sub, "extension: ");
  e.generic = e.bundle.doctrine;

  const auto ck = e.bundle.category;
  const std::optional<Elem> ax = e.phi;
  auto self = std::make_shared<std::weak_ptr<const Doctrine>>();
  std::string name = p->name() + "_(" + lbl(*cat, x);
  if (ax) name += "," + p->fiber(x)->label(*ax);
  name += ")";
  auto d = make_doctrine(
      name, ck,
      [p, cat, x, ax](Obj a) -> PosetRef {
        const auto whole = p->fiber(cat->product(x, a));
        if (!ax) return whole;
        return whole->below(p->reindex(cat->pr1(x, a))(*ax));
      },
      [p, ck, self](const Arrow& g) {
        const auto me = self->lock();
        return retarget(p->reindex(ck->cofree_image(g)), me->fiber(g.cod), me->fiber(g.dom));
      });
  *self = d;
  e.bundle.doctrine = d;
  e.bundle.universal.morphism.target = d;
  e.bundle.universal.morphism.component = [p, k = e.comonad.k, d](Obj a) {
    return retarget(k(a), p->fiber(a), d->fiber(a));
  };
  e.constant = ck->lift(cat->terminal(), cat->pr1(x, cat->terminal()));

  if (auto diff = extension_fiber_difference(e, limits)) fail(Errc::InternalInvariantViolation, *diff);
  report.pass("extension: fibers are the principal downsets");

  sub = Report{};
  validate_doctrine(*d, limits, sub);
  std::set<Kind> keep;
  if (axiom || detect_structure(*p, Kind::primary, limits).outcome == Outcome::pass) keep.insert(Kind::primary);
  validate_morphism(e.morphism(), keep, limits, sub);
  report.merge(sub, "extension: ");
  return e;
}

Extension add_constant(DoctrineRef p, Obj x, const Limits& limits, Report& report) {
  return extend(std::move(p), x, std::nullopt, limits, report);
}

Extension add_axiom(DoctrineRef p, Elem phi, const Limits& limits, Report& report) {
  const Obj t = p->base()->terminal();
  return extend(std::move(p), t, phi, limits, report);
}

std::optional<std::string> extension_fiber_difference(const Extension& e, const Limits& limits) {
  const Category& C = *e.source->base();
  for (Obj a : C.objects()) {
    const auto gen = e.generic->fiber(a);
    const auto dw = e.doctrine()->fiber(a);
    if (dw->size() > limits.fiber_cap) continue;
    if (sorted_elements(*gen) != sorted_elements(*dw))
      return "extended fiber over " + lbl(C, a) + " is not the downset of P(pr1)(phi)";
    const Elem top = e.top(a);
    if (dw->top() != top) return "top over " + lbl(C, a) + " is not P(pr1)(phi)";
  }
  return std::nullopt;
}

DownsetQuotient quotient_presentation(const Extension& e, Obj a) {
  const Category& C = *e.source->base();
  return downset_and_quotient(e.source->fiber(C.product(e.x, a)), e.top(a));
}

NewConstant interpret_new_constant(const Extension& e) {
  const Category& C = *e.source->base();
  const Elem phi = phi_or_top(*e.source, e.x, e.phi);
  const Elem v = e.doctrine()->reindex(e.constant)(e.morphism()(e.x)(phi));
  const Elem top = e.top(C.terminal());
  if (v != top)
    fail(Errc::InternalInvariantViolation,
         "P(id_X)(f_X(phi)) = " + e.doctrine()->fiber(C.terminal())->label(v) + " is not the top");
  return {v, true};
}

// ---- transport ----

const TransportRow* TransportMatrix::find(Kind k) const {
  for (const auto& r : rows)
    if (r.kind == k) return &r;
  return nullptr;
}

void TransportMatrix::append_to(Report& r) const {
  for (const auto& row : rows) {
    const std::string k(kind_name(row.kind));
    r.add({"transport: " + k + " witness", row.witness, row.detail});
    r.add({"transport: " + k + " detected", row.detected, {}});
    if (row.preservation_claimed)
      r.add({"transport: " + k + " preserved", row.preserved, {}});
    else
      r.skip("transport: " + k + " preserved", "no preservation claim");
    for (const auto& [flag, v] : row.flags) r.fact("transport." + k + "." + flag, v ? "true" : "false");
  }
}

namespace {

struct Transport {
  Transport(const Extension& ext, const Limits& lim)
      : e(ext), C(*ext.source->base()), P(*ext.source), ctxP(P, lim), ctxE(*ext.doctrine(), lim), budget(lim.check_budget) {}

  const Extension& e;
  const Category& C;
  const Doctrine& P;
  StructureContext ctxP;
  StructureContext ctxE;
  Budget budget;
  bool skipped = false;

  const std::vector<Obj>& objects() const { return ctxE.homs().objects(); }

  // the extended fiber over a and the fiber of P it sits in
  bool frame(Obj a, const FiberOps** ext, const FiberOps** whole) {
    *ext = &ctxE.ops(a);
    *whole = &ctxP.ops(C.product(e.x, a));
    if (!(*ext)->enumerable() || !(*ext)->decided() || !(*whole)->decided()) {
      skipped = true;
      return false;
    }
    const std::size_t n = (*ext)->elements().size();
    if (!budget.spend(n * n)) {
      skipped = true;
      return false;
    }
    return true;
  }

  std::string at(Obj a, const FiberOps& f, std::initializer_list<Elem> els) const {
    std::string s = " over " + lbl(C, a) + " at";
    for (Elem x : els) s += " " + f.poset().label(x);
    return s;
  }

  std::optional<std::string> top_and_meets(bool meets) {
    for (Obj a : objects()) {
      const FiberOps *ext, *whole;
      if (!frame(a, &ext, &whole)) continue;
      if (!ext->has(CertKind::top) || ext->top() != e.top(a)) return "top is not P(pr1)(phi) over " + lbl(C, a);
      if (!meets) continue;
      if (!ext->has(CertKind::meets)) return "no meets over " + lbl(C, a);
      for (Elem x : ext->elements())
        for (Elem y : ext->elements())
          if (whole->meet(x, y) != ext->meet(x, y)) return "meet differs" + at(a, *ext, {x, y});
    }
    return std::nullopt;
  }

  std::optional<std::string> bottom() {
    for (Obj a : objects()) {
      const FiberOps *ext, *whole;
      if (!frame(a, &ext, &whole)) continue;
      if (!ext->has(CertKind::bottom) || ext->bottom() != whole->bottom())
        return "bottom of P(X x A) is not the bottom over " + lbl(C, a);
    }
    return std::nullopt;
  }

  std::optional<std::string> joins() {
    for (Obj a : objects()) {
      const FiberOps *ext, *whole;
      if (!frame(a, &ext, &whole)) continue;
      if (!ext->has(CertKind::joins)) return "no joins over " + lbl(C, a);
      for (Elem x : ext->elements())
        for (Elem y : ext->elements())
          if (whole->join(x, y) != ext->join(x, y)) return "join differs" + at(a, *ext, {x, y});
    }
    return std::nullopt;
  }

  // (b -> c) /\ P(pr1)(phi)
  std::optional<std::string> implication() {
    for (Obj a : objects()) {
      const FiberOps *ext, *whole;
      if (!frame(a, &ext, &whole)) continue;
      const Elem top = e.top(a);
      const auto& els = ext->elements();
      if (!budget.spend(els.size() * els.size() * els.size())) {
        skipped = true;
        continue;
      }
      for (Elem b : els)
        for (Elem c : els) {
          const Elem imp = whole->meet(whole->implies(b, c), top);
          if (!ext->poset().contains(imp)) return "implication leaves the fiber" + at(a, *ext, {b, c});
          for (Elem d : els)
            if (ext->poset().leq(d, imp) != ext->poset().leq(whole->meet(d, b), c))
              return "implication clause fails" + at(a, *ext, {b, c, d});
        }
    }
    return std::nullopt;
  }

  // not' a = not a /\ P(pr1)(phi)
  Elem restricted_neg(const FiberOps& whole, Elem a, Elem top, bool involutive) {
    return whole.meet(involutive ? whole.negation(a) : whole.pseudo_complement(a), top);
  }

  std::optional<std::string> boolean() {
    for (Obj a : objects()) {
      const FiberOps *ext, *whole;
      if (!frame(a, &ext, &whole)) continue;
      const Elem top = e.top(a);
      for (Elem x : ext->elements()) {
        const Elem n = restricted_neg(*whole, x, top, false);
        if (restricted_neg(*whole, n, top, false) != x) return "not not a != a" + at(a, *ext, {x});
        if (ext->meet(x, n) != ext->bottom()) return "a /\\ not a != bottom" + at(a, *ext, {x});
        if (ext->join(x, n) != top) return "a \\/ not a != top" + at(a, *ext, {x});
      }
    }
    return std::nullopt;
  }

  std::optional<std::string> pseudo_complements() {
    for (Obj a : objects()) {
      const FiberOps *ext, *whole;
      if (!frame(a, &ext, &whole)) continue;
      const Elem top = e.top(a);
      for (Elem x : ext->elements()) {
        const Elem n = restricted_neg(*whole, x, top, false);
        if (ext->meet(x, n) != ext->bottom()) return "a /\\ not a != bottom" + at(a, *ext, {x});
        for (Elem y : ext->elements())
          if (ext->meet(x, y) == ext->bottom() && !ext->poset().leq(y, n))
            return "not a is not the largest disjoint element" + at(a, *ext, {x, y});
      }
    }
    return std::nullopt;
  }

  std::optional<std::string> star_autonomous() {
    for (Obj a : objects()) {
      const FiberOps *ext, *whole;
      if (!frame(a, &ext, &whole)) continue;
      const Elem top = e.top(a);
      const auto& els = ext->elements();
      std::vector<std::int32_t> neg(els.size());
      for (std::size_t i = 0; i < els.size(); ++i) {
        const Elem n = restricted_neg(*whole, els[i], top, true);
        if (!ext->poset().contains(n)) return "negation leaves the fiber" + at(a, *ext, {els[i]});
        neg[i] = static_cast<std::int32_t>(ext->index(n));
      }
      if (auto bad = star_autonomy_violation(ext->poset(), neg)) {
        const auto& [p, q, r] = *bad;
        return "star-autonomy fails" + at(a, *ext, {p, q, r});
      }
    }
    return std::nullopt;
  }

  std::optional<std::string> elementary() {
    std::map<Obj, Elem> delta;
    auto get = [&](Obj a) -> std::optional<Elem> {
      if (auto it = delta.find(a); it != delta.end()) return it->second;
      const Obj aa = C.product(a, a);
      const auto eq = fibered_equality(ctxP, a);
      if (!eq.delta) return std::nullopt;
      return delta[a] = e.morphism()(aa)(*eq.delta);
    };
    for (Obj a : objects()) {
      const auto d = get(a);
      if (!d) {
        skipped = true;
        continue;
      }
      if (auto v = equality_clauses(ctxE, a, *d)) return "delta' over " + lbl(C, a) + ": " + *v;
    }
    for (Obj a : objects())
      for (Obj b : objects()) {
        const auto da = get(a), db = get(b), dab = get(C.product(a, b));
        if (!da || !db || !dab) {
          skipped = true;
          continue;
        }
        if (auto v = equality_product_clause(ctxE, a, b, *da, *db, *dab)) return *v;
      }
    return std::nullopt;
  }

  // the quantifier of P over X x C, read on X x (C x B)
  Quantifier lifted(bool left) {
    return [this, left](Obj c, Obj b) -> std::optional<MonotoneMap> {
      const Obj xc = C.product(e.x, c);
      const auto& big = ctxP.ops(C.product(xc, b));
      if (!big.enumerable() || !big.decided() || !ctxP.ops(xc).enumerable())
        fail(Errc::EnumerationBudgetExceeded, "P(X x " + lbl(C, c) + " x " + lbl(C, b) + ") is not enumerable");
      const auto q = left ? exists_along(ctxP, xc, b) : forall_along(ctxP, xc, b);
      if (!q) return std::nullopt;
      const auto re = P.reindex(assoc_right(C, e.x, c, b));
      const auto src = e.doctrine()->fiber(C.product(c, b));
      const auto dst = e.doctrine()->fiber(c);
      if (left) return MonotoneMap(src, dst, [q = *q, re](Elem a) { return q(re(a)); });
      const Elem top = e.top(c);
      const auto fx = P.fiber(xc);
      return MonotoneMap(src, dst, [q = *q, re, top, fx](Elem a) { return *fx->meet(q(re(a)), top); });
    };
  }

  std::optional<std::string> weak_power() {
    for (Obj a : objects()) {
      bool undecided = false;
      const auto w = weak_power_object(ctxP, C.product(e.x, a), &undecided);
      if (!w) {
        skipped = true;
        continue;
      }
      const auto [omega, in] = *w;
      const Obj target = C.product(e.x, C.product(a, omega));
      const auto ft = P.fiber(target);
      const Elem moved = P.reindex(assoc_left(C, e.x, a, omega))(in);
      const Elem in2 = *ft->meet(moved, e.top(C.product(a, omega)));
      bool sk = false;
      if (auto v = weak_power_clauses(ctxE, a, omega, in2, &sk)) return "Omega' over " + lbl(C, a) + ": " + *v;
      skipped = skipped || sk;
    }
    return std::nullopt;
  }

  bool distributive() {
    std::vector<Obj> objs = objects();
    for (Obj a : objects()) objs.push_back(C.product(e.x, a));
    for (Obj a : objs) {
      const auto& f = ctxP.ops(a);
      if (!f.enumerable() || !f.decided() || !f.has(CertKind::joins) || !f.has(CertKind::meets)) continue;
      const auto& els = f.elements();
      if (!budget.spend(els.size() * els.size() * els.size())) break;
      for (Elem x : els)
        for (Elem y : els)
          for (Elem z : els)
            if (f.meet(x, f.join(y, z)) != f.join(f.meet(x, y), f.meet(x, z))) return false;
    }
    return true;
  }
};

}  // namespace

TransportMatrix transport_report(const Extension& e, const Limits& limits, Report& report) {
  Transport t(e, limits);
  TransportMatrix out;
  for (Kind kind : kAllKinds) {
    KindResult held;
    try {
      held = detect_structure(t.ctxP, kind);
    } catch (const Error& err) {
      if (err.code() != Errc::PrerequisiteMissing) throw;
      continue;
    }
    if (held.outcome != Outcome::pass) continue;

    TransportRow row;
    row.kind = kind;
    t.skipped = false;
    std::optional<std::string> v;
    switch (kind) {
      case Kind::primary: v = t.top_and_meets(true); break;
      case Kind::bounded:
        if (!(v = t.top_and_meets(false))) v = t.bottom();
        break;
      case Kind::joins:
        if (!(v = t.joins())) v = t.bottom();
        break;
      case Kind::implicational: v = t.implication(); break;
      case Kind::heyting:
        if (!(v = t.implication()) && !(v = t.joins())) v = t.bottom();
        break;
      case Kind::boolean: v = t.boolean(); break;
      case Kind::pseudo_complements:
        if (!(v = t.bottom())) v = t.pseudo_complements();
        break;
      case Kind::star_autonomous: v = t.star_autonomous(); break;
      case Kind::elementary: v = t.elementary(); break;
      case Kind::existential: {
        bool sk = false;
        v = exists_clauses(t.ctxE, t.lifted(true), &sk);
        t.skipped = t.skipped || sk;
        break;
      }
      case Kind::universal: {
        bool sk = false, frob = false;
        v = forall_clauses(t.ctxE, t.lifted(false), &sk, &frob);
        t.skipped = t.skipped || sk;
        const bool before = held.flags.count("frobenius") && held.flags.at("frobenius");
        row.flags["frobenius_source"] = before;
        row.flags["frobenius_extension"] = frob;
        if (!v && before && !frob) v = "the Frobenius formula for forall holds in P but not in the extension";
        break;
      }
      case Kind::weak_power_objects: v = t.weak_power(); break;
    }
    if (v) fail(Errc::TransportWitnessFailure, std::string(kind_name(kind)) + ": " + *v);
    row.witness = t.skipped ? Outcome::skipped : Outcome::pass;

    try {
      row.detected = detect_structure(t.ctxE, kind).outcome;
    } catch (const Error& err) {
      if (err.code() != Errc::PrerequisiteMissing) throw;
      row.detected = Outcome::fail;
    }
    if (row.detected == Outcome::fail)
      fail(Errc::TransportWitnessFailure,
           std::string(kind_name(kind)) + ": witness verified but detection on the extension fails");

    if (kind == Kind::weak_power_objects) {
      row.preservation_claimed = false;
    } else {
      try {
        const auto pr = preservation_check(e.morphism(), kind, limits);
        row.preserved = pr.outcome;
        row.detail = pr.witness;
      } catch (const Error& err) {
        if (err.code() != Errc::PrerequisiteMissing) throw;
        row.preserved = Outcome::skipped;
        row.detail = err.witness();
      }
    }
    if (kind == Kind::joins) {
      const bool dist = t.distributive();
      row.flags["distributive"] = dist;
      if (dist && row.preserved == Outcome::fail)
        fail(Errc::TransportWitnessFailure, "joins: f fails to preserve joins although every fiber is distributive");
    }
    out.rows.push_back(std::move(row));
  }
  out.append_to(report);
  return out;
}

// ---- universal property ----

namespace {

Elem axiom_value(const Extension& e) { return phi_or_top(*e.source, e.x, e.phi); }

// c . ! : G(t) -> G(X), what G'(id_X) has to be
Arrow constant_at_terminal(const Category& D, const Functor& G, const Category& C, const Arrow& c) {
  return D.compose(c, D.bang(G(C.terminal())));
}

}  // namespace

ModelFactorization factorize_model(const Extension& e, const Model& md, const std::vector<Competitor>& competitors,
                                   bool check_preservation, const Limits& limits, Report& report) {
  const DoctrineMorphism& g = md.morphism;
  const Category& C = *e.source->base();
  const CategoryRef Dref = g.target->base();
  const Category& D = *Dref;
  const Doctrine& R = *g.target;
  const Functor G = g.functor;
  const Arrow& c = md.constant;

  Report sub;
  validate_morphism(g, {Kind::primary}, limits, sub);
  report.merge(sub, "model: ");

  if (c.dom != D.terminal() || c.cod != G(e.x))
    fail(Errc::UsageError, "the constant must be an arrow t -> G(X)");
  const auto rt = R.fiber(c.dom);
  const Elem v = R.reindex(c)(g(e.x)(axiom_value(e)));
  if (!rt->leq(*rt->top(), v))
    fail(Errc::ConstantDoesNotSatisfyAxiom, "R(c)(g_X(phi)) = " + rt->label(v) + " is below top");
  report.pass("model: constant satisfies the axiom");

  const Obj x = e.x;
  auto cache = std::make_shared<std::map<Obj, Arrow>>();
  auto j = [G, Dref, c, x, limits, cache](Obj a) -> Arrow {
    if (auto it = cache->find(a); it != cache->end()) return it->second;
    const Category& D = *Dref;
    const Category& S = *G.source;
    const Obj ga = G(a);
    const Arrow pr = D.pair(D.compose(c, D.bang(ga)), D.identity(ga));
    Arrow inv;
    if (G(S.product(x, a)) == D.product(G(x), ga) && G(S.pr1(x, a)) == D.pr1(G(x), ga) &&
        G(S.pr2(x, a)) == D.pr2(G(x), ga)) {
      inv = D.identity(pr.cod);
    } else {
      auto found = product_comparison_inverse(G, x, a, limits);
      if (!found) fail(Errc::ProductsNotPreserved, "G(X x " + S.object_label(a) + ") is not a product");
      inv = *found;
    }
    return (*cache)[a] = D.compose(inv, pr);
  };

  ModelFactorization out;
  out.oplax = OplaxMorphism{g, j};
  sub = Report{};
  validate_oplax(e.comonad, out.oplax, limits, sub);
  const auto f = factorize_oplax(e.bundle, out.oplax, competitors, false, limits, sub);
  report.merge(sub, "model: ");
  out.morphism = f.morphism;
  out.mode = f.mode;

  if (out.morphism.functor(e.constant) != constant_at_terminal(D, G, C, c))
    fail(Errc::CompositeMismatch, "G'(id_X) != c");
  report.pass("model: G'(id_X) = c");
  sub = Report{};
  validate_morphism(out.morphism, {Kind::primary}, limits, sub);
  report.merge(sub, "model: factorization ");

  if (check_preservation) {
    for (Kind k : {Kind::elementary, Kind::existential, Kind::universal, Kind::implicational, Kind::bounded,
                   Kind::joins, Kind::heyting, Kind::boolean}) {
      const std::string name = "model: g' preserves " + std::string(kind_name(k));
      KindResult before, after;
      try {
        before = preservation_check(g, k, limits);
        if (before.outcome != Outcome::pass) {
          report.skip(name, "g does not preserve it");
          continue;
        }
        after = preservation_check(out.morphism, k, limits);
      } catch (const Error& err) {
        if (err.code() != Errc::PrerequisiteMissing) throw;
        report.skip(name, "structure absent: " + err.witness());
        continue;
      }
      out.preserved[k] = after.outcome;
      report.add({name, after.outcome, after.witness});
    }
  }
  return out;
}

std::optional<Family> invertible_two_cell(const DoctrineMorphism& m, const DoctrineMorphism& n,
                                          const Limits& limits) {
  bool ex1 = false, ex2 = false;
  const auto there = enumerate_two_cells(m, n, nullptr, limits, &ex1);
  const auto back = enumerate_two_cells(n, m, nullptr, limits, &ex2);
  const Category& D = *m.target->base();
  const auto objs = m.source->base()->objects();
  for (const auto& t : there)
    for (const auto& s : back) {
      bool ok = true;
      for (std::size_t i = 0; i < objs.size() && ok; ++i)
        ok = D.compose(s[i], t[i]) == D.identity(m.functor(objs[i])) &&
             D.compose(t[i], s[i]) == D.identity(n.functor(objs[i]));
      if (ok) return t;
    }
  return std::nullopt;
}

void uniqueness_and_fullness_check(const Extension& e, const Model& m, const std::optional<Model>& other,
                                   const std::vector<Competitor>& competitors, UniquenessNotion notion,
                                   const Limits& limits, Report& report) {
  const Category& C = *e.source->base();
  const Category& D = *m.morphism.target->base();
  report.pass("uniqueness: faithful", "F_X is the identity on objects");

  Report sub;
  const auto f1 = factorize_model(e, m, {}, false, limits, sub);
  report.pass("uniqueness: essentially surjective", "every model factors");

  if (other) {
    if (D.lazy()) fail(Errc::LazyBaseUnsupported, "2-cells are enumerated over a finite base only");
    const auto f2 = factorize_model(e, *other, {}, false, limits, sub);
    const auto objs = C.objects();
    const std::size_t px = position(objs, e.x);
    if (px == objs.size()) fail(Errc::LazyBaseUnsupported, "X is not among the checked objects");
    bool ex1 = false, ex2 = false;
    const auto lower = enumerate_two_cells(
        m.morphism, other->morphism,
        [&](const Family& t) { return D.compose(t[px], m.constant) == other->constant; }, limits, &ex1);
    const auto upper = enumerate_two_cells(f1.morphism, f2.morphism, nullptr, limits, &ex2);
    if (ex1 || ex2) {
      report.skip("uniqueness: full", "2-cell search exceeded the hom cap or search budget");
    } else {
      auto show = [&](const Family& t) {
        std::string s;
        for (std::size_t i = 0; i < t.size(); ++i) s += (i ? ", " : "") + D.arrow_label(t[i]);
        return "(" + s + ")";
      };
      for (const auto& t : lower)
        if (std::find(upper.begin(), upper.end(), t) == upper.end())
          fail(Errc::FullnessCounterexample, "model 2-cell " + show(t) + " does not lift");
      for (const auto& t : upper)
        if (std::find(lower.begin(), lower.end(), t) == lower.end())
          fail(Errc::FullnessCounterexample, "2-cell " + show(t) + " between factorizations is not a model 2-cell");
      report.pass("uniqueness: full");
      report.fact("uniqueness.model_two_cells", std::to_string(lower.size()));
      report.fact("uniqueness.factorized_two_cells", std::to_string(upper.size()));
    }
  }

  const Arrow want = constant_at_terminal(D, m.morphism.functor, C, m.constant);
  for (const auto& comp : competitors) {
    const std::string name = "uniqueness: competitor " + comp.name;
    if (comp.morphism.functor(e.constant) != want) {
      report.pass(name, "rejected: G(id_X) != c");
      continue;
    }
    if (morphism_difference(compose(comp.morphism, e.morphism()), m.morphism, limits)) {
      report.pass(name, "rejected: composite differs");
      continue;
    }
    const auto diff = morphism_difference(comp.morphism, f1.morphism, limits);
    if (!diff) {
      report.pass(name, "equal to the factorization");
      continue;
    }
    if (notion == UniquenessNotion::iso && invertible_two_cell(comp.morphism, f1.morphism, limits)) {
      report.pass(name, "isomorphic to the factorization");
      continue;
    }
    fail(Errc::UniquenessCounterexample, comp.name + ": " + *diff);
  }
  report.fact("uniqueness.notion", notion == UniquenessNotion::strict ? "strict" : "iso");
}

Conservativity conservativity_check(const Extension& e, const Limits& limits, Report& report) {
  const Doctrine& P = *e.source;
  const Category& C = *P.base();
  StructureContext ctx(P, limits);
  Budget budget(limits.check_budget);
  Conservativity out;
  out.conservative = true;
  for (Obj a : ctx.homs().objects()) {
    const auto pa = P.fiber(a);
    if (pa->size() > limits.fiber_cap || !budget.spend(pa->size() * pa->size())) {
      out.skipped = true;
      continue;
    }
    const auto f = e.morphism()(a);
    const auto fa = e.doctrine()->fiber(a);
    const auto els = pa->elements();
    std::vector<Elem> img(els.size());
    for (std::size_t i = 0; i < els.size(); ++i) img[i] = f(els[i]);
    for (std::size_t i = 0; i < els.size() && out.conservative; ++i)
      for (std::size_t j = 0; j < els.size(); ++j)
        if (fa->leq(img[i], img[j]) && !pa->leq(els[i], els[j])) {
          out.conservative = false;
          out.witness = "(" + lbl(C, a) + ", " + pa->label(els[i]) + ", " + pa->label(els[j]) + ")";
          break;
        }
    if (!out.conservative) break;
  }

  bool existential = false;
  try {
    existential = detect_structure(ctx, Kind::existential).outcome == Outcome::pass;
  } catch (const Error& err) {
    if (err.code() != Errc::PrerequisiteMissing) throw;
  }
  if (existential) {
    const Obj t = C.terminal();
    if (const auto ex = exists_along(ctx, t, e.x)) {
      const auto pt = P.fiber(t);
      const Elem w = P.reindex(C.pr2(t, e.x))(axiom_value(e));
      out.criterion = pt->leq(*pt->top(), (*ex)(w));
    }
  }

  report.fact("conservative.full", out.conservative ? "true" : "false");
  if (!out.conservative) report.fact("conservative.counterexample", out.witness);
  if (out.criterion) {
    report.fact("conservative.criterion", *out.criterion ? "true" : "false");
    if (out.skipped)
      report.skip("conservative: criterion agrees with fullness", "some fibers unchecked");
    else
      report.expect(*out.criterion == out.conservative, "conservative: criterion agrees with fullness",
                    "criterion and fullness disagree");
  } else {
    report.skip("conservative: criterion agrees with fullness", "P is not existential");
  }
  return out;
}

void compose_constructions_check(DoctrineRef p, Obj x, Elem phi, const Limits& limits, Report& report) {
  const Category& C = *p->base();
  Report sub;
  const auto whole = extend(p, x, phi, limits, sub);
  const auto first = add_constant(p, x, limits, sub);
  const Elem moved = p->reindex(C.pr1(x, C.terminal()))(phi);
  const auto second = add_axiom(first.doctrine(), moved, limits, sub);

  const Category& A = *whole.bundle.category;
  const Category& B = *second.bundle.category;
  const auto objs = A.objects();
  if (objs != B.objects()) fail(Errc::DecompositionMismatch, "object lists differ");
  for (Obj a : objs) {
    const auto fa = whole.doctrine()->fiber(a);
    const auto fb = second.doctrine()->fiber(a);
    if (fa->size() > limits.fiber_cap) continue;
    if (sorted_elements(*fa) != sorted_elements(*fb))
      fail(Errc::DecompositionMismatch, "fibers over " + lbl(C, a) + " differ");
  }
  HomTable ha(A, objs, limits.hom_cap), hb(B, objs, limits.hom_cap);
  Budget budget(limits.check_budget);
  bool skipped = ha.truncated();
  for (Obj a : objs)
    for (Obj b : objs) {
      if (ha(a, b) != hb(a, b)) fail(Errc::DecompositionMismatch, "hom(" + lbl(C, a) + ", " + lbl(C, b) + ") differs");
      if (!ha(a, b)) continue;
      const auto fb = whole.doctrine()->fiber(b);
      for (const Arrow& g : *ha(a, b)) {
        if (fb->size() > limits.fiber_cap || !budget.spend(fb->size())) {
          skipped = true;
          continue;
        }
        const auto ra = whole.doctrine()->reindex(g);
        const auto rb = second.doctrine()->reindex(g);
        for (Elem v : fb->elements())
          if (ra(v) != rb(v))
            fail(Errc::DecompositionMismatch, "reindexing along " + A.arrow_label(g) + " differs at " + fb->label(v));
      }
    }
  if (auto diff = morphism_difference(compose(second.morphism(), first.morphism()), whole.morphism(), limits))
    fail(Errc::DecompositionMismatch, "composite 1-arrow: " + *diff);
  if (skipped)
    report.skip("decomposition: (P_X)_phi = P_(X,phi)", "hom cap or check budget reached");
  else
    report.pass("decomposition: (P_X)_phi = P_(X,phi)");
}

void distributive_law_check(DoctrineRef p, Obj x, Elem phi, Obj y, Elem psi, const Limits& limits,
                            Report& report) {
  const Category& C = *p->base();
  const Doctrine& P = *p;
  const Comonad S = build_reader_comonad(p, x, phi, limits);
  const Comonad T = build_reader_comonad(p, y, psi, limits);
  Report sub;
  validate_comonad(S, limits, sub);
  validate_comonad(T, limits, sub);
  report.merge(sub, "distributive: ");

  // X x (Y x A) -> Y x (X x A)
  auto law = [&](Obj u, Obj v, Obj a) {
    const Obj va = C.product(v, a);
    const Arrow q = C.pr2(u, va);
    return C.pair(C.compose(C.pr1(v, a), q), C.pair(C.pr1(u, va), C.compose(C.pr2(v, a), q)));
  };
  auto ell = [&](Obj a) { return law(x, y, a); };
  const Functor& Sf = S.functor;
  const Functor& Tf = T.functor;
  const auto objs = C.objects();
  auto bad = [&](std::string what, Obj a) { fail(Errc::CoherenceViolation, what + " at " + lbl(C, a)); };

  for (Obj a : objs) {
    const Arrow l = ell(a);
    if (C.compose(T.epsilon(Sf(a)), l) != Sf(T.epsilon(a))) bad("epsilon^Y_S . l != S(epsilon^Y)", a);
    if (C.compose(Tf(S.epsilon(a)), l) != S.epsilon(Tf(a))) bad("T(epsilon^X) . l != epsilon^X_T", a);
    if (C.compose(T.gamma(Sf(a)), l) != C.compose(Tf(l), C.compose(ell(Tf(a)), Sf(T.gamma(a)))))
      bad("gamma^Y_S . l != T(l) . l_T . S(gamma^Y)", a);
    if (C.compose(Tf(S.gamma(a)), l) != C.compose(ell(Sf(a)), C.compose(Sf(l), S.gamma(Tf(a)))))
      bad("T(gamma^X) . l != l_S . S(l) . gamma^X_T", a);
  }
  HomTable homs(C, objs, limits.hom_cap);
  for (const Arrow& f : homs.arrows())
    if (C.compose(Tf(Sf(f)), ell(f.dom)) != C.compose(ell(f.cod), Sf(Tf(f))))
      fail(Errc::CoherenceViolation, "l is not natural at " + C.arrow_label(f));
  report.pass("distributive: coherence diagrams");

  bool equality = true, skipped = false;
  for (Obj a : objs) {
    const auto pa = P.fiber(a);
    if (pa->size() > limits.fiber_cap) {
      skipped = true;
      continue;
    }
    const Obj sta = Sf(Tf(a));
    const auto target = P.fiber(sta);
    const auto lhs = compose(S.k(Tf(a)), T.k(a));
    const auto rhs = compose(P.reindex(ell(a)), compose(T.k(Sf(a)), S.k(a)));
    for (Elem v : pa->elements()) {
      if (!target->leq(lhs(v), rhs(v)))
        fail(Errc::CoherenceViolation, "2-cell inequality fails at (" + lbl(C, a) + ", " + pa->label(v) + ")");
      equality = equality && lhs(v) == rhs(v);
    }
  }
  if (skipped)
    report.skip("distributive: 2-cell inequality", "fibers over the fiber cap skipped");
  else
    report.pass("distributive: 2-cell inequality");
  report.fact("distributive.equality", equality ? "true" : "false");

  for (Obj a : objs) {
    const Arrow back = law(y, x, a);
    if (C.compose(back, ell(a)) != C.identity(Sf(Tf(a))) || C.compose(ell(a), back) != C.identity(Tf(Sf(a))))
      bad("l is not invertible", a);
  }
  report.pass("distributive: l invertible");

  // the projection equations pin l down
  bool counted = true;
  for (Obj a : objs) {
    const Obj ya = C.product(y, a), xa = C.product(x, a);
    const auto h = C.hom(Sf(Tf(a)), Tf(Sf(a)), limits.hom_cap);
    if (!h) {
      counted = false;
      continue;
    }
    const Arrow q = C.pr2(x, ya);
    const Arrow want_y = C.compose(C.pr1(y, a), q);
    const Arrow want_x = C.pr1(x, ya);
    const Arrow want_a = C.compose(C.pr2(y, a), q);
    std::size_t n = 0;
    for (const Arrow& u : *h) {
      const Arrow rest = C.compose(C.pr2(y, xa), u);
      if (C.compose(C.pr1(y, xa), u) == want_y && C.compose(C.pr1(x, a), rest) == want_x &&
          C.compose(C.pr2(x, a), rest) == want_a) {
        ++n;
        if (u != ell(a)) bad("another arrow satisfies the projection equations", a);
      }
    }
    if (n != 1) bad("the projection equations have " + std::to_string(n) + " solutions", a);
  }
  if (counted)
    report.pass("distributive: l unique");
  else
    report.skip("distributive: l unique", "some hom-sets exceed the hom cap");

  if (!C.strict_assoc()) {
    report.skip("distributive: composite is the reader comonad", "products are not strictly associative");
    return;
  }
  const Obj xy = C.product(x, y);
  const auto pxy = P.fiber(xy);
  const Elem chi = *pxy->meet(P.reindex(C.pr1(x, y))(phi), P.reindex(C.pr2(x, y))(psi));
  const Comonad Rd = build_reader_comonad(p, xy, chi, limits);
  for (Obj a : objs) {
    const Obj ta = Tf(a);
    if (Rd.functor(a) != Sf(ta)) bad("K_(X x Y) A != X x (Y x A)", a);
    if (Rd.epsilon(a) != C.compose(T.epsilon(a), S.epsilon(ta))) bad("counit of the composite differs", a);
    const Arrow g = C.compose(Sf(ell(ta)), C.compose(S.gamma(Tf(ta)), Sf(T.gamma(a))));
    if (Rd.gamma(a) != g) bad("comultiplication of the composite differs", a);
    const auto pa = P.fiber(a);
    if (pa->size() > limits.fiber_cap) continue;
    const auto lhs = Rd.k(a);
    const auto rhs = compose(S.k(ta), T.k(a));
    for (Elem v : pa->elements())
      if (lhs(v) != rhs(v)) bad("composite 1-cell differs on " + pa->label(v), a);
  }
  for (const Arrow& f : homs.arrows())
    if (Rd.functor(f) != Sf(Tf(f)))
      fail(Errc::CoherenceViolation, "composite functor differs on " + C.arrow_label(f));
  report.pass("distributive: composite is the reader comonad");
}

}  // namespace doctrina
