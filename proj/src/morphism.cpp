#include "doctrina/morphism.hpp"

#include "doctrina/error.hpp"

namespace doctrina {

DoctrineMorphism identity_morphism(DoctrineRef d) {
  DoctrineMorphism m;
  m.source = d;
  m.target = d;
  m.functor = identity_functor(d->base());
  m.component = [d](Obj a) { return identity_map(d->fiber(a)); };
  return m;
}

DoctrineMorphism compose(const DoctrineMorphism& n, const DoctrineMorphism& m) {
  DoctrineMorphism out;
  out.source = m.source;
  out.target = n.target;
  out.functor = compose(n.functor, m.functor);
  out.component = [n, m](Obj a) { return compose(n(m.functor(a)), m(a)); };
  return out;
}

void check_naturality(const DoctrineMorphism& m, const Limits& limits, Report& report) {
  const Doctrine& P = *m.source;
  const Doctrine& R = *m.target;
  const Category& C = *P.base();
  HomTable homs(C, C.objects(), limits.hom_cap);
  Budget budget(limits.check_budget);
  bool skipped = homs.truncated();

  for (Obj a : homs.objects()) {
    const auto pa = P.fiber(a);
    if (pa->size() > limits.fiber_cap) {
      skipped = true;
      continue;
    }
    const auto fa = retarget(m(a), pa, R.fiber(m.functor(a)));
    if (auto bad = monotonicity_violation(fa))
      fail(Errc::NaturalityViolation, "component at " + C.object_label(a) + " is not monotone at " +
                                          pa->label(bad->first) + " <= " + pa->label(bad->second));
  }
  for (const Arrow& h : homs.arrows()) {
    const auto pb = P.fiber(h.cod);
    if (pb->size() > limits.fiber_cap) continue;
    if (!budget.spend(pb->size())) {
      skipped = true;
      break;
    }
    const auto ph = P.reindex(h);
    const auto rfh = R.reindex(m.functor(h));
    const auto fa = m(h.dom);
    const auto fb = m(h.cod);
    for (Elem x : pb->elements())
      if (fa(ph(x)) != rfh(fb(x)))
        fail(Errc::NaturalityViolation, "square fails at " + C.arrow_label(h) + " on " + pb->label(x));
  }
  if (skipped)
    report.skip("morphism: naturality", "hom cap, fiber cap or check budget reached");
  else
    report.pass("morphism: naturality");
}

namespace {

struct Pres {
  explicit Pres(Kind k) : kind(k) {}

  Kind kind;
  bool skipped = false;
  std::string why;
  void skip(std::string w) {
    if (!skipped) why = std::move(w);
    skipped = true;
  }
};

KindResult result(const Pres& p, const std::optional<std::string>& violation) {
  KindResult r;
  r.kind = p.kind;
  if (violation) {
    r.outcome = Outcome::fail;
    r.witness = *violation;
  } else if (p.skipped) {
    r.outcome = Outcome::skipped;
    r.witness = p.why;
  } else {
    r.outcome = Outcome::pass;
  }
  return r;
}

enum class Op { top, bottom, meet, join, implies, pseudo_complement, negation };

std::optional<std::string> preserves(const DoctrineMorphism& m, StructureContext& src, StructureContext& tgt,
                                     Op op, Pres& p, Budget& budget) {
  const Category& C = src.base();
  for (Obj a : src.homs().objects()) {
    const auto& fa = src.ops(a);
    const auto& ra = tgt.ops(m.functor(a));
    if (!fa.enumerable() || !fa.decided() || !ra.decided()) {
      p.skip("fiber over " + C.object_label(a) + " too large");
      continue;
    }
    const auto& els = fa.elements();
    const std::size_t n = els.size();
    const bool binary = op == Op::meet || op == Op::join || op == Op::implies;
    if (!budget.spend(binary ? n * n : n)) {
      p.skip("check budget spent");
      return std::nullopt;
    }
    const auto f = m(a);
    std::vector<Elem> fv(n);
    for (std::size_t i = 0; i < n; ++i) fv[i] = f(els[i]);
    auto img = [&](Elem e) { return fv[fa.index(e)]; };
    const std::string where = "f_" + C.object_label(a);
    auto at = [&](std::size_t i) { return " at " + fa.poset().label(els[i]); };
    auto at2 = [&](std::size_t i, std::size_t j) {
      return " at " + fa.poset().label(els[i]) + ", " + fa.poset().label(els[j]);
    };
    switch (op) {
      case Op::top:
        if (img(fa.top()) != ra.top()) return where + " does not preserve top";
        break;
      case Op::bottom:
        if (img(fa.bottom()) != ra.bottom()) return where + " does not preserve bottom";
        break;
      case Op::pseudo_complement:
        for (std::size_t i = 0; i < n; ++i)
          if (img(fa.pseudo_complement(els[i])) != ra.pseudo_complement(fv[i]))
            return where + " does not preserve pseudo-complements" + at(i);
        break;
      case Op::negation:
        for (std::size_t i = 0; i < n; ++i)
          if (img(fa.negation(els[i])) != ra.negation(fv[i])) return where + " does not preserve negation" + at(i);
        break;
      case Op::meet:
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            if (img(fa.meet(els[i], els[j])) != ra.meet(fv[i], fv[j]))
              return where + " does not preserve meets" + at2(i, j);
        break;
      case Op::join:
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            if (img(fa.join(els[i], els[j])) != ra.join(fv[i], fv[j]))
              return where + " does not preserve joins" + at2(i, j);
        break;
      case Op::implies:
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            if (img(fa.implies(els[i], els[j])) != ra.implies(fv[i], fv[j]))
              return where + " does not preserve implication" + at2(i, j);
        break;
    }
  }
  return std::nullopt;
}

std::optional<std::string> preserves_equality(const DoctrineMorphism& m, StructureContext& src,
                                              StructureContext& tgt, Pres& p) {
  const Category& C = src.base();
  const Category& T = tgt.base();
  const Functor& F = m.functor;
  for (Obj a : src.homs().objects()) {
    auto d = fibered_equality(src, a);
    auto e = fibered_equality(tgt, F(a));
    if (!d.delta || !e.delta) {
      p.skip("fibered equality over " + C.object_label(a) + " unavailable");
      continue;
    }
    const Arrow cmp = T.pair(F(C.pr1(a, a)), F(C.pr2(a, a)));
    const Elem lhs = m(C.product(a, a))(*d.delta);
    const Elem rhs = tgt.doctrine().reindex(cmp)(*e.delta);
    if (lhs != rhs)
      return "f_" + C.object_label(a) + "x" + C.object_label(a) + " sends delta to " +
             tgt.ops(F(C.product(a, a))).poset().label(lhs) + ", not " +
             tgt.ops(F(C.product(a, a))).poset().label(rhs);
  }
  return std::nullopt;
}

// f_C Q^B_C = Q^{FB}_{FC} R(cmp^-1) f_{C x B}
std::optional<std::string> preserves_quantifier(const DoctrineMorphism& m, StructureContext& src,
                                                StructureContext& tgt, bool left, const Limits& limits,
                                                Pres& p, Budget& budget) {
  const Category& C = src.base();
  const Functor& F = m.functor;
  const auto& objs = src.homs().objects();
  for (Obj c : objs)
    for (Obj b : objs) {
      auto q = left ? exists_along(src, c, b) : forall_along(src, c, b);
      auto q2 = left ? exists_along(tgt, F(c), F(b)) : forall_along(tgt, F(c), F(b));
      auto inv = product_comparison_inverse(F, c, b, limits);
      if (!q || !q2 || !inv) {
        p.skip("quantifier over " + C.object_label(c) + " x " + C.object_label(b) + " unavailable");
        continue;
      }
      const auto pcb = src.doctrine().fiber(C.product(c, b));
      if (!budget.spend(pcb->size())) {
        p.skip("check budget spent");
        return std::nullopt;
      }
      const auto fc = m(c);
      const auto fcb = m(C.product(c, b));
      const auto back = tgt.doctrine().reindex(*inv);
      for (Elem x : pcb->elements())
        if (fc((*q)(x)) != (*q2)(back(fcb(x))))
          return std::string(left ? "exists" : "forall") + " not preserved over " + C.object_label(c) + " x " +
                 C.object_label(b) + " at " + pcb->label(x);
    }
  return std::nullopt;
}

}  // namespace

KindResult preservation_check(const DoctrineMorphism& m, Kind kind, const Limits& limits) {
  StructureContext src(*m.source, limits);
  StructureContext tgt(*m.target, limits);
  Budget budget(limits.check_budget);
  Pres p{kind};
  auto ops = [&](std::initializer_list<Op> list) -> std::optional<std::string> {
    for (Op op : list)
      if (auto v = preserves(m, src, tgt, op, p, budget)) return v;
    return std::nullopt;
  };
  switch (kind) {
    case Kind::primary: return result(p, ops({Op::top, Op::meet}));
    case Kind::bounded: return result(p, ops({Op::top, Op::bottom}));
    case Kind::joins: return result(p, ops({Op::join, Op::bottom}));
    case Kind::implicational: return result(p, ops({Op::implies}));
    case Kind::heyting:
    case Kind::boolean: return result(p, ops({Op::implies, Op::join, Op::bottom}));
    case Kind::star_autonomous: return result(p, ops({Op::negation}));
    case Kind::pseudo_complements: return result(p, ops({Op::bottom, Op::pseudo_complement}));
    case Kind::elementary: return result(p, preserves_equality(m, src, tgt, p));
    case Kind::existential: return result(p, preserves_quantifier(m, src, tgt, true, limits, p, budget));
    case Kind::universal: return result(p, preserves_quantifier(m, src, tgt, false, limits, p, budget));
    case Kind::weak_power_objects: p.skip("no preservation claim"); return result(p, std::nullopt);
  }
  return result(p, std::nullopt);
}

void validate_morphism(const DoctrineMorphism& m, const std::set<Kind>& preserve, const Limits& limits,
                       Report& report) {
  check_naturality(m, limits, report);
  for (Kind k : preserve) {
    auto r = preservation_check(m, k, limits);
    const std::string name = "morphism: preserves " + std::string(kind_name(k));
    if (r.outcome == Outcome::fail) fail(Errc::PreservationViolation, std::string(kind_name(k)) + ": " + r.witness);
    if (r.outcome == Outcome::skipped)
      report.skip(name, r.witness);
    else
      report.pass(name);
  }
}

TwoCellCheck validate_two_cell(const NatTransf& theta, const DoctrineMorphism& m, const DoctrineMorphism& n,
                               const Limits& limits, Report& report) {
  validate_nat_transf(theta, limits, report);
  const Doctrine& P = *m.source;
  const Doctrine& R = *m.target;
  const Category& C = *P.base();
  const Category& T = *R.base();
  TwoCellCheck out{true, true};
  for (Obj a : C.objects()) {
    const auto pa = P.fiber(a);
    const Arrow th = theta(a);
    const auto rth = R.reindex(th);
    const auto fa = m(a);
    const auto ga = n(a);
    const auto& ra = R.fiber(m.functor(a));
    for (Elem x : pa->elements()) {
      const Elem lhs = fa(x);
      const Elem rhs = rth(ga(x));
      if (!ra->leq(lhs, rhs))
        fail(Errc::LaxInequalityViolation, "(" + C.object_label(a) + ", " + pa->label(x) + ")");
      out.strict = out.strict && lhs == rhs;
    }
    if (!out.invertible) continue;
    std::optional<Arrow> inv;
    if (auto h = T.hom(th.cod, th.dom, limits.hom_cap))
      for (const Arrow& u : *h)
        if (T.compose(u, th) == T.identity(th.dom) && T.compose(th, u) == T.identity(th.cod)) {
          inv = u;
          break;
        }
    if (!inv) {
      out.invertible = false;
      continue;
    }
    const auto rinv = R.reindex(*inv);
    const auto& rga = R.fiber(n.functor(a));
    for (Elem x : pa->elements())
      if (!rga->leq(ga(x), rinv(fa(x)))) {
        out.invertible = false;
        break;
      }
  }
  report.pass("2-cell: lax inequality");
  report.fact("two_cell.strict", out.strict ? "true" : "false");
  report.fact("two_cell.invertible", out.invertible ? "true" : "false");
  return out;
}

}  // namespace doctrina
