#include "doctrina/structure.hpp"

#include <algorithm>
#include <initializer_list>

#include "doctrina/error.hpp"

namespace doctrina {

// ---- FiberOps ----

FiberOps::FiberOps(PosetRef p, const Limits& limits) : p_(std::move(p)) {
  subset_ = dynamic_cast<const SubsetLattice*>(p_.get());
  const std::size_t n = p_->size();
  enumerable_ = n <= limits.fiber_cap;
  if (enumerable_) els_ = p_->elements();
  if (subset_) {
    // bit operations, no tables needed
    decided_ = true;
    kinds_ = {CertKind::meets,   CertKind::top,     CertKind::bottom,          CertKind::joins,
              CertKind::heyting, CertKind::boolean, CertKind::star_autonomous, CertKind::pseudo_complement};
  } else if (n <= kTableLimit) {
    try {
      cert_ = heyting_ops(*p_, Exec::serial);
    } catch (const Error& e) {
      if (e.code() != Errc::NotAHeytingAlgebra && e.code() != Errc::MeetsRequired) throw;
      cert_ = lattice_ops(*p_, Exec::serial);
      auto& c = *cert_;
      if (c.has(CertKind::meets) && c.has(CertKind::bottom)) {
        c.pseudo_complement = pseudo_complement_table(*p_, c.lattice, Exec::serial);
        if (std::none_of(c.pseudo_complement.begin(), c.pseudo_complement.end(),
                         [](std::int32_t x) { return x == kAbsent; }))
          c.kinds.insert(CertKind::pseudo_complement);
      }
      if (auto neg = find_star_negation(*p_, c.lattice)) {
        c.negation = std::move(*neg);
        c.kinds.insert(CertKind::star_autonomous);
      }
    }
    kinds_ = cert_->kinds;
    decided_ = true;
  }
}

std::shared_ptr<const FiberOps> FiberOps::unavailable() {
  static const std::shared_ptr<const FiberOps> ops = [] {
    std::shared_ptr<FiberOps> o(new FiberOps());
    o->p_ = std::make_shared<FinitePoset>(std::vector<std::string>{"?"}, std::vector<std::uint8_t>{1});
    return o;
  }();
  return ops;
}

std::size_t FiberOps::index(Elem e) const {
  if (subset_) return static_cast<std::size_t>(extract_bits(e, subset_->mask()));
  auto i = p_->index_of(e);
  if (!i) fail(Errc::InternalInvariantViolation, "element outside its fiber");
  return *i;
}

Elem FiberOps::pick(std::int32_t i, std::string_view what) const {
  if (i == kAbsent) fail(Errc::PrerequisiteMissing, "fiber has no " + std::string(what));
  return cert_->elements[static_cast<std::size_t>(i)];
}

namespace {

std::int32_t table_at(const std::vector<std::int32_t>& t, std::size_t i) {
  return i < t.size() ? t[i] : kAbsent;
}

}  // namespace

Elem FiberOps::meet(Elem a, Elem b) const {
  if (subset_) return a & b;
  if (!cert_) fail(Errc::PrerequisiteMissing, "fiber too large for meets");
  const std::size_t n = cert_->elements.size();
  return pick(table_at(cert_->lattice.meet, index(a) * n + index(b)), "meet");
}

Elem FiberOps::join(Elem a, Elem b) const {
  if (subset_) return a | b;
  if (!cert_) fail(Errc::PrerequisiteMissing, "fiber too large for joins");
  const std::size_t n = cert_->elements.size();
  return pick(table_at(cert_->lattice.join, index(a) * n + index(b)), "join");
}

Elem FiberOps::top() const {
  if (subset_) return subset_->mask();
  if (!cert_) fail(Errc::PrerequisiteMissing, "fiber too large for top");
  return pick(cert_->lattice.top, "top");
}

Elem FiberOps::bottom() const {
  if (subset_) return 0;
  if (!cert_) fail(Errc::PrerequisiteMissing, "fiber too large for bottom");
  return pick(cert_->lattice.bottom, "bottom");
}

Elem FiberOps::implies(Elem a, Elem b) const {
  if (subset_) return (~a | b) & subset_->mask();
  if (!cert_) fail(Errc::PrerequisiteMissing, "fiber too large for implication");
  const std::size_t n = cert_->elements.size();
  return pick(table_at(cert_->implication, index(a) * n + index(b)), "implication");
}

Elem FiberOps::pseudo_complement(Elem a) const {
  if (subset_) return ~a & subset_->mask();
  if (!cert_) fail(Errc::PrerequisiteMissing, "fiber too large for pseudo-complements");
  return pick(table_at(cert_->pseudo_complement, index(a)), "pseudo-complement");
}

Elem FiberOps::negation(Elem a) const {
  if (subset_) return ~a & subset_->mask();
  if (!cert_) fail(Errc::PrerequisiteMissing, "fiber too large for negation");
  return pick(table_at(cert_->negation, index(a)), "involutive negation");
}

// ---- kinds ----

std::string_view kind_name(Kind k) {
  switch (k) {
    case Kind::primary: return "primary";
    case Kind::elementary: return "elementary";
    case Kind::existential: return "existential";
    case Kind::universal: return "universal";
    case Kind::implicational: return "implicational";
    case Kind::bounded: return "bounded";
    case Kind::joins: return "joins";
    case Kind::heyting: return "heyting";
    case Kind::boolean: return "boolean";
    case Kind::star_autonomous: return "star_autonomous";
    case Kind::pseudo_complements: return "pseudo_complements";
    case Kind::weak_power_objects: return "weak_power_objects";
  }
  return "?";
}

std::optional<Kind> kind_from_name(std::string_view name) {
  for (Kind k : kAllKinds)
    if (kind_name(k) == name) return k;
  return std::nullopt;
}

std::optional<Kind> prerequisite(Kind k) {
  if (k == Kind::primary) return std::nullopt;
  if (k == Kind::boolean) return Kind::heyting;
  return Kind::primary;
}

const KindResult* StructureReport::find(Kind k) const {
  for (const auto& r : results)
    if (r.kind == k) return &r;
  return nullptr;
}

bool StructureReport::holds(Kind k) const {
  auto* r = find(k);
  return r && r->outcome == Outcome::pass;
}

void StructureReport::append_to(Report& r, std::string_view prefix) const {
  for (const auto& k : results) {
    r.add(Check{std::string(prefix) + std::string(kind_name(k.kind)), k.outcome, k.witness});
    for (const auto& [flag, value] : k.flags)
      r.fact(std::string(kind_name(k.kind)) + "." + flag, value ? "true" : "false");
  }
}

StructureContext::StructureContext(const Doctrine& d, const Limits& limits)
    : d_(d),
      limits_(limits),
      homs_(*d.base(), d.base()->objects(), limits.hom_cap),
      arrows_(homs_.arrows()),
      budget_(limits.check_budget) {}

const FiberOps& StructureContext::ops(Obj a) {
  auto it = ops_.find(a);
  if (it == ops_.end()) {
    FiberOpsRef o;
    try {
      o = std::make_shared<const FiberOps>(d_.fiber(a), limits_);
    } catch (const Error& e) {
      if (e.code() != Errc::ProbeTooLarge) throw;
      o = FiberOps::unavailable();
    }
    it = ops_.emplace(a, std::move(o)).first;
  }
  return *it->second;
}

namespace {

std::string cert_name(CertKind k) {
  switch (k) {
    case CertKind::meets: return "binary meets";
    case CertKind::top: return "top";
    case CertKind::bottom: return "bottom";
    case CertKind::joins: return "binary joins";
    case CertKind::heyting: return "implication";
    case CertKind::boolean: return "boolean negation";
    case CertKind::star_autonomous: return "involutive negation";
    case CertKind::pseudo_complement: return "pseudo-complements";
  }
  return "?";
}

// Skip bookkeeping for one detector run.
struct Scan {
  explicit Scan(StructureContext& c) : ctx(c) {}

  StructureContext& ctx;
  bool skipped = false;
  std::string why;

  void skip(std::string w) {
    if (!skipped) {
      skipped = true;
      why = std::move(w);
    }
  }
  bool spend(std::size_t n) {
    if (ctx.budget().spend(n)) return true;
    skip("check budget spent");
    return false;
  }
};

std::string lbl(StructureContext& ctx, Obj a) { return ctx.base().object_label(a); }

// usable for enumeration and with the listed operations decided
bool usable(const FiberOps& o) { return o.enumerable() && o.decided(); }

std::optional<std::string> fibers_have(Scan& s, std::initializer_list<CertKind> kinds) {
  for (Obj a : s.ctx.homs().objects()) {
    const auto& o = s.ctx.ops(a);
    if (!o.decided()) {
      s.skip("fiber over " + lbl(s.ctx, a) + " too large to decide");
      continue;
    }
    for (CertKind k : kinds)
      if (!o.has(k)) return "fiber over " + lbl(s.ctx, a) + " has no " + cert_name(k);
  }
  return std::nullopt;
}

enum class Op { top, bottom, meet, join, implies, pseudo_complement, negation };

std::string_view op_name(Op op) {
  switch (op) {
    case Op::top: return "top";
    case Op::bottom: return "bottom";
    case Op::meet: return "meets";
    case Op::join: return "joins";
    case Op::implies: return "implication";
    case Op::pseudo_complement: return "pseudo-complement";
    case Op::negation: return "negation";
  }
  return "?";
}

// The operation commutes with every reindexing among the checked objects.
std::optional<std::string> natural(Scan& s, Op op) {
  auto& ctx = s.ctx;
  const Category& C = ctx.base();
  if (ctx.homs().truncated()) s.skip("some hom-sets exceed the hom cap");
  for (const Arrow& f : ctx.arrows()) {
    const auto& src = ctx.ops(f.cod);
    const auto& dst = ctx.ops(f.dom);
    if (!usable(src) || !dst.decided()) {
      s.skip("fiber over " + lbl(ctx, f.cod) + " too large");
      continue;
    }
    const auto& els = src.elements();
    const std::size_t n = els.size();
    const bool binary = op == Op::meet || op == Op::join || op == Op::implies;
    if (!s.spend(binary ? n * n : n)) return std::nullopt;
    const auto m = ctx.doctrine().reindex(f);
    std::vector<Elem> mv(n);
    for (std::size_t i = 0; i < n; ++i) mv[i] = m(els[i]);
    auto img = [&](Elem e) { return mv[src.index(e)]; };
    const std::string where = "P(" + C.arrow_label(f) + ") does not preserve " + std::string(op_name(op));
    auto at = [&](std::size_t i) { return " at " + src.poset().label(els[i]); };
    auto at2 = [&](std::size_t i, std::size_t j) {
      return " at " + src.poset().label(els[i]) + ", " + src.poset().label(els[j]);
    };
    switch (op) {
      case Op::top:
        if (img(src.top()) != dst.top()) return where;
        break;
      case Op::bottom:
        if (img(src.bottom()) != dst.bottom()) return where;
        break;
      case Op::pseudo_complement:
        for (std::size_t i = 0; i < n; ++i)
          if (img(src.pseudo_complement(els[i])) != dst.pseudo_complement(mv[i])) return where + at(i);
        break;
      case Op::negation:
        for (std::size_t i = 0; i < n; ++i)
          if (img(src.negation(els[i])) != dst.negation(mv[i])) return where + at(i);
        break;
      case Op::meet:
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            if (img(src.meet(els[i], els[j])) != dst.meet(mv[i], mv[j])) return where + at2(i, j);
        break;
      case Op::join:
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            if (img(src.join(els[i], els[j])) != dst.join(mv[i], mv[j])) return where + at2(i, j);
        break;
      case Op::implies:
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            if (img(src.implies(els[i], els[j])) != dst.implies(mv[i], mv[j])) return where + at2(i, j);
        break;
    }
  }
  return std::nullopt;
}

KindResult verdict(Kind k, const Scan& s, const std::optional<std::string>& violation, std::string ok = {}) {
  KindResult r;
  r.kind = k;
  if (violation) {
    r.outcome = Outcome::fail;
    r.witness = *violation;
  } else if (s.skipped) {
    r.outcome = Outcome::skipped;
    r.witness = s.why;
  } else {
    r.outcome = Outcome::pass;
    r.witness = std::move(ok);
  }
  return r;
}

// Runs the fiber requirement, then each operation's naturality, stopping at
// the first violation.
KindResult fiberwise(StructureContext& ctx, Kind k, std::initializer_list<CertKind> need,
                     std::initializer_list<Op> ops) {
  Scan s{ctx};
  if (auto v = fibers_have(s, need)) return verdict(k, s, v);
  for (Op op : ops)
    if (auto v = natural(s, op)) return verdict(k, s, v);
  return verdict(k, s, std::nullopt);
}

KindResult detect_elementary(StructureContext& ctx) {
  Scan s{ctx};
  const Category& C = ctx.base();
  const auto& objs = ctx.homs().objects();
  bool unique = true;
  std::string summary;
  for (Obj a : objs) {
    auto r = fibered_equality(ctx, a);
    if (r.skipped) {
      s.skip("fibered equality over " + lbl(ctx, a) + " not searched");
      continue;
    }
    if (!r.delta) return verdict(Kind::elementary, s, "no fibered equality over " + lbl(ctx, a));
    unique = unique && r.unique;
    if (!summary.empty()) summary += "; ";
    summary += "delta(" + lbl(ctx, a) + ")=" + ctx.ops(C.product(a, a)).poset().label(*r.delta);
  }
  for (Obj a : objs)
    for (Obj b : objs) {
      auto ra = fibered_equality(ctx, a);
      auto rb = fibered_equality(ctx, b);
      if (!ra.delta || !rb.delta) continue;
      const Obj q = C.product(a, b);
      auto rq = fibered_equality(ctx, q);
      if (rq.skipped) {
        s.skip("fibered equality over " + lbl(ctx, q) + " not searched");
        continue;
      }
      if (!rq.delta) return verdict(Kind::elementary, s, "no fibered equality over " + lbl(ctx, q));
      if (auto v = equality_product_clause(ctx, a, b, *ra.delta, *rb.delta, *rq.delta))
        return verdict(Kind::elementary, s, v);
    }
  auto r = verdict(Kind::elementary, s, std::nullopt, summary);
  r.flags["unique"] = unique;
  return r;
}

KindResult detect_existential(StructureContext& ctx) {
  Scan s{ctx};
  bool skipped = false;
  auto v = exists_clauses(ctx, [&](Obj c, Obj b) { return exists_along(ctx, c, b); }, &skipped);
  if (skipped) s.skip("some quantifiers not checked");
  return verdict(Kind::existential, s, v, "left adjoints with Beck-Chevalley and Frobenius");
}

KindResult detect_universal(StructureContext& ctx) {
  Scan s{ctx};
  bool skipped = false;
  bool frobenius = true;
  auto v = forall_clauses(ctx, [&](Obj c, Obj b) { return forall_along(ctx, c, b); }, &skipped, &frobenius);
  if (skipped) s.skip("some quantifiers not checked");
  auto r = verdict(Kind::universal, s, v, "right adjoints with Beck-Chevalley");
  r.flags["frobenius"] = !v && frobenius;
  return r;
}

KindResult detect_weak_power(StructureContext& ctx) {
  Scan s{ctx};
  const Category& C = ctx.base();
  if (C.lazy()) {
    s.skip("LazyBaseUnsupported: the search ranges over all objects");
    return verdict(Kind::weak_power_objects, s, std::nullopt);
  }
  std::string summary;
  for (Obj a : ctx.homs().objects()) {
    bool undecided = false;
    const auto w = weak_power_object(ctx, a, &undecided);
    if (ctx.budget().exhausted()) {
      s.skip("check budget spent");
      break;
    }
    if (w) {
      if (!summary.empty()) summary += "; ";
      summary += "Omega(" + lbl(ctx, a) + ")=" + lbl(ctx, w->first) +
                 " in=" + ctx.ops(C.product(a, w->first)).poset().label(w->second);
    } else if (undecided) {
      s.skip("weak power object over " + lbl(ctx, a) + " undecided");
    } else {
      return verdict(Kind::weak_power_objects, s, "no weak power object for " + lbl(ctx, a));
    }
  }
  return verdict(Kind::weak_power_objects, s, std::nullopt, summary);
}

KindResult run(StructureContext& ctx, Kind kind) {
  using CK = CertKind;
  switch (kind) {
    case Kind::primary: return fiberwise(ctx, kind, {CK::meets, CK::top}, {Op::top, Op::meet});
    case Kind::elementary: return detect_elementary(ctx);
    case Kind::existential: return detect_existential(ctx);
    case Kind::universal: return detect_universal(ctx);
    case Kind::implicational: return fiberwise(ctx, kind, {CK::heyting}, {Op::implies});
    case Kind::bounded: return fiberwise(ctx, kind, {CK::top, CK::bottom}, {Op::top, Op::bottom});
    case Kind::joins: return fiberwise(ctx, kind, {CK::joins, CK::bottom}, {Op::join, Op::bottom});
    case Kind::heyting:
      return fiberwise(ctx, kind, {CK::heyting, CK::joins, CK::bottom}, {Op::implies, Op::join, Op::bottom});
    case Kind::boolean: return fiberwise(ctx, kind, {CK::boolean}, {});
    case Kind::star_autonomous: return fiberwise(ctx, kind, {CK::star_autonomous}, {Op::negation});
    case Kind::pseudo_complements:
      return fiberwise(ctx, kind, {CK::bottom, CK::pseudo_complement}, {Op::bottom, Op::pseudo_complement});
    case Kind::weak_power_objects: return detect_weak_power(ctx);
  }
  fail(Errc::UsageError, "unknown structure kind");
}

}  // namespace

KindResult detect_structure(StructureContext& ctx, Kind kind) {
  if (auto it = ctx.results.find(kind); it != ctx.results.end()) return it->second;
  if (auto pre = prerequisite(kind)) {
    auto r = detect_structure(ctx, *pre);
    if (r.outcome == Outcome::fail)
      fail(Errc::PrerequisiteMissing,
           std::string(kind_name(kind)) + " needs " + std::string(kind_name(*pre)) + ": " + r.witness);
    if (r.outcome == Outcome::skipped) {
      KindResult out{kind, Outcome::skipped, std::string(kind_name(*pre)) + " undecided", {}};
      return ctx.results.emplace(kind, out).first->second;
    }
  }
  ctx.budget() = Budget(ctx.limits().check_budget);
  return ctx.results.emplace(kind, run(ctx, kind)).first->second;
}

KindResult detect_structure(const Doctrine& d, Kind kind, const Limits& limits) {
  StructureContext ctx(d, limits);
  return detect_structure(ctx, kind);
}

StructureReport detect_all(const Doctrine& d, const Limits& limits) {
  StructureContext ctx(d, limits);
  StructureReport out;
  for (Kind k : kAllKinds) {
    try {
      out.results.push_back(detect_structure(ctx, k));
    } catch (const Error& e) {
      if (e.code() != Errc::PrerequisiteMissing) throw;
      out.results.push_back(KindResult{k, Outcome::fail, "PrerequisiteMissing: " + e.witness(), {}});
    }
  }
  return out;
}

// ---- fibered equality ----

namespace {

struct EqualityFrame {
  const FiberOps* fa;
  const FiberOps* faa;
  std::vector<Elem> p1, p2;  // P(pr1), P(pr2) over fa's enumeration
  MonotoneMap diag;
};

std::optional<EqualityFrame> equality_frame(StructureContext& ctx, Obj a) {
  const Category& C = ctx.base();
  const Obj aa = C.product(a, a);
  const auto& fa = ctx.ops(a);
  const auto& faa = ctx.ops(aa);
  if (!usable(fa) || !usable(faa) || !fa.has(CertKind::top) || !faa.has(CertKind::meets)) return std::nullopt;
  EqualityFrame fr{&fa, &faa, {}, {}, ctx.doctrine().reindex(diagonal(C, a))};
  const auto m1 = ctx.doctrine().reindex(C.pr1(a, a));
  const auto m2 = ctx.doctrine().reindex(C.pr2(a, a));
  for (Elem x : fa.elements()) {
    fr.p1.push_back(m1(x));
    fr.p2.push_back(m2(x));
  }
  return fr;
}

// 0 when both clauses hold, else the failing clause number; `alpha` names the
// first alpha breaking clause 2.
int equality_failure(const EqualityFrame& fr, Elem delta, std::size_t* alpha) {
  if (!fr.fa->poset().leq(fr.fa->top(), fr.diag(delta))) return 1;
  for (std::size_t i = 0; i < fr.p1.size(); ++i)
    if (!fr.faa->poset().leq(fr.faa->meet(fr.p1[i], delta), fr.p2[i])) {
      if (alpha) *alpha = i;
      return 2;
    }
  return 0;
}

}  // namespace

EqualitySearch fibered_equality(StructureContext& ctx, Obj a) {
  if (auto it = ctx.equalities.find(a); it != ctx.equalities.end()) return it->second;
  EqualitySearch out;
  auto fr = equality_frame(ctx, a);
  if (!fr) {
    out.skipped = true;
  } else {
    std::size_t found = 0;
    for (Elem d : fr->faa->elements()) {
      if (!ctx.budget().spend(fr->p1.size() + 1)) {
        out.skipped = !out.delta;
        break;
      }
      if (equality_failure(*fr, d, nullptr) == 0) {
        if (!out.delta) out.delta = d;
        ++found;
      }
    }
    // a spent budget leaves uniqueness unknown; report it as not unique
    out.unique = found == 1 && !ctx.budget().exhausted();
  }
  return ctx.equalities.emplace(a, out).first->second;
}

std::optional<std::string> equality_clauses(StructureContext& ctx, Obj a, Elem delta) {
  auto fr = equality_frame(ctx, a);
  if (!fr) fail(Errc::ProbeTooLarge, "fiber over " + lbl(ctx, a) + " x " + lbl(ctx, a) + " not enumerable");
  std::size_t alpha = 0;
  switch (equality_failure(*fr, delta, &alpha)) {
    case 1: return "clause 1 fails for " + fr->faa->poset().label(delta) + " over " + lbl(ctx, a);
    case 2:
      return "clause 2 fails for " + fr->faa->poset().label(delta) + " at alpha=" +
             fr->fa->poset().label(fr->fa->elements()[alpha]);
    default: return std::nullopt;
  }
}

std::optional<std::string> equality_product_clause(StructureContext& ctx, Obj a, Obj b, Elem da, Elem db,
                                                   Elem dab) {
  const Category& C = ctx.base();
  const Obj q = C.product(a, b);
  const Arrow p = C.pr1(q, q);
  const Arrow r = C.pr2(q, q);
  const Arrow u = C.pair(C.compose(C.pr1(a, b), p), C.compose(C.pr1(a, b), r));
  const Arrow v = C.pair(C.compose(C.pr2(a, b), p), C.compose(C.pr2(a, b), r));
  const auto& fqq = ctx.ops(C.product(q, q));
  const Elem box = fqq.meet(ctx.doctrine().reindex(u)(da), ctx.doctrine().reindex(v)(db));
  if (!fqq.poset().leq(box, dab))
    return "clause 3 fails for " + lbl(ctx, a) + ", " + lbl(ctx, b) + ": " + fqq.poset().label(box) +
           " not below " + fqq.poset().label(dab);
  return std::nullopt;
}

// ---- quantifiers ----

namespace {

std::optional<MonotoneMap> adjoint_of_weakening(StructureContext& ctx, Obj c, Obj b, bool left) {
  auto& memo = left ? ctx.exists_memo : ctx.forall_memo;
  if (auto it = memo.find({c, b}); it != memo.end()) return it->second;
  const Category& C = ctx.base();
  const Obj cb = C.product(c, b);
  if (!usable(ctx.ops(c)) || !usable(ctx.ops(cb))) return std::nullopt;
  auto w = tabulate(ctx.doctrine().reindex(C.pr1(c, b)));
  auto adj = adjoints(w, Exec::serial);
  auto out = left ? adj.left : adj.right;
  memo.emplace(std::make_pair(c, b), out);
  return out;
}

struct QuantFrame {
  Obj c, b, cb;
  const FiberOps* fc;
  const FiberOps* fcb;
  std::vector<Elem> weak;  // P(pr1) over fc's enumeration
  std::vector<Elem> q;     // the quantifier over fcb's enumeration
};

// Collects the quantifier per (C, B) and checks the adjunction with P(pr1).
std::optional<std::string> quant_frames(StructureContext& ctx, const Quantifier& quant, bool left,
                                        bool* skipped, std::map<std::pair<Obj, Obj>, QuantFrame>& out) {
  const Category& C = ctx.base();
  const auto& objs = ctx.homs().objects();
  const std::string side = left ? "left" : "right";
  for (Obj c : objs)
    for (Obj b : objs) {
      const Obj cb = C.product(c, b);
      const auto& fc = ctx.ops(c);
      const auto& fcb = ctx.ops(cb);
      if (!usable(fc) || !usable(fcb)) {
        *skipped = true;
        continue;
      }
      const std::size_t nc = fc.elements().size(), ncb = fcb.elements().size();
      if (!ctx.budget().spend(nc * ncb)) {
        *skipped = true;
        return std::nullopt;
      }
      std::optional<MonotoneMap> qm;
      try {
        qm = quant(c, b);
      } catch (const Error& e) {
        // the quantifier could not be computed, which is not the same as absent
        if (e.code() != Errc::EnumerationBudgetExceeded) throw;
        *skipped = true;
        continue;
      }
      if (!qm)
        return "no " + side + " adjoint of P(pr1) : P(" + lbl(ctx, c) + ") -> P(" + lbl(ctx, cb) + ")";
      QuantFrame fr{c, b, cb, &fc, &fcb, {}, {}};
      const auto w = ctx.doctrine().reindex(C.pr1(c, b));
      for (Elem x : fc.elements()) fr.weak.push_back(w(x));
      for (Elem y : fcb.elements()) fr.q.push_back((*qm)(y));
      const Poset& pc = fc.poset();
      const Poset& pcb = fcb.poset();
      for (std::size_t j = 0; j < ncb; ++j)
        for (std::size_t i = 0; i < nc; ++i) {
          const Elem a = fc.elements()[i];
          const Elem y = fcb.elements()[j];
          const bool ok = left ? pc.leq(fr.q[j], a) == pcb.leq(y, fr.weak[i])
                               : pc.leq(a, fr.q[j]) == pcb.leq(fr.weak[i], y);
          if (!ok)
            return "not a " + side + " adjoint of P(pr1) over " + lbl(ctx, c) + " x " + lbl(ctx, b) + " at " +
                   pcb.label(y) + ", " + pc.label(a);
        }
      out.emplace(std::make_pair(c, b), std::move(fr));
    }
  return std::nullopt;
}

// Beck-Chevalley along every g : C' -> C among the checked objects.
// exists: Q_{C'} P(g x id) = P(g) Q_C ; forall: P(g) Q_C = Q_{C'} P(g x id)
std::optional<std::string> beck_chevalley(StructureContext& ctx,
                                          const std::map<std::pair<Obj, Obj>, QuantFrame>& frames,
                                          bool* skipped, std::string_view name) {
  const Category& C = ctx.base();
  if (ctx.homs().truncated()) *skipped = true;
  for (const Arrow& g : ctx.arrows())
    for (Obj b : ctx.homs().objects()) {
      auto to = frames.find({g.cod, b});
      auto from = frames.find({g.dom, b});
      if (to == frames.end() || from == frames.end()) {
        *skipped = true;
        continue;
      }
      const auto& ft = to->second;
      const auto& ff = from->second;
      if (!ctx.budget().spend(ft.q.size())) {
        *skipped = true;
        return std::nullopt;
      }
      const auto pg = ctx.doctrine().reindex(g);
      const auto pgx = ctx.doctrine().reindex(cross(C, g, C.identity(b)));
      for (std::size_t j = 0; j < ft.q.size(); ++j) {
        const Elem y = ft.fcb->elements()[j];
        const Elem lhs = ff.q[ff.fcb->index(pgx(y))];
        const Elem rhs = pg(ft.q[j]);
        if (lhs != rhs)
          return std::string(name) + " Beck-Chevalley fails along " + C.arrow_label(g) + " with " +
                 lbl(ctx, b) + " at " + ft.fcb->poset().label(y);
      }
    }
  return std::nullopt;
}

}  // namespace

std::optional<MonotoneMap> exists_along(StructureContext& ctx, Obj c, Obj b) {
  return adjoint_of_weakening(ctx, c, b, true);
}

std::optional<MonotoneMap> forall_along(StructureContext& ctx, Obj c, Obj b) {
  return adjoint_of_weakening(ctx, c, b, false);
}

std::optional<std::string> exists_clauses(StructureContext& ctx, const Quantifier& ex, bool* skipped) {
  std::map<std::pair<Obj, Obj>, QuantFrame> frames;
  if (auto v = quant_frames(ctx, ex, true, skipped, frames)) return v;
  // Frobenius: E(alpha /\ P(pr1) beta) = E(alpha) /\ beta
  for (const auto& [key, fr] : frames) {
    const auto& ec = fr.fc->elements();
    const auto& ecb = fr.fcb->elements();
    if (!ctx.budget().spend(ec.size() * ecb.size())) {
      *skipped = true;
      return std::nullopt;
    }
    for (std::size_t j = 0; j < ecb.size(); ++j)
      for (std::size_t i = 0; i < ec.size(); ++i) {
        const Elem lhs = fr.q[fr.fcb->index(fr.fcb->meet(ecb[j], fr.weak[i]))];
        const Elem rhs = fr.fc->meet(fr.q[j], ec[i]);
        if (lhs != rhs)
          return "Frobenius fails over " + lbl(ctx, fr.c) + " x " + lbl(ctx, fr.b) + " at alpha=" +
                 fr.fcb->poset().label(ecb[j]) + ", beta=" + fr.fc->poset().label(ec[i]);
      }
  }
  return beck_chevalley(ctx, frames, skipped, "exists");
}

std::optional<std::string> forall_clauses(StructureContext& ctx, const Quantifier& all, bool* skipped,
                                          bool* frobenius) {
  std::map<std::pair<Obj, Obj>, QuantFrame> frames;
  if (auto v = quant_frames(ctx, all, false, skipped, frames)) return v;
  if (auto v = beck_chevalley(ctx, frames, skipped, "forall")) return v;
  // P(pr1)(gamma /\ A beta) = P(pr1) gamma /\ beta, recorded as a flag only
  bool frob = true;
  const auto& C = ctx.base();
  for (const auto& [key, fr] : frames) {
    if (!frob) break;
    const auto& ec = fr.fc->elements();
    const auto& ecb = fr.fcb->elements();
    if (!ctx.budget().spend(ec.size() * ecb.size())) {
      *skipped = true;
      frob = false;
      break;
    }
    const auto w = ctx.doctrine().reindex(C.pr1(fr.c, fr.b));
    for (std::size_t i = 0; i < ec.size() && frob; ++i)
      for (std::size_t j = 0; j < ecb.size() && frob; ++j)
        frob = w(fr.fc->meet(ec[i], fr.q[j])) == fr.fcb->meet(fr.weak[i], ecb[j]);
  }
  if (frobenius) *frobenius = frob;
  return std::nullopt;
}

std::optional<std::pair<Obj, Elem>> weak_power_object(StructureContext& ctx, Obj a, bool* undecided) {
  if (auto it = ctx.power_memo.find(a); it != ctx.power_memo.end()) return it->second;
  const Category& C = ctx.base();
  for (Obj omega : ctx.homs().objects()) {
    const auto& fo = ctx.ops(C.product(a, omega));
    if (!fo.enumerable()) {
      *undecided = true;
      continue;
    }
    for (Elem in : fo.elements()) {
      bool sk = false;
      if (!weak_power_clauses(ctx, a, omega, in, &sk)) {
        if (sk) {
          *undecided = true;
          continue;
        }
        return ctx.power_memo[a] = std::pair{omega, in};
      }
      if (ctx.budget().exhausted()) return std::nullopt;
    }
  }
  if (!*undecided) ctx.power_memo[a] = std::nullopt;
  return std::nullopt;
}

std::optional<std::string> weak_power_clauses(StructureContext& ctx, Obj a, Obj omega, Elem in,
                                              bool* skipped) {
  const Category& C = ctx.base();
  for (Obj b : ctx.homs().objects()) {
    const auto& fab = ctx.ops(C.product(a, b));
    const auto& hom = ctx.homs()(b, omega);
    if (!fab.enumerable() || !hom) {
      *skipped = true;
      continue;
    }
    if (!ctx.budget().spend(hom->size() + fab.elements().size())) {
      *skipped = true;
      return std::nullopt;
    }
    std::vector<std::uint8_t> hit(fab.elements().size(), 0);
    for (const Arrow& u : *hom) hit[fab.index(ctx.doctrine().reindex(cross(C, C.identity(a), u))(in))] = 1;
    for (std::size_t i = 0; i < hit.size(); ++i)
      if (!hit[i])
        return "no {phi} : " + lbl(ctx, b) + " -> " + lbl(ctx, omega) + " for phi=" +
               fab.poset().label(fab.elements()[i]);
  }
  return std::nullopt;
}

}  // namespace doctrina
