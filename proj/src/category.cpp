#include "doctrina/category.hpp"

#include <algorithm>
#include <unordered_map>

#include "doctrina/error.hpp"

namespace doctrina {

// ---- Category defaults ----

std::string Category::arrow_label(const Arrow& f) const {
  std::string s = object_label(f.dom) + "->" + object_label(f.cod) + "[";
  for (std::size_t i = 0; i < f.rep.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(f.rep[i]);
  }
  return s + "]";
}

std::optional<Obj> Category::find_object(std::string_view label) const {
  for (Obj a : objects())
    if (object_label(a) == label) return a;
  return std::nullopt;
}

namespace {

[[noreturn]] void no_products(const Category&) {
  fail(Errc::PrerequisiteMissing, "category has no chosen finite products");
}

}  // namespace

Obj Category::terminal() const { no_products(*this); }
Arrow Category::bang(Obj) const { no_products(*this); }
Obj Category::product(Obj, Obj) const { no_products(*this); }
Arrow Category::pr1(Obj, Obj) const { no_products(*this); }
Arrow Category::pr2(Obj, Obj) const { no_products(*this); }
Arrow Category::pair(const Arrow&, const Arrow&) const { no_products(*this); }

Arrow cross(const Category& c, const Arrow& f, const Arrow& g) {
  return c.pair(c.compose(f, c.pr1(f.dom, g.dom)), c.compose(g, c.pr2(f.dom, g.dom)));
}

Arrow diagonal(const Category& c, Obj a) { return c.pair(c.identity(a), c.identity(a)); }

Arrow assoc_left(const Category& c, Obj x, Obj y, Obj a) {
  const Obj ya = c.product(y, a);
  const Arrow p1 = c.pr1(x, ya);
  const Arrow p2 = c.pr2(x, ya);
  const Arrow xy = c.pair(p1, c.compose(c.pr1(y, a), p2));
  return c.pair(xy, c.compose(c.pr2(y, a), p2));
}

Arrow assoc_right(const Category& c, Obj x, Obj y, Obj a) {
  const Obj xy = c.product(x, y);
  const Arrow q1 = c.pr1(xy, a);
  const Arrow q2 = c.pr2(xy, a);
  const Arrow ya = c.pair(c.compose(c.pr2(x, y), q1), q2);
  return c.pair(c.compose(c.pr1(x, y), q1), ya);
}

bool is_terminal(const Category& c, Obj t, std::size_t cap) {
  for (Obj x : c.objects()) {
    auto h = c.hom(x, t, cap);
    if (!h || h->size() != 1) return false;
  }
  return true;
}

// ---- TableCategory ----

std::vector<Obj> TableCategory::objects() const {
  std::vector<Obj> out(objects_.size());
  for (Obj a = 0; a < out.size(); ++a) out[a] = a;
  return out;
}

std::optional<Obj> TableCategory::find_object(std::string_view label) const {
  for (Obj a = 0; a < objects_.size(); ++a)
    if (objects_[a] == label) return a;
  return std::nullopt;
}

Arrow TableCategory::arrow(std::uint32_t index) const {
  const auto& a = arrows_.at(index);
  return Arrow{a.dom, a.cod, {index}};
}

std::optional<Arrow> TableCategory::find_arrow(std::string_view name) const {
  for (std::uint32_t i = 0; i < arrows_.size(); ++i)
    if (arrows_[i].name == name) return arrow(i);
  return std::nullopt;
}

Arrow TableCategory::compose(const Arrow& g, const Arrow& f) const {
  const auto h = compose_[g.rep.at(0) * arrows_.size() + f.rep.at(0)];
  if (h < 0)
    fail(Errc::CompositionUndefined,
         arrows_[g.rep[0]].name + " . " + arrows_[f.rep[0]].name + " is undefined");
  return arrow(static_cast<std::uint32_t>(h));
}

std::optional<std::vector<Arrow>> TableCategory::hom(Obj a, Obj b, std::size_t cap) const {
  const auto& ids = hom_[a * objects_.size() + b];
  if (ids.size() > cap) return std::nullopt;
  std::vector<Arrow> out;
  out.reserve(ids.size());
  for (auto i : ids) out.push_back(arrow(i));
  return out;
}

Obj TableCategory::terminal() const {
  if (!terminal_) fail(Errc::PrerequisiteMissing, "category has no terminal object");
  return *terminal_;
}

Arrow TableCategory::bang(Obj a) const {
  const auto& h = hom_[a * objects_.size() + terminal()];
  if (h.size() != 1) fail(Errc::TerminalNotUnique, objects_[a] + " has no unique arrow into the terminal");
  return arrow(h.front());
}

const TableCategory::ProductInfo& TableCategory::product_info(Obj a, Obj b) const {
  const auto& p = products_.at(a * objects_.size() + b);
  if (!p) fail(Errc::PrerequisiteMissing, "no product of " + objects_[a] + " and " + objects_[b]);
  return *p;
}

Obj TableCategory::product(Obj a, Obj b) const { return product_info(a, b).object; }
Arrow TableCategory::pr1(Obj a, Obj b) const { return arrow(product_info(a, b).pr1); }
Arrow TableCategory::pr2(Obj a, Obj b) const { return arrow(product_info(a, b).pr2); }

Arrow TableCategory::pair(const Arrow& f, const Arrow& g) const {
  auto it = pairing_.find({f.rep.at(0), g.rep.at(0)});
  if (it == pairing_.end())
    fail(Errc::ProductUMPViolation, "no pairing of " + arrows_[f.rep[0]].name + " and " + arrows_[g.rep[0]].name);
  return arrow(it->second);
}

// Shared by the raw-table loader and the semilattice constructor: completes
// hom lists and checks every law.
struct TableCategoryBuilder {
  TableCategory c;
  std::unordered_map<std::string, std::uint32_t> arrow_index;
  std::unordered_map<std::string, Obj> object_index;

  std::size_t na() const { return c.arrows_.size(); }
  std::vector<std::uint32_t>& ids() { return c.identities_; }
  std::size_t no() const { return c.objects_.size(); }

  void add_object(const std::string& name) {
    if (!object_index.emplace(name, static_cast<Obj>(no())).second) fail(Errc::DuplicateName, "object " + name);
    c.objects_.push_back(name);
  }

  Obj object(const std::string& name) const {
    auto it = object_index.find(name);
    if (it == object_index.end()) fail(Errc::UnresolvedReference, "object " + name);
    return it->second;
  }

  std::uint32_t add_arrow(const std::string& name, Obj dom, Obj cod) {
    auto id = static_cast<std::uint32_t>(na());
    if (!arrow_index.emplace(name, id).second) fail(Errc::DuplicateName, "arrow " + name);
    c.arrows_.push_back({name, dom, cod});
    return id;
  }

  std::uint32_t arrow(const std::string& name) const {
    auto it = arrow_index.find(name);
    if (it == arrow_index.end()) fail(Errc::UnresolvedReference, "arrow " + name);
    return it->second;
  }

  void start_compose() {
    c.compose_.assign(na() * na(), -1);
    for (std::uint32_t f = 0; f < na(); ++f) {
      const auto& a = c.arrows_[f];
      c.compose_[c.identities_[a.cod] * na() + f] = static_cast<std::int32_t>(f);
      c.compose_[f * na() + c.identities_[a.dom]] = static_cast<std::int32_t>(f);
    }
  }

  void set_compose(std::uint32_t g, std::uint32_t f, std::uint32_t h) {
    const auto& ag = c.arrows_[g];
    const auto& af = c.arrows_[f];
    const auto& ah = c.arrows_[h];
    if (af.cod != ag.dom)
      fail(Errc::CompositionUndefined, ag.name + " . " + af.name + " declared but cod " + af.name + " != dom " + ag.name);
    if (ah.dom != af.dom || ah.cod != ag.cod)
      fail(Errc::CompositionUndefined, ag.name + " . " + af.name + " = " + ah.name + " has the wrong endpoints");
    auto& slot = c.compose_[g * na() + f];
    if (slot >= 0 && slot != static_cast<std::int32_t>(h))
      fail(Errc::CompositionUndefined, ag.name + " . " + af.name + " declared twice with different results");
    slot = static_cast<std::int32_t>(h);
  }

  void finish() {
    const std::size_t n = na();
    for (std::uint32_t g = 0; g < n; ++g)
      for (std::uint32_t f = 0; f < n; ++f)
        if (c.arrows_[f].cod == c.arrows_[g].dom && c.compose_[g * n + f] < 0)
          fail(Errc::CompositionUndefined, c.arrows_[g].name + " . " + c.arrows_[f].name + " has no composite");
    for (std::uint32_t f = 0; f < n; ++f)
      for (std::uint32_t g = 0; g < n; ++g) {
        if (c.arrows_[f].cod != c.arrows_[g].dom) continue;
        const auto gf = static_cast<std::size_t>(c.compose_[g * n + f]);
        for (std::uint32_t h = 0; h < n; ++h) {
          if (c.arrows_[g].cod != c.arrows_[h].dom) continue;
          const auto hg = static_cast<std::size_t>(c.compose_[h * n + g]);
          if (c.compose_[h * n + gf] != c.compose_[hg * n + f])
            fail(Errc::AssociativityViolation,
                 "(" + c.arrows_[h].name + " . " + c.arrows_[g].name + ") . " + c.arrows_[f].name);
        }
      }
    c.hom_.assign(no() * no(), {});
    for (std::uint32_t f = 0; f < n; ++f) c.hom_[c.arrows_[f].dom * no() + c.arrows_[f].cod].push_back(f);
  }

  void set_terminal(Obj t) {
    for (Obj a = 0; a < no(); ++a)
      if (c.hom_[a * no() + t].size() != 1)
        fail(Errc::TerminalNotUnique, c.objects_[a] + " has " + std::to_string(c.hom_[a * no() + t].size()) +
                                          " arrows into " + c.objects_[t]);
    c.terminal_ = t;
    c.products_.assign(no() * no(), std::nullopt);
  }

  void set_product(Obj a, Obj b, Obj p, std::uint32_t p1, std::uint32_t p2) {
    const auto& i1 = c.arrows_[p1];
    const auto& i2 = c.arrows_[p2];
    if (i1.dom != p || i1.cod != a || i2.dom != p || i2.cod != b)
      fail(Errc::ProductUMPViolation, "projections of " + c.objects_[a] + " x " + c.objects_[b] + " have wrong endpoints");
    c.products_[a * no() + b] = TableCategory::ProductInfo{p, p1, p2};
  }

  // Pairing is the inverse of u |-> (pr1 u, pr2 u) on hom(C, A x B).
  void check_products() {
    const std::size_t n = na();
    for (Obj a = 0; a < no(); ++a)
      for (Obj b = 0; b < no(); ++b) {
        const auto& info = c.products_[a * no() + b];
        if (!info) fail(Errc::ProductUMPViolation, "no product declared for " + c.objects_[a] + " x " + c.objects_[b]);
        for (Obj x = 0; x < no(); ++x) {
          std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> seen;
          for (auto u : c.hom_[x * no() + info->object]) {
            auto f = static_cast<std::uint32_t>(c.compose_[info->pr1 * n + u]);
            auto g = static_cast<std::uint32_t>(c.compose_[info->pr2 * n + u]);
            if (!seen.emplace(std::make_pair(f, g), u).second)
              fail(Errc::ProductUMPViolation, "pairing of " + c.arrows_[f].name + " and " + c.arrows_[g].name +
                                                  " is not unique");
          }
          for (auto f : c.hom_[x * no() + a])
            for (auto g : c.hom_[x * no() + b]) {
              auto it = seen.find({f, g});
              if (it == seen.end())
                fail(Errc::ProductUMPViolation, "no pairing of " + c.arrows_[f].name + " and " + c.arrows_[g].name);
              c.pairing_[{f, g}] = it->second;
            }
        }
      }
    compute_strictness();
  }

  void compute_strictness() {
    const std::size_t n = na();
    const Obj t = *c.terminal_;
    auto P = [&](Obj a, Obj b) -> const TableCategory::ProductInfo& { return *c.products_[a * no() + b]; };
    auto comp = [&](std::uint32_t g, std::uint32_t f) { return static_cast<std::uint32_t>(c.compose_[g * n + f]); };
    bool units = true;
    for (Obj a = 0; a < no() && units; ++a) {
      const auto& l = P(t, a);
      const auto& r = P(a, t);
      units = l.object == a && r.object == a && l.pr2 == c.identities_[a] && r.pr1 == c.identities_[a];
    }
    c.strict_units_ = units;
    bool assoc = true;
    for (Obj x = 0; x < no() && assoc; ++x)
      for (Obj y = 0; y < no() && assoc; ++y)
        for (Obj a = 0; a < no() && assoc; ++a) {
          const auto& ya = P(y, a);
          const auto& right = P(x, ya.object);
          const auto& xy = P(x, y);
          const auto& left = P(xy.object, a);
          assoc = right.object == left.object && right.pr1 == comp(xy.pr1, left.pr1) &&
                  comp(ya.pr1, right.pr2) == comp(xy.pr2, left.pr1) && comp(ya.pr2, right.pr2) == left.pr2;
        }
    c.strict_assoc_ = assoc;
  }
};

std::shared_ptr<const TableCategory> validate_category_with_products(const RawCategory& raw) {
  TableCategoryBuilder b;
  for (const auto& o : raw.objects) b.add_object(o);
  for (Obj a = 0; a < b.no(); ++a) b.ids().push_back(b.add_arrow("id_" + raw.objects[a], a, a));
  for (const auto& d : raw.arrows) b.add_arrow(d.name, b.object(d.dom), b.object(d.cod));
  b.start_compose();
  for (const auto& d : raw.compose) b.set_compose(b.arrow(d.g), b.arrow(d.f), b.arrow(d.result));
  b.finish();
  if (raw.terminal || !raw.products.empty()) {
    if (!raw.terminal) fail(Errc::TerminalNotUnique, "products declared without a terminal object");
    b.set_terminal(b.object(*raw.terminal));
    for (const auto& p : raw.products)
      b.set_product(b.object(p.a), b.object(p.b), b.object(p.object), b.arrow(p.pr1), b.arrow(p.pr2));
    b.check_products();
  }
  return std::shared_ptr<const TableCategory>(new TableCategory(std::move(b.c)));
}

std::shared_ptr<const TableCategory> semilattice_to_category(const PosetRef& lattice) {
  const auto& L = *lattice;
  const auto els = L.elements();
  const std::size_t n = els.size();
  auto top = L.top();
  if (!top) fail(Errc::MeetsRequired, "semilattice base needs a top");
  std::vector<std::size_t> meet(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      auto m = L.meet(els[a], els[b]);
      if (!m) fail(Errc::MeetsRequired, "no meet of " + L.label(els[a]) + " and " + L.label(els[b]));
      meet[a * n + b] = *L.index_of(*m);
    }

  TableCategoryBuilder b;
  for (Elem e : els) b.add_object(L.label(e));
  std::vector<std::int64_t> edge(n * n, -1);
  b.ids().resize(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t c = 0; c < n; ++c)
      if (L.leq(els[a], els[c])) {
        auto id = b.add_arrow(L.label(els[a]) + "<=" + L.label(els[c]), static_cast<Obj>(a), static_cast<Obj>(c));
        edge[a * n + c] = id;
        if (a == c) b.ids()[a] = id;
      }
  b.start_compose();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t c = 0; c < n; ++c)
        if (edge[a * n + m] >= 0 && edge[m * n + c] >= 0)
          b.set_compose(static_cast<std::uint32_t>(edge[m * n + c]), static_cast<std::uint32_t>(edge[a * n + m]),
                        static_cast<std::uint32_t>(edge[a * n + c]));
  b.finish();
  b.set_terminal(static_cast<Obj>(*L.index_of(*top)));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t c = 0; c < n; ++c) {
      const auto m = meet[a * n + c];
      b.set_product(static_cast<Obj>(a), static_cast<Obj>(c), static_cast<Obj>(m),
                    static_cast<std::uint32_t>(edge[m * n + a]), static_cast<std::uint32_t>(edge[m * n + c]));
    }
  b.check_products();
  return std::shared_ptr<const TableCategory>(new TableCategory(std::move(b.c)));
}

// ---- generic law checks ----

namespace {

using HomCache = std::map<std::pair<Obj, Obj>, std::optional<std::vector<Arrow>>>;

const std::optional<std::vector<Arrow>>& cached_hom(const Category& c, HomCache& cache, Obj a, Obj b,
                                                    std::size_t cap) {
  auto it = cache.find({a, b});
  if (it == cache.end()) it = cache.emplace(std::make_pair(a, b), c.hom(a, b, cap)).first;
  return it->second;
}

}  // namespace

void validate_category(const Category& c, const Limits& limits, Report& report) {
  const auto objs = c.objects();
  HomCache cache;
  bool hom_skipped = false;
  Budget budget(limits.search_budget);

  for (Obj a : objs)
    for (Obj b : objs) {
      const auto& h = cached_hom(c, cache, a, b, limits.hom_cap);
      if (!h) {
        hom_skipped = true;
        continue;
      }
      for (const Arrow& f : *h) {
        if (f.dom != a || f.cod != b)
          fail(Errc::CompositionUndefined, c.arrow_label(f) + " listed in the wrong hom-set");
        if (c.compose(c.identity(b), f) != f || c.compose(f, c.identity(a)) != f)
          fail(Errc::AssociativityViolation, "unit law fails at " + c.arrow_label(f));
      }
    }
  if (hom_skipped)
    report.skip("category: unit laws", "some probe hom-sets exceed the hom cap");
  else
    report.pass("category: unit laws");

  for (Obj a : objs)
    for (Obj b : objs)
      for (Obj d : objs) {
        const auto& hf = cached_hom(c, cache, a, b, limits.hom_cap);
        const auto& hg = cached_hom(c, cache, b, d, limits.hom_cap);
        if (!hf || !hg) continue;
        for (const Arrow& f : *hf)
          for (const Arrow& g : *hg) {
            const Arrow gf = c.compose(g, f);
            if (gf.dom != a || gf.cod != d)
              fail(Errc::CompositionUndefined, c.arrow_label(g) + " . " + c.arrow_label(f) + " has wrong endpoints");
            for (Obj e : objs) {
              const auto& hh = cached_hom(c, cache, d, e, limits.hom_cap);
              if (!hh) continue;
              if (!budget.spend(hh->size())) break;
              for (const Arrow& h : *hh)
                if (c.compose(h, gf) != c.compose(c.compose(h, g), f))
                  fail(Errc::AssociativityViolation, "(" + c.arrow_label(h) + " . " + c.arrow_label(g) + ") . " +
                                                         c.arrow_label(f));
            }
          }
      }
  if (budget.exhausted() || hom_skipped)
    report.skip("category: associativity", "checked until the search budget or hom cap was reached");
  else
    report.pass("category: associativity");

  if (!c.has_products()) return;

  const Obj t = c.terminal();
  for (Obj a : objs) {
    auto h = c.hom(a, t, limits.hom_cap);
    if (!h || h->size() != 1)
      fail(Errc::TerminalNotUnique, c.object_label(a) + " does not have exactly one arrow into the terminal");
    if (c.bang(a) != h->front()) fail(Errc::TerminalNotUnique, "chosen bang differs at " + c.object_label(a));
  }
  report.pass("category: terminal");

  Budget ump(limits.search_budget);
  bool ump_skipped = false;
  for (Obj a : objs)
    for (Obj b : objs) {
      const Obj p = c.product(a, b);
      const Arrow p1 = c.pr1(a, b), p2 = c.pr2(a, b);
      if (p1.dom != p || p1.cod != a || p2.dom != p || p2.cod != b)
        fail(Errc::ProductUMPViolation, "projections of " + c.object_label(a) + " x " + c.object_label(b));
      for (Obj x : objs) {
        auto hp = c.hom(x, p, limits.hom_cap);
        const auto& ha = cached_hom(c, cache, x, a, limits.hom_cap);
        const auto& hb = cached_hom(c, cache, x, b, limits.hom_cap);
        if (!hp || !ha || !hb || !ump.spend(hp->size() + ha->size() * hb->size())) {
          ump_skipped = true;
          continue;
        }
        std::map<std::pair<Arrow, Arrow>, Arrow> seen;
        for (const Arrow& u : *hp)
          if (!seen.emplace(std::make_pair(c.compose(p1, u), c.compose(p2, u)), u).second)
            fail(Errc::ProductUMPViolation, "two arrows " + c.object_label(x) + " -> " + c.object_label(p) +
                                                " with the same projections");
        for (const Arrow& f : *ha)
          for (const Arrow& g : *hb) {
            auto it = seen.find({f, g});
            if (it == seen.end() || c.pair(f, g) != it->second)
              fail(Errc::ProductUMPViolation, "pairing of " + c.arrow_label(f) + " and " + c.arrow_label(g));
          }
      }
    }
  if (ump_skipped)
    report.skip("category: product UMP", "some probe triples exceed the hom cap or budget");
  else
    report.pass("category: product UMP");
}

// ---- functors ----

Functor identity_functor(CategoryRef c) {
  return Functor{c, c, [](Obj a) { return a; }, [](const Arrow& f) { return f; }};
}

Functor compose(const Functor& g, const Functor& f) {
  return Functor{f.source, g.target, [g, f](Obj a) { return g(f(a)); },
                 [g, f](const Arrow& h) { return g(f(h)); }};
}

std::optional<Arrow> product_comparison_inverse(const Functor& f, Obj a, Obj b, const Limits& limits) {
  const Category& S = *f.source;
  const Category& T = *f.target;
  const Arrow cmp = T.pair(f(S.pr1(a, b)), f(S.pr2(a, b)));
  if (cmp.dom == cmp.cod && cmp == T.identity(cmp.dom)) return cmp;
  auto h = T.hom(cmp.cod, cmp.dom, limits.hom_cap);
  if (!h) return std::nullopt;
  for (const Arrow& u : *h)
    if (T.compose(u, cmp) == T.identity(cmp.dom) && T.compose(cmp, u) == T.identity(cmp.cod)) return u;
  return std::nullopt;
}

FunctorCheck validate_functor(const Functor& F, bool require_products, const Limits& limits, Report& report) {
  const Category& S = *F.source;
  const Category& T = *F.target;
  const auto objs = S.objects();
  HomCache cache;
  Budget budget(limits.search_budget);
  bool skipped = false;

  for (Obj a : objs)
    if (F(S.identity(a)) != T.identity(F(a)))
      fail(Errc::FunctorLawViolation, "F(id) != id at " + S.object_label(a));
  for (Obj a : objs)
    for (Obj b : objs) {
      const auto& hf = cached_hom(S, cache, a, b, limits.hom_cap);
      if (!hf) {
        skipped = true;
        continue;
      }
      for (const Arrow& f : *hf) {
        const Arrow Ff = F(f);
        if (Ff.dom != F(a) || Ff.cod != F(b))
          fail(Errc::FunctorLawViolation, "F(" + S.arrow_label(f) + ") has the wrong endpoints");
      }
    }
  for (Obj a : objs)
    for (Obj b : objs) {
      const auto& hf = cached_hom(S, cache, a, b, limits.hom_cap);
      if (!hf) continue;
      for (Obj c : objs) {
        const auto& hg = cached_hom(S, cache, b, c, limits.hom_cap);
        if (!hg) {
          skipped = true;
          continue;
        }
        if (!budget.spend(hf->size() * hg->size())) {
          skipped = true;
          continue;
        }
        for (const Arrow& f : *hf)
          for (const Arrow& g : *hg)
            if (F(S.compose(g, f)) != T.compose(F(g), F(f)))
              fail(Errc::FunctorLawViolation,
                   "F(" + S.arrow_label(g) + " . " + S.arrow_label(f) + ") != F(g) . F(f)");
      }
    }
  if (skipped)
    report.skip("functor: laws", "partially checked (hom cap or budget)");
  else
    report.pass("functor: laws");

  FunctorCheck out;
  if (!S.has_products() || !T.has_products()) {
    if (require_products) fail(Errc::ProductsNotPreserved, "source or target lacks chosen products");
    return out;
  }
  bool preserves = is_terminal(T, F(S.terminal()), limits.hom_cap);
  bool strict = F(S.terminal()) == T.terminal();
  std::string witness = preserves ? "" : "F(t) is not terminal";
  for (Obj a : objs)
    for (Obj b : objs) {
      if (!preserves) break;
      if (!product_comparison_inverse(F, a, b, limits)) {
        preserves = false;
        witness = "comparison for " + S.object_label(a) + " x " + S.object_label(b) + " is not invertible";
      }
      strict = strict && F(S.product(a, b)) == T.product(F(a), F(b)) && F(S.pr1(a, b)) == T.pr1(F(a), F(b)) &&
               F(S.pr2(a, b)) == T.pr2(F(a), F(b));
    }
  out.preserves_products = preserves;
  out.strict_products = preserves && strict;
  if (require_products && !preserves) fail(Errc::ProductsNotPreserved, witness);
  if (preserves) report.pass("functor: preserves products", out.strict_products ? "strictly" : "up to iso");
  return out;
}

void validate_nat_transf(const NatTransf& eta, const Limits& limits, Report& report) {
  const Category& S = *eta.from.source;
  const Category& T = *eta.from.target;
  bool skipped = false;
  const auto objs = S.objects();
  for (Obj a : objs) {
    const Arrow c = eta(a);
    if (c.dom != eta.from(a) || c.cod != eta.to(a))
      fail(Errc::NaturalitySquareViolation, "component at " + S.object_label(a) + " has the wrong endpoints");
  }
  for (Obj a : objs)
    for (Obj b : objs) {
      auto h = S.hom(a, b, limits.hom_cap);
      if (!h) {
        skipped = true;
        continue;
      }
      for (const Arrow& f : *h)
        if (T.compose(eta.to(f), eta(a)) != T.compose(eta(b), eta.from(f)))
          fail(Errc::NaturalitySquareViolation, "square fails at " + S.arrow_label(f));
    }
  if (skipped)
    report.skip("natural transformation: squares", "some hom-sets exceed the hom cap");
  else
    report.pass("natural transformation: squares");
}

std::optional<std::string> functor_difference(const Functor& f, const Functor& g, const Limits& limits) {
  const Category& S = *f.source;
  const auto objs = S.objects();
  for (Obj a : objs)
    if (f(a) != g(a)) return "object " + S.object_label(a);
  for (Obj a : objs)
    for (Obj b : objs) {
      auto h = S.hom(a, b, limits.hom_cap);
      if (!h) continue;
      for (const Arrow& x : *h)
        if (f(x) != g(x)) return "arrow " + S.arrow_label(x);
    }
  return std::nullopt;
}

}  // namespace doctrina

namespace doctrina {

Functor thin_functor(CategoryRef source, CategoryRef target, std::vector<Obj> object_map) {
  auto objs = std::make_shared<const std::vector<Obj>>(std::move(object_map));
  auto tgt = target;
  return Functor{std::move(source), std::move(target), [objs](Obj a) { return objs->at(a); },
                 [objs, tgt](const Arrow& f) {
                   auto h = tgt->hom(objs->at(f.dom), objs->at(f.cod), 2);
                   if (!h || h->size() != 1)
                     fail(Errc::FunctorLawViolation, "no unique image arrow " + tgt->object_label(objs->at(f.dom)) +
                                                         " -> " + tgt->object_label(objs->at(f.cod)));
                   return h->front();
                 }};
}

}  // namespace doctrina
