#include "doctrina/spec.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "doctrina/cli.hpp"
#include "doctrina/error.hpp"
#include "doctrina/models.hpp"

namespace doctrina {

namespace {

// ---- schema -------------------------------------------------------------

enum class Shape {
  list,        // key = v, v, ...
  single,      // key = v
  arg_list,    // key A = v, v, ...
  arg_single,  // key A = v
  covers,      // key = a < b, c < d
  arrow_decl,  // key f : A -> B
  compose,     // key g . f = h
  product,     // key A B = P, p1, p2
};

struct KeySpec {
  std::string_view key;
  Shape shape;
  bool repeat;
};

struct BlockSpec {
  std::string_view kind;
  std::vector<KeySpec> keys;
};

const std::vector<BlockSpec>& block_specs() {
  static const std::vector<BlockSpec> specs{
      {"poset", {{"elements", Shape::list, false}, {"covers", Shape::covers, true}}},
      {"category",
       {{"semilattice", Shape::single, false},
        {"objects", Shape::list, false},
        {"arrow", Shape::arrow_decl, true},
        {"compose", Shape::compose, true},
        {"terminal", Shape::single, false},
        {"product", Shape::product, true}}},
      {"doctrine",
       {{"base", Shape::single, false}, {"fiber", Shape::arg_single, true}, {"reindex", Shape::arg_list, true}}},
      {"morphism",
       {{"identity", Shape::single, false},
        {"source", Shape::single, false},
        {"target", Shape::single, false},
        {"object", Shape::arg_single, true},
        {"arrow", Shape::arg_single, true},
        {"component", Shape::arg_list, true}}},
      {"comonad",
       {{"identity", Shape::single, false},
        {"doctrine", Shape::single, false},
        {"reader", Shape::single, false},
        {"axiom", Shape::single, false},
        {"functor", Shape::arg_single, true},
        {"fmap", Shape::arg_single, true},
        {"k", Shape::arg_list, true},
        {"gamma", Shape::arg_single, true},
        {"epsilon", Shape::arg_single, true}}},
  };
  return specs;
}

const BlockSpec* block_spec(std::string_view kind) {
  for (const auto& b : block_specs())
    if (b.kind == kind) return &b;
  return nullptr;
}

const KeySpec* key_spec(const BlockSpec& b, std::string_view key) {
  for (const auto& k : b.keys)
    if (k.key == key) return &k;
  return nullptr;
}

// builtin keys: name -> single (true) or list (false)
const std::map<std::string, std::map<std::string, bool>>& builtin_keys() {
  static const std::map<std::string, std::map<std::string, bool>> keys{
      {"powerset", {{"probes", false}}},
      {"lt", {{"atoms", false}, {"axioms", false}, {"cap", true}}},
  };
  return keys;
}

std::string at_line(std::size_t line);

// ---- tokens -------------------------------------------------------------

enum class Tok { word, string, punct, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  std::size_t col = 0;  // 1-based
};

bool is_word_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && std::string_view("{}[],=:.<#\"").find(c) == std::string_view::npos;
}

[[noreturn]] void syntax(std::size_t line, std::size_t col, const std::string& what) {
  fail(Errc::SyntaxError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what);
}

std::vector<Token> tokenize(std::string_view s, std::size_t line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') break;
    const std::size_t col = i + 1;
    if (s.substr(i, 2) == "->") {
      out.push_back({Tok::punct, "->", col});
      i += 2;
    } else if (c == '"') {
      std::string text;
      ++i;
      bool closed = false;
      while (i < s.size()) {
        if (s[i] == '"') {
          closed = true;
          ++i;
          break;
        }
        if (s[i] == '\\') {
          if (i + 1 >= s.size()) syntax(line, i + 1, "dangling escape");
          const char e = s[i + 1];
          if (e == 'n')
            text += '\n';
          else if (e == '"' || e == '\\')
            text += e;
          else
            syntax(line, i + 1, std::string("unknown escape \\") + e);
          i += 2;
          continue;
        }
        text += s[i++];
      }
      if (!closed) syntax(line, col, "unterminated string");
      out.push_back({Tok::string, std::move(text), col});
    } else if (is_word_char(c)) {
      std::size_t j = i;
      while (j < s.size() && is_word_char(s[j]) && s.substr(j, 2) != "->") ++j;
      out.push_back({Tok::word, std::string(s.substr(i, j - i)), col});
      i = j;
    } else {
      out.push_back({Tok::punct, std::string(1, c), col});
      ++i;
    }
  }
  out.push_back({Tok::end, "", s.size() + 1});
  return out;
}

class Cursor {
 public:
  Cursor(std::vector<Token> toks, std::size_t line) : toks_(std::move(toks)), line_(line) {}

  const Token& peek() const { return toks_[pos_]; }
  bool at_end() const { return peek().kind == Tok::end; }

  [[noreturn]] void error(const std::string& what) const { syntax(line_, peek().col, what); }

  std::string name(std::string_view what) {
    const Token& t = peek();
    if (t.kind != Tok::word && t.kind != Tok::string) error("expected " + std::string(what));
    ++pos_;
    return t.text;
  }

  bool accept(std::string_view punct) {
    if (peek().kind == Tok::punct && peek().text == punct) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(std::string_view punct) {
    if (!accept(punct)) error("expected '" + std::string(punct) + "'");
  }

  void finish() {
    if (!at_end()) error("unexpected '" + peek().text + "'");
  }

  // v, v, ... up to the end of the line (possibly empty)
  std::vector<std::string> names_to_end(std::string_view what) {
    std::vector<std::string> out;
    if (at_end()) return out;
    out.push_back(name(what));
    while (accept(",")) out.push_back(name(what));
    finish();
    return out;
  }

  // [v, v, ...]
  std::vector<std::string> bracket_list(std::string_view what) {
    expect("[");
    std::vector<std::string> out;
    if (accept("]")) return out;
    out.push_back(name(what));
    while (accept(",")) out.push_back(name(what));
    expect("]");
    return out;
  }

  std::size_t line() const { return line_; }

 private:
  std::vector<Token> toks_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

SpecEntry parse_entry(Cursor& cur, const KeySpec& ks, std::string key) {
  SpecEntry e;
  e.key = std::move(key);
  e.line = cur.line();
  switch (ks.shape) {
    case Shape::list:
      cur.expect("=");
      e.values = cur.names_to_end("a value");
      break;
    case Shape::single:
      cur.expect("=");
      e.values.push_back(cur.name("a value"));
      cur.finish();
      break;
    case Shape::arg_list:
      e.args.push_back(cur.name("a name"));
      cur.expect("=");
      e.values = cur.names_to_end("a value");
      break;
    case Shape::arg_single:
      e.args.push_back(cur.name("a name"));
      cur.expect("=");
      e.values.push_back(cur.name("a value"));
      cur.finish();
      break;
    case Shape::covers:
      cur.expect("=");
      if (cur.at_end()) break;
      do {
        e.values.push_back(cur.name("an element"));
        cur.expect("<");
        e.values.push_back(cur.name("an element"));
      } while (cur.accept(","));
      cur.finish();
      break;
    case Shape::arrow_decl:
      e.args.push_back(cur.name("an arrow name"));
      cur.expect(":");
      e.values.push_back(cur.name("an object"));
      cur.expect("->");
      e.values.push_back(cur.name("an object"));
      cur.finish();
      break;
    case Shape::compose:
      e.args.push_back(cur.name("an arrow"));
      cur.expect(".");
      e.args.push_back(cur.name("an arrow"));
      cur.expect("=");
      e.values.push_back(cur.name("an arrow"));
      cur.finish();
      break;
    case Shape::product:
      e.args.push_back(cur.name("an object"));
      e.args.push_back(cur.name("an object"));
      cur.expect("=");
      e.values.push_back(cur.name("an object"));
      cur.expect(",");
      e.values.push_back(cur.name("an arrow"));
      cur.expect(",");
      e.values.push_back(cur.name("an arrow"));
      cur.finish();
      break;
  }
  return e;
}

// Which keys a finished block must have, by block kind and the variant chosen.
void check_block(const SpecBlock& b) {
  auto has = [&](std::string_view k) { return b.find(k) != nullptr; };
  auto missing = [&](std::string_view k) {
    syntax(b.line, 1, b.kind + " " + b.name + " needs '" + std::string(k) + "'");
  };
  auto only = [&](std::string_view k) {
    if (b.entries.size() != 1) syntax(b.entries[1].line, 1, "'" + std::string(k) + "' stands alone in " + b.name);
  };
  if (b.kind == "poset") {
    if (!has("elements")) missing("elements");
  } else if (b.kind == "category") {
    if (has("semilattice"))
      only("semilattice");
    else if (!has("objects"))
      missing("objects");
  } else if (b.kind == "doctrine") {
    if (!has("base")) missing("base");
  } else if (b.kind == "morphism") {
    if (has("identity"))
      only("identity");
    else {
      if (!has("source")) missing("source");
      if (!has("target")) missing("target");
    }
  } else if (b.kind == "comonad") {
    if (has("identity")) {
      only("identity");
      return;
    }
    if (!has("doctrine")) missing("doctrine");
    const bool generic = has("functor") || has("fmap") || has("k") || has("gamma") || has("epsilon");
    if (has("reader") == generic)
      syntax(b.line, 1, "comonad " + b.name + " needs either 'reader' or the component tables");
    if (has("axiom") && !has("reader")) syntax(b.find("axiom")->line, 1, "'axiom' goes with 'reader'");
  }
}

// Names must refer to earlier blocks of the right kind; poset elements are
// distinct and covers mention only listed elements.
void check_references(const SpecBlock& b, const std::map<std::string, std::string>& kinds) {
  auto need = [&](const SpecEntry& e, const std::string& name, std::initializer_list<std::string_view> want) {
    const auto it = kinds.find(name);
    if (it != kinds.end())
      for (auto w : want)
        if (it->second == w) return;
    fail(Errc::UnresolvedReference,
         at_line(e.line) + "'" + name + "' is not a " + std::string(*want.begin()) + " defined above");
  };
  for (const auto& e : b.entries) {
    if (b.kind == "poset" && e.key == "elements") {
      std::set<std::string> seen;
      for (const auto& v : e.values)
        if (!seen.insert(v).second) fail(Errc::DuplicateName, at_line(e.line) + "element " + v + " listed twice");
    }
    if (b.kind == "poset" && e.key == "covers") {
      const auto& els = b.find("elements")->values;
      for (const auto& v : e.values)
        if (std::find(els.begin(), els.end(), v) == els.end())
          fail(Errc::UnresolvedReference, at_line(e.line) + "element " + v + " is not listed");
    }
    if (e.key == "semilattice" || (b.kind == "doctrine" && e.key == "fiber")) need(e, e.values[0], {"poset"});
    if (b.kind == "doctrine" && e.key == "base") need(e, e.values[0], {"category"});
    if (e.key == "source" || e.key == "target" || e.key == "identity" || (b.kind == "comonad" && e.key == "doctrine"))
      need(e, e.values[0], {"doctrine", "builtin"});
  }
}

SpecBlock parse_builtin(Cursor& cur) {
  SpecBlock b;
  b.kind = "builtin";
  b.line = cur.line();
  b.name = cur.name("a block name");
  const auto& all = builtin_keys();
  const std::size_t col = cur.peek().col;
  b.builtin = cur.name("powerset or lt");
  const auto kit = all.find(b.builtin);
  if (kit == all.end()) syntax(b.line, col, "unknown builtin '" + b.builtin + "'");
  while (!cur.at_end()) {
    const std::size_t kcol = cur.peek().col;
    SpecEntry e;
    e.line = b.line;
    e.key = cur.name("a key");
    const auto k = kit->second.find(e.key);
    if (k == kit->second.end()) syntax(b.line, kcol, "unknown key '" + e.key + "' for " + b.builtin);
    if (b.find(e.key)) fail(Errc::DuplicateName, "line " + std::to_string(b.line) + ": key " + e.key + " given twice");
    cur.expect("=");
    if (k->second)
      e.values.push_back(cur.name("a value"));
    else
      e.values = cur.bracket_list("a value");
    b.entries.push_back(std::move(e));
  }
  const std::string first = b.builtin == "powerset" ? "probes" : "atoms";
  if (!b.find(first)) syntax(b.line, 1, "builtin " + b.builtin + " needs '" + first + "'");
  return b;
}

// ---- printing -----------------------------------------------------------

std::string quote(const std::string& s) {
  bool bare = !s.empty() && s.find("->") == std::string::npos;
  for (char c : s) bare = bare && is_word_char(c);
  if (bare) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

std::string join(const std::vector<std::string>& v, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += quote(v[i]);
  }
  return out;
}

std::string print_entry(const SpecEntry& e, Shape shape) {
  std::string s = e.key;
  auto rhs = [&](const std::string& r) { s += r.empty() ? " =" : " = " + r; };
  switch (shape) {
    case Shape::list:
    case Shape::single:
      rhs(join(e.values, ", "));
      break;
    case Shape::arg_list:
    case Shape::arg_single:
      s += " " + quote(e.args.at(0));
      rhs(join(e.values, ", "));
      break;
    case Shape::covers: {
      std::string r;
      for (std::size_t i = 0; i + 1 < e.values.size(); i += 2) {
        if (i) r += ", ";
        r += quote(e.values[i]) + " < " + quote(e.values[i + 1]);
      }
      rhs(r);
      break;
    }
    case Shape::arrow_decl:
      s += " " + quote(e.args.at(0)) + " : " + quote(e.values.at(0)) + " -> " + quote(e.values.at(1));
      break;
    case Shape::compose:
      s += " " + quote(e.args.at(0)) + " . " + quote(e.args.at(1)) + " = " + quote(e.values.at(0));
      break;
    case Shape::product:
      s += " " + quote(e.args.at(0)) + " " + quote(e.args.at(1));
      rhs(join(e.values, ", "));
      break;
  }
  return s;
}

// ---- building -----------------------------------------------------------

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

template <class Map>
const typename Map::mapped_type& lookup(const Map& m, const std::string& name, std::string_view what) {
  const auto it = m.find(name);
  if (it == m.end()) fail(Errc::UnresolvedReference, std::string(what) + " '" + name + "' is not defined above");
  return it->second;
}

Obj object_of(const Category& c, const std::string& label) {
  const auto o = c.find_object(label);
  if (!o) fail(Errc::UnresolvedReference, "object '" + label + "'");
  return *o;
}

Elem element_of(const Poset& p, const std::string& label) {
  const auto e = p.parse(label);
  if (!e || !p.index_of(*e)) fail(Errc::UnresolvedReference, "element '" + label + "'");
  return *e;
}

std::uint64_t number(const std::string& s, std::size_t line) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) syntax(line, 1, "'" + s + "' is not a number");
  return v;
}

}  // namespace

Arrow resolve_arrow(const Category& c, Obj a, Obj b, const std::string& label, const Limits& limits) {
  if (const auto* t = dynamic_cast<const TableCategory*>(&c)) {
    const auto f = t->find_arrow(label);
    if (!f) fail(Errc::UnresolvedReference, "arrow '" + label + "'");
    if (f->dom != a || f->cod != b)
      fail(Errc::UnresolvedReference,
           "arrow '" + label + "' is not " + c.object_label(a) + " -> " + c.object_label(b));
    return *f;
  }
  const auto h = c.hom(a, b, limits.hom_cap);
  if (!h) fail(Errc::EnumerationBudgetExceeded, "hom(" + c.object_label(a) + ", " + c.object_label(b) + ")");
  for (const Arrow& f : *h)
    if (c.arrow_label(f) == label) return f;
  fail(Errc::UnresolvedReference, "arrow '" + label + "' in hom(" + c.object_label(a) + ", " + c.object_label(b) + ")");
}

namespace {

const TableCategory& table_base(const Doctrine& d, std::string_view what) {
  const auto* t = dynamic_cast<const TableCategory*>(d.base().get());
  if (!t) fail(Errc::UsageError, std::string(what) + " needs a tabulated base category");
  return *t;
}

// Functor out of a tabulated category from `object A = B` and `arrow f = g`
// lines; an arrow without a line goes to the only arrow between the images.
Functor tabulated_functor(const SpecBlock& b, std::string_view obj_key, std::string_view arrow_key,
                          std::shared_ptr<const TableCategory> src, CategoryRef dst, const Limits& limits) {
  std::vector<std::optional<Obj>> omap(src->object_count());
  for (const auto& e : b.entries) {
    if (e.key != obj_key) continue;
    const Obj a = object_of(*src, e.args[0]);
    if (omap[a]) fail(Errc::DuplicateName, at_line(e.line) + "object " + e.args[0] + " mapped twice");
    omap[a] = object_of(*dst, e.values[0]);
  }
  std::vector<Obj> objs(omap.size());
  for (std::size_t i = 0; i < omap.size(); ++i) {
    if (!omap[i]) fail(Errc::UnresolvedReference, "no image for object " + src->object_label(static_cast<Obj>(i)));
    objs[i] = *omap[i];
  }
  std::vector<std::optional<Arrow>> amap(src->arrow_count());
  for (const auto& e : b.entries) {
    if (e.key != arrow_key) continue;
    const auto f = src->find_arrow(e.args[0]);
    if (!f) fail(Errc::UnresolvedReference, at_line(e.line) + "arrow '" + e.args[0] + "'");
    auto& slot = amap[f->rep[0]];
    if (slot) fail(Errc::DuplicateName, at_line(e.line) + "arrow " + e.args[0] + " mapped twice");
    slot = resolve_arrow(*dst, objs[f->dom], objs[f->cod], e.values[0], limits);
  }
  for (std::uint32_t i = 0; i < amap.size(); ++i) {
    if (amap[i]) continue;
    const Arrow f = src->arrow(i);
    if (f == src->identity(f.dom)) {
      amap[i] = dst->identity(objs[f.dom]);
      continue;
    }
    const auto h = dst->hom(objs[f.dom], objs[f.cod], 2);
    if (!h || h->size() != 1) fail(Errc::UnresolvedReference, "no image for arrow " + src->info(i).name);
    amap[i] = h->front();
  }
  std::vector<Arrow> arrows;
  for (auto& a : amap) arrows.push_back(*a);
  return Functor{src, dst, [objs](Obj a) { return objs.at(a); },
                 [arrows](const Arrow& f) { return arrows.at(f.rep.at(0)); }};
}

// Monotone maps P(A) -> Q(FA) from `key A = labels` lines, one label per
// element of P(A) in its enumeration order.
std::map<Obj, std::vector<Elem>> component_tables(const SpecBlock& b, std::string_view key, const Doctrine& p,
                                                  const std::function<PosetRef(Obj)>& target) {
  std::map<Obj, std::vector<Elem>> out;
  for (const auto& e : b.entries) {
    if (e.key != key) continue;
    const Obj a = object_of(*p.base(), e.args[0]);
    const auto src = p.fiber(a);
    const auto dst = target(a);
    if (e.values.size() != src->size())
      syntax(e.line, 1,
             std::string(key) + " " + e.args[0] + " lists " + std::to_string(e.values.size()) + " values for " +
                 std::to_string(src->size()) + " elements");
    std::vector<Elem> table;
    for (const auto& v : e.values) table.push_back(element_of(*dst, v));
    if (!out.emplace(a, std::move(table)).second)
      fail(Errc::DuplicateName, at_line(e.line) + std::string(key) + " " + e.args[0] + " given twice");
  }
  return out;
}

std::function<MonotoneMap(Obj)> table_family(const SpecBlock& b, std::string_view key, DoctrineRef p,
                                             std::function<PosetRef(Obj)> target) {
  auto tables = component_tables(b, key, *p, target);
  for (Obj a : p->base()->objects())
    if (!tables.count(a)) fail(Errc::UnresolvedReference, std::string(key) + " missing for " + p->base()->object_label(a));
  return [p, target, tables = std::move(tables)](Obj a) {
    const auto src = p->fiber(a);
    const auto& t = tables.at(a);
    return MonotoneMap(src, target(a), [src, t](Elem x) { return t.at(*src->index_of(x)); });
  };
}

void build_block(const SpecBlock& b, SpecEnv& env, const Limits& limits, Report& report) {
  auto value = [&](std::string_view k) -> const std::string& { return b.find(k)->values.at(0); };
  const std::string prefix = b.name + ": ";

  if (b.kind == "poset") {
    const auto* el = b.find("elements");
    std::vector<std::pair<std::string, std::string>> covers;
    for (const auto& e : b.entries)
      if (e.key == "covers")
        for (std::size_t i = 0; i + 1 < e.values.size(); i += 2) covers.emplace_back(e.values[i], e.values[i + 1]);
    env.posets[b.name] = poset_from_covers(el->values, covers);
    report.pass(prefix + "poset", std::to_string(el->values.size()) + " elements");
    return;
  }

  if (b.kind == "category") {
    if (b.find("semilattice")) {
      env.categories[b.name] = semilattice_to_category(lookup(env.posets, value("semilattice"), "poset"));
    } else {
      RawCategory raw;
      raw.objects = b.find("objects")->values;
      for (const auto& e : b.entries) {
        if (e.key == "arrow") raw.arrows.push_back({e.args[0], e.values[0], e.values[1]});
        if (e.key == "compose") raw.compose.push_back({e.args[0], e.args[1], e.values[0]});
        if (e.key == "terminal") raw.terminal = e.values[0];
        if (e.key == "product") raw.products.push_back({e.args[0], e.args[1], e.values[0], e.values[1], e.values[2]});
      }
      env.categories[b.name] = validate_category_with_products(raw);
    }
    const auto& c = *env.categories[b.name];
    report.pass(prefix + "category with finite products",
                std::to_string(c.object_count()) + " objects, " + std::to_string(c.arrow_count()) + " arrows");
    return;
  }

  if (b.kind == "doctrine") {
    const auto base = lookup(env.categories, value("base"), "category");
    std::vector<PosetRef> fibers(base->object_count());
    std::map<std::uint32_t, std::vector<Elem>> tables;
    for (const auto& e : b.entries) {
      if (e.key != "fiber") continue;
      const Obj a = object_of(*base, e.args[0]);
      if (fibers[a]) fail(Errc::DuplicateName, at_line(e.line) + "fiber over " + e.args[0] + " given twice");
      fibers[a] = lookup(env.posets, e.values[0], "poset");
    }
    for (Obj a = 0; a < fibers.size(); ++a)
      if (!fibers[a]) fail(Errc::UnresolvedReference, "no fiber over " + base->object_label(a));
    for (const auto& e : b.entries) {
      if (e.key != "reindex") continue;
      const auto f = base->find_arrow(e.args[0]);
      if (!f) fail(Errc::UnresolvedReference, at_line(e.line) + "arrow '" + e.args[0] + "'");
      const auto& from = *fibers[f->cod];
      const auto& to = *fibers[f->dom];
      if (e.values.size() != from.size())
        syntax(e.line, 1,
               "reindex " + e.args[0] + " lists " + std::to_string(e.values.size()) + " values, the fiber over " +
                   base->object_label(f->cod) + " has " + std::to_string(from.size()));
      std::vector<Elem> t;
      for (const auto& v : e.values) t.push_back(element_of(to, v));
      if (!tables.emplace(f->rep[0], std::move(t)).second)
        fail(Errc::DuplicateName, at_line(e.line) + "reindex " + e.args[0] + " given twice");
    }
    auto d = table_doctrine(b.name, base, std::move(fibers), std::move(tables));
    Report sub;
    validate_doctrine(*d, limits, sub);
    report.merge(sub, prefix);
    env.doctrines[b.name] = std::move(d);
    return;
  }

  if (b.kind == "builtin") {
    if (b.builtin == "powerset") {
      std::vector<Obj> probes;
      for (const auto& v : b.find("probes")->values) probes.push_back(static_cast<Obj>(number(v, b.line)));
      env.doctrines[b.name] = powerset_doctrine(std::move(probes), limits);
      report.pass(prefix + "powerset doctrine", "probes " + probe_list(*env.doctrines[b.name]->base()));
    } else {
      const auto* ax = b.find("axioms");
      const auto* cap = b.find("cap");
      auto th = propositional_lt(b.find("atoms")->values, ax ? ax->values : std::vector<std::string>{},
                                 cap ? static_cast<unsigned>(number(cap->values[0], b.line)) : kDefaultAtomCap);
      report.pass(prefix + "Lindenbaum-Tarski doctrine",
                  std::to_string(th.doctrine->fiber(0)->size()) + " classes of formulas");
      env.doctrines[b.name] = th.doctrine;
      env.theories.emplace(b.name, std::move(th));
    }
    return;
  }

  if (b.kind == "morphism") {
    if (b.find("identity")) {
      env.morphisms[b.name] = identity_morphism(lookup(env.doctrines, value("identity"), "doctrine"));
      report.pass(prefix + "identity morphism");
      return;
    }
    const auto p = lookup(env.doctrines, value("source"), "doctrine");
    const auto r = lookup(env.doctrines, value("target"), "doctrine");
    const auto& src = table_base(*p, "a morphism source");
    const auto src_ref = std::static_pointer_cast<const TableCategory>(src.shared_from_this());
    Functor F = tabulated_functor(b, "object", "arrow", src_ref, r->base(), limits);
    auto comp = table_family(b, "component", p, [r, F](Obj a) { return r->fiber(F(a)); });
    DoctrineMorphism m{p, r, F, comp};
    Report sub;
    validate_functor(F, true, limits, sub);
    validate_morphism(m, {}, limits, sub);
    report.merge(sub, prefix);
    env.morphisms[b.name] = std::move(m);
    return;
  }

  if (b.kind == "comonad") {
    if (b.find("identity")) {
      env.comonads[b.name] = identity_comonad(lookup(env.doctrines, value("identity"), "doctrine"));
      report.pass(prefix + "identity comonad");
      return;
    }
    const auto p = lookup(env.doctrines, value("doctrine"), "doctrine");
    Comonad k;
    if (b.find("reader")) {
      const Obj x = object_of(*p->base(), value("reader"));
      std::optional<Elem> phi;
      if (b.find("axiom")) phi = resolve_element(env, value("doctrine"), x, value("axiom"));
      k = build_reader_comonad(p, x, phi, limits);
    } else {
      const auto& base = table_base(*p, "a comonad given by tables");
      const auto ref = std::static_pointer_cast<const TableCategory>(base.shared_from_this());
      const Functor K = tabulated_functor(b, "functor", "fmap", ref, ref, limits);
      std::map<Obj, Arrow> gamma, epsilon;
      for (const auto& e : b.entries) {
        if (e.key != "gamma" && e.key != "epsilon") continue;
        const Obj a = object_of(base, e.args[0]);
        const bool g = e.key == "gamma";
        const Arrow f = resolve_arrow(base, K(a), g ? K(K(a)) : a, e.values[0], limits);
        if (!(g ? gamma : epsilon).emplace(a, f).second)
          fail(Errc::DuplicateName, at_line(e.line) + e.key + " " + e.args[0] + " given twice");
      }
      for (Obj a : base.objects())
        if (!gamma.count(a) || !epsilon.count(a))
          fail(Errc::UnresolvedReference, "gamma or epsilon missing for " + base.object_label(a));
      k.doctrine = p;
      k.functor = K;
      k.k = table_family(b, "k", p, [p, K](Obj a) { return p->fiber(K(a)); });
      k.gamma = NatTransf{K, compose(K, K), [gamma](Obj a) { return gamma.at(a); }};
      k.epsilon = NatTransf{K, identity_functor(ref), [epsilon](Obj a) { return epsilon.at(a); }};
    }
    Report sub;
    validate_comonad(k, limits, sub);
    report.merge(sub, prefix);
    env.comonads[b.name] = std::move(k);
  }
}

}  // namespace

const SpecEntry* SpecBlock::find(std::string_view key) const {
  for (const auto& e : entries)
    if (e.key == key) return &e;
  return nullptr;
}

const SpecBlock* SpecDocument::find(std::string_view name) const {
  for (const auto& b : blocks)
    if (b.name == name) return &b;
  return nullptr;
}

SpecDocument parse_spec(std::string_view text) {
  SpecDocument doc;
  SpecBlock* open = nullptr;
  const BlockSpec* spec = nullptr;
  std::size_t line_no = 0;

  std::map<std::string, std::string> kinds;
  auto add_name = [&](const SpecBlock& b) {
    if (!kinds.emplace(b.name, b.kind).second)
      fail(Errc::DuplicateName, at_line(b.line) + "block name " + b.name + " used twice");
  };

  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    Cursor cur(tokenize(line, line_no), line_no);

    if (!cur.at_end()) {
      if (open) {
        if (cur.accept("}")) {
          cur.finish();
          check_block(*open);
          check_references(*open, kinds);
          add_name(*open);
          open = nullptr;
        } else {
          const std::size_t col = cur.peek().col;
          std::string key = cur.name("a key or '}'");
          const KeySpec* ks = key_spec(*spec, key);
          if (!ks) syntax(line_no, col, "unknown key '" + key + "' in a " + open->kind + " block");
          if (!ks->repeat && open->find(key)) syntax(line_no, col, "'" + key + "' given twice");
          open->entries.push_back(parse_entry(cur, *ks, std::move(key)));
        }
      } else {
        const std::size_t col = cur.peek().col;
        const std::string kind = cur.name("a block kind");
        if (kind == "builtin") {
          doc.blocks.push_back(parse_builtin(cur));
          add_name(doc.blocks.back());
        } else {
          spec = block_spec(kind);
          if (!spec) syntax(line_no, col, "unknown block kind '" + kind + "'");
          SpecBlock b;
          b.kind = kind;
          b.line = line_no;
          b.name = cur.name("a block name");
          cur.expect("{");
          cur.finish();
          if (kinds.count(b.name))
            fail(Errc::DuplicateName, at_line(line_no) + "block name " + b.name + " used twice");
          doc.blocks.push_back(std::move(b));
          open = &doc.blocks.back();
        }
      }
    }
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  if (open) syntax(line_no, 1, "block " + open->name + " is not closed");
  return doc;
}

SpecDocument parse_spec_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::UsageError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

std::string print_spec(const SpecDocument& doc) {
  std::string out;
  for (std::size_t i = 0; i < doc.blocks.size(); ++i) {
    const auto& b = doc.blocks[i];
    if (i) out += "\n";
    if (b.kind == "builtin") {
      out += "builtin " + quote(b.name) + " " + b.builtin;
      const auto& keys = builtin_keys().at(b.builtin);
      for (const auto& e : b.entries)
        out += " " + e.key + "=" + (keys.at(e.key) ? quote(e.values.at(0)) : "[" + join(e.values, ", ") + "]");
      out += "\n";
      continue;
    }
    const BlockSpec& spec = *block_spec(b.kind);
    out += b.kind + " " + quote(b.name) + " {\n";
    for (const auto& e : b.entries) out += "  " + print_entry(e, key_spec(spec, e.key)->shape) + "\n";
    out += "}\n";
  }
  return out;
}

SpecEnv build_spec(const SpecDocument& doc, const Limits& limits, Report& report) {
  SpecEnv env;
  for (const auto& b : doc.blocks) {
    try {
      build_block(b, env, limits, report);
    } catch (const Error& e) {
      if (e.witness().rfind("line ", 0) == 0) throw;
      fail(e.code(), at_line(b.line) + b.kind + " " + b.name + ": " + e.witness());
    }
  }
  return env;
}

Elem resolve_element(const SpecEnv& env, const std::string& doctrine, Obj a, const std::string& text) {
  const auto& d = lookup(env.doctrines, doctrine, "doctrine");
  const auto fib = d->fiber(a);
  if (const auto e = fib->parse(text); e && fib->index_of(*e)) return *e;
  if (const auto th = env.theories.find(doctrine); th != env.theories.end()) return th->second.class_of(text);
  fail(Errc::UnresolvedReference, "'" + text + "' is not an element of the fiber over " + d->base()->object_label(a));
}

}  // namespace doctrina
