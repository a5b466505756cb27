#include "doctrina/poset.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "doctrina/error.hpp"
#include "doctrina/lattice.hpp"

namespace doctrina {

namespace {

// Greatest element of the set selected by `pick`, if it exists.
template <class Pick>
std::optional<Elem> greatest(const Poset& p, Pick pick) {
  std::optional<Elem> best;
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    Elem c = p.at(i);
    if (pick(c) && (!best || p.leq(*best, c))) best = c;
  }
  if (!best) return std::nullopt;
  for (std::size_t i = 0; i < n; ++i) {
    Elem c = p.at(i);
    if (pick(c) && !p.leq(c, *best)) return std::nullopt;
  }
  return best;
}

template <class Pick>
std::optional<Elem> least(const Poset& p, Pick pick) {
  std::optional<Elem> best;
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    Elem c = p.at(i);
    if (pick(c) && (!best || p.leq(c, *best))) best = c;
  }
  if (!best) return std::nullopt;
  for (std::size_t i = 0; i < n; ++i) {
    Elem c = p.at(i);
    if (pick(c) && !p.leq(*best, c)) return std::nullopt;
  }
  return best;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

// ---- Poset defaults ----

std::optional<Elem> Poset::parse(std::string_view text) const {
  for (std::size_t i = 0, n = size(); i < n; ++i)
    if (label(at(i)) == text) return at(i);
  return std::nullopt;
}

std::optional<Elem> Poset::meet(Elem a, Elem b) const {
  return greatest(*this, [&](Elem c) { return leq(c, a) && leq(c, b); });
}

std::optional<Elem> Poset::join(Elem a, Elem b) const {
  return least(*this, [&](Elem c) { return leq(a, c) && leq(b, c); });
}

std::optional<Elem> Poset::top() const {
  return greatest(*this, [](Elem) { return true; });
}

std::optional<Elem> Poset::bottom() const {
  return least(*this, [](Elem) { return true; });
}

std::optional<Elem> Poset::implies(Elem a, Elem b) const {
  return greatest(*this, [&](Elem c) {
    auto m = meet(a, c);
    return m && leq(*m, b);
  });
}

std::optional<Elem> Poset::pseudo_complement(Elem a) const {
  auto bot = bottom();
  if (!bot) return std::nullopt;
  return greatest(*this, [&](Elem c) {
    auto m = meet(a, c);
    return m && *m == *bot;
  });
}

std::shared_ptr<const Poset> Poset::below(Elem x) const {
  std::vector<Elem> members;
  for (std::size_t i = 0, n = size(); i < n; ++i)
    if (leq(at(i), x)) members.push_back(at(i));
  return std::make_shared<SubPoset>(shared_from_this(), std::move(members));
}

std::vector<Elem> Poset::elements() const {
  std::vector<Elem> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i);
  return out;
}

// ---- FinitePoset ----

FinitePoset::FinitePoset(std::vector<std::string> names, std::vector<std::uint8_t> leq)
    : names_(std::move(names)), leq_(std::move(leq)) {
  for (std::size_t i = 0; i < names_.size(); ++i) index_.emplace(names_[i], i);
  if (names_.size() <= 256)
    tables_ = std::make_shared<const LatticeTables>(lattice_tables(*this, Exec::serial));
}

std::optional<std::size_t> FinitePoset::index_of(Elem e) const {
  if (e < names_.size()) return static_cast<std::size_t>(e);
  return std::nullopt;
}

std::optional<Elem> FinitePoset::parse(std::string_view text) const {
  auto it = index_.find(std::string(text));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<Elem> FinitePoset::meet(Elem a, Elem b) const {
  if (!tables_) return Poset::meet(a, b);
  auto m = tables_->meet[a * names_.size() + b];
  if (m == kAbsent) return std::nullopt;
  return static_cast<Elem>(m);
}

std::optional<Elem> FinitePoset::join(Elem a, Elem b) const {
  if (!tables_) return Poset::join(a, b);
  auto m = tables_->join[a * names_.size() + b];
  if (m == kAbsent) return std::nullopt;
  return static_cast<Elem>(m);
}

std::optional<Elem> FinitePoset::top() const {
  if (!tables_) return Poset::top();
  if (tables_->top == kAbsent) return std::nullopt;
  return static_cast<Elem>(tables_->top);
}

std::optional<Elem> FinitePoset::bottom() const {
  if (!tables_) return Poset::bottom();
  if (tables_->bottom == kAbsent) return std::nullopt;
  return static_cast<Elem>(tables_->bottom);
}

// ---- SubsetLattice ----

Elem deposit_bits(std::uint64_t index, Elem mask) {
  Elem out = 0;
  while (mask) {
    Elem low = mask & (~mask + 1);
    if (index & 1) out |= low;
    index >>= 1;
    mask &= mask - 1;
  }
  return out;
}

std::uint64_t extract_bits(Elem value, Elem mask) {
  std::uint64_t out = 0;
  unsigned pos = 0;
  while (mask) {
    Elem low = mask & (~mask + 1);
    if (value & low) out |= std::uint64_t{1} << pos;
    ++pos;
    mask &= mask - 1;
  }
  return out;
}

SubsetLattice::SubsetLattice(unsigned universe, Elem mask, Names point_names)
    : universe_(universe), mask_(mask), names_(std::move(point_names)) {
  if (universe > 64) fail(Errc::ProbeTooLarge, "subset universe of " + std::to_string(universe) + " points");
}

std::size_t SubsetLattice::size() const {
  int bits = std::popcount(mask_);
  if (bits >= 63) return std::numeric_limits<std::size_t>::max();
  return std::size_t{1} << bits;
}

Elem SubsetLattice::at(std::size_t i) const { return deposit_bits(i, mask_); }

std::optional<std::size_t> SubsetLattice::index_of(Elem e) const {
  if ((e & ~mask_) != 0) return std::nullopt;
  return static_cast<std::size_t>(extract_bits(e, mask_));
}

std::string SubsetLattice::label(Elem e) const {
  std::string out = "{";
  bool first = true;
  for (unsigned i = 0; i < universe_; ++i) {
    if (!((e >> i) & 1)) continue;
    if (!first) out += ',';
    first = false;
    out += names_ ? (*names_)[i] : std::to_string(i);
  }
  return out + "}";
}

std::optional<Elem> SubsetLattice::parse(std::string_view text) const {
  std::string s = trim(text);
  if (s.size() < 2 || s.front() != '{' || s.back() != '}') return std::nullopt;
  std::string_view body(s.data() + 1, s.size() - 2);
  Elem out = 0;
  while (!body.empty()) {
    auto comma = body.find(',');
    std::string tok = trim(body.substr(0, comma));
    body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
    if (tok.empty()) continue;
    bool found = false;
    for (unsigned i = 0; i < universe_ && !found; ++i) {
      std::string name = names_ ? (*names_)[i] : std::to_string(i);
      if (name == tok) {
        out |= Elem{1} << i;
        found = true;
      }
    }
    if (!found) return std::nullopt;
  }
  if ((out & ~mask_) != 0) return std::nullopt;
  return out;
}

std::shared_ptr<const Poset> SubsetLattice::below(Elem x) const {
  return std::make_shared<SubsetLattice>(universe_, x & mask_, names_);
}

// ---- SubPoset ----

SubPoset::SubPoset(PosetRef parent, std::vector<Elem> members)
    : parent_(std::move(parent)), members_(std::move(members)) {
  sorted_.reserve(members_.size());
  for (std::size_t i = 0; i < members_.size(); ++i) sorted_.emplace_back(members_[i], i);
  std::sort(sorted_.begin(), sorted_.end());
}

std::optional<std::size_t> SubPoset::index_of(Elem e) const {
  auto it = std::lower_bound(sorted_.begin(), sorted_.end(), std::make_pair(e, std::size_t{0}));
  if (it == sorted_.end() || it->first != e) return std::nullopt;
  return it->second;
}

std::optional<Elem> SubPoset::parse(std::string_view text) const {
  auto e = parent_->parse(text);
  if (!e || !contains(*e)) return std::nullopt;
  return e;
}

// ---- construction ----

std::shared_ptr<const FinitePoset> validate_poset(
    std::vector<std::string> elements,
    std::span<const std::pair<std::string, std::string>> leq_pairs) {
  if (elements.empty()) fail(Errc::UsageError, "a poset needs at least one element");
  const std::size_t n = elements.size();
  std::unordered_map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i)
    if (!idx.emplace(elements[i], i).second) fail(Errc::DuplicateName, "element " + elements[i]);
  std::vector<std::uint8_t> rel(n * n, 0);
  for (const auto& [a, b] : leq_pairs) {
    auto ia = idx.find(a);
    auto ib = idx.find(b);
    if (ia == idx.end()) fail(Errc::UnresolvedReference, "element " + a);
    if (ib == idx.end()) fail(Errc::UnresolvedReference, "element " + b);
    rel[ia->second * n + ib->second] = 1;
  }
  for (std::size_t a = 0; a < n; ++a)
    if (!rel[a * n + a]) fail(Errc::ReflexivityViolation, "(" + elements[a] + "," + elements[a] + ") missing");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (rel[a * n + b] && rel[b * n + a])
        fail(Errc::AntisymmetryViolation, "(" + elements[a] + "," + elements[b] + ") both ways");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (!rel[a * n + b]) continue;
      for (std::size_t c = 0; c < n; ++c)
        if (rel[b * n + c] && !rel[a * n + c])
          fail(Errc::TransitivityViolation, "(" + elements[a] + "," + elements[b] + "),(" +
                                                elements[b] + "," + elements[c] + ") but not (" +
                                                elements[a] + "," + elements[c] + ")");
    }
  return std::make_shared<const FinitePoset>(std::move(elements), std::move(rel));
}

std::shared_ptr<const FinitePoset> poset_from_covers(
    std::vector<std::string> elements,
    std::span<const std::pair<std::string, std::string>> covers) {
  const std::size_t n = elements.size();
  std::unordered_map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i)
    if (!idx.emplace(elements[i], i).second) fail(Errc::DuplicateName, "element " + elements[i]);
  std::vector<std::uint8_t> rel(n * n, 0);
  for (std::size_t a = 0; a < n; ++a) rel[a * n + a] = 1;
  for (const auto& [a, b] : covers) {
    auto ia = idx.find(a);
    auto ib = idx.find(b);
    if (ia == idx.end()) fail(Errc::UnresolvedReference, "element " + a);
    if (ib == idx.end()) fail(Errc::UnresolvedReference, "element " + b);
    rel[ia->second * n + ib->second] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t a = 0; a < n; ++a)
      if (rel[a * n + k])
        for (std::size_t b = 0; b < n; ++b)
          if (rel[k * n + b]) rel[a * n + b] = 1;
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (rel[a * n + b]) pairs.emplace_back(elements[a], elements[b]);
  return validate_poset(std::move(elements), pairs);
}

std::vector<std::pair<Elem, Elem>> covering_pairs(const Poset& p) {
  std::vector<std::pair<Elem, Elem>> out;
  const auto els = p.elements();
  for (Elem a : els)
    for (Elem b : els) {
      if (a == b || !p.leq(a, b)) continue;
      bool between = false;
      for (Elem c : els)
        if (c != a && c != b && p.leq(a, c) && p.leq(c, b)) {
          between = true;
          break;
        }
      if (!between) out.emplace_back(a, b);
    }
  return out;
}

std::shared_ptr<const FinitePoset> tabulate_poset(const Poset& p) {
  const auto els = p.elements();
  const std::size_t n = els.size();
  std::vector<std::string> names;
  names.reserve(n);
  for (Elem e : els) names.push_back(p.label(e));
  std::vector<std::uint8_t> rel(n * n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) rel[a * n + b] = p.leq(els[a], els[b]) ? 1 : 0;
  return std::make_shared<const FinitePoset>(std::move(names), std::move(rel));
}

// ---- MonotoneMap ----

MonotoneMap::MonotoneMap(PosetRef source, PosetRef target, Fn fn)
    : source_(std::move(source)), target_(std::move(target)), fn_(std::move(fn)) {}

MonotoneMap identity_map(PosetRef p) {
  return MonotoneMap(p, p, [](Elem e) { return e; });
}

MonotoneMap compose(const MonotoneMap& g, const MonotoneMap& f) {
  return MonotoneMap(f.source(), g.target(), [g, f](Elem e) { return g(f(e)); });
}

MonotoneMap retarget(const MonotoneMap& f, PosetRef source, PosetRef target) {
  return MonotoneMap(std::move(source), std::move(target), [f](Elem e) { return f(e); });
}

MonotoneMap tabulate(const MonotoneMap& f) {
  const auto& src = f.source();
  if (src->size() > (std::size_t{1} << 16)) return f;
  std::vector<Elem> values(src->size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = f(src->at(i));
  return MonotoneMap(src, f.target(), [src, values = std::move(values)](Elem e) {
    auto i = src->index_of(e);
    if (!i) fail(Errc::InternalInvariantViolation, "tabulated map applied outside its source");
    return values[*i];
  });
}

std::optional<Elem> first_difference(const MonotoneMap& a, const MonotoneMap& b) {
  const auto& src = a.source();
  for (std::size_t i = 0, n = src->size(); i < n; ++i) {
    Elem e = src->at(i);
    if (a(e) != b(e)) return e;
  }
  return std::nullopt;
}

std::optional<std::pair<Elem, Elem>> monotonicity_violation(const MonotoneMap& f) {
  const auto& src = *f.source();
  const auto& tgt = *f.target();
  const std::size_t n = src.size();
  for (std::size_t i = 0; i < n; ++i) {
    Elem a = src.at(i);
    if (!tgt.contains(f(a))) return std::make_pair(a, a);
  }
  if (auto* sub = dynamic_cast<const SubsetLattice*>(&src)) {
    // covering pairs suffice in a subset lattice
    for (std::size_t i = 0; i < n; ++i) {
      Elem a = src.at(i);
      Elem rest = sub->mask() & ~a;
      while (rest) {
        Elem bit = rest & (~rest + 1);
        rest &= rest - 1;
        if (!tgt.leq(f(a), f(a | bit))) return std::make_pair(a, a | bit);
      }
    }
    return std::nullopt;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Elem a = src.at(i), b = src.at(j);
      if (src.leq(a, b) && !tgt.leq(f(a), f(b))) return std::make_pair(a, b);
    }
  return std::nullopt;
}

MonotoneMap monotone_map_from_table(
    PosetRef source, PosetRef target,
    std::span<const std::pair<std::string, std::string>> table) {
  std::vector<std::optional<Elem>> values(source->size());
  for (const auto& [a, b] : table) {
    auto ea = source->parse(a);
    auto eb = target->parse(b);
    if (!ea) fail(Errc::UnresolvedReference, "element " + a);
    if (!eb) fail(Errc::UnresolvedReference, "element " + b);
    values[*source->index_of(*ea)] = *eb;
  }
  std::vector<Elem> dense(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i]) fail(Errc::NotMonotone, "no image for " + source->label(source->at(i)));
    dense[i] = *values[i];
  }
  auto src = source;
  MonotoneMap m(source, target, [src, dense = std::move(dense)](Elem e) {
    auto i = src->index_of(e);
    if (!i) fail(Errc::InternalInvariantViolation, "map applied outside its source");
    return dense[*i];
  });
  if (auto bad = monotonicity_violation(m))
    fail(Errc::NotMonotone, source->label(bad->first) + " <= " + source->label(bad->second) +
                                " but images are not ordered");
  return m;
}

}  // namespace doctrina
