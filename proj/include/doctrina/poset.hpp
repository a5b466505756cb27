#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace doctrina {

// An element handle. Its meaning is private to the poset that produced it:
// an index for tabulated posets, a bitmask for subset lattices. Within one
// poset, equal handles denote equal elements.
using Elem = std::uint64_t;

struct LatticeTables;

class Poset : public std::enable_shared_from_this<Poset> {
 public:
  virtual ~Poset() = default;

  virtual std::size_t size() const = 0;
  virtual Elem at(std::size_t i) const = 0;
  virtual std::optional<std::size_t> index_of(Elem e) const = 0;
  virtual bool leq(Elem a, Elem b) const = 0;
  virtual std::string label(Elem e) const = 0;
  virtual std::optional<Elem> parse(std::string_view label) const;

  // Order structure, nullopt when absent. Defaults search the enumeration.
  virtual std::optional<Elem> meet(Elem a, Elem b) const;
  virtual std::optional<Elem> join(Elem a, Elem b) const;
  virtual std::optional<Elem> top() const;
  virtual std::optional<Elem> bottom() const;
  virtual std::optional<Elem> implies(Elem a, Elem b) const;
  virtual std::optional<Elem> pseudo_complement(Elem a) const;

  // {b | b <= x}, sharing element handles with this poset.
  virtual std::shared_ptr<const Poset> below(Elem x) const;

  bool contains(Elem e) const { return index_of(e).has_value(); }
  std::vector<Elem> elements() const;
};

using PosetRef = std::shared_ptr<const Poset>;

// Tabulated poset over opaque string ids.
class FinitePoset final : public Poset {
 public:
  // Callers go through validate_poset / poset_from_covers.
  FinitePoset(std::vector<std::string> names, std::vector<std::uint8_t> leq);

  std::size_t size() const override { return names_.size(); }
  Elem at(std::size_t i) const override { return i; }
  std::optional<std::size_t> index_of(Elem e) const override;
  bool leq(Elem a, Elem b) const override { return leq_[a * names_.size() + b] != 0; }
  std::string label(Elem e) const override { return names_[e]; }
  std::optional<Elem> parse(std::string_view label) const override;

  std::optional<Elem> meet(Elem a, Elem b) const override;
  std::optional<Elem> join(Elem a, Elem b) const override;
  std::optional<Elem> top() const override;
  std::optional<Elem> bottom() const override;

  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::vector<std::uint8_t> leq_;
  std::unordered_map<std::string, std::size_t> index_;
  std::shared_ptr<const LatticeTables> tables_;  // cached for small posets
};

// All subsets of `mask` inside a universe of at most 64 points, ordered by
// inclusion. Elements are the bitmasks themselves.
class SubsetLattice final : public Poset {
 public:
  using Names = std::shared_ptr<const std::vector<std::string>>;

  SubsetLattice(unsigned universe, Elem mask, Names point_names = nullptr);

  std::size_t size() const override;
  Elem at(std::size_t i) const override;
  std::optional<std::size_t> index_of(Elem e) const override;
  bool leq(Elem a, Elem b) const override { return (a & ~b) == 0; }
  std::string label(Elem e) const override;
  std::optional<Elem> parse(std::string_view label) const override;

  std::optional<Elem> meet(Elem a, Elem b) const override { return a & b; }
  std::optional<Elem> join(Elem a, Elem b) const override { return a | b; }
  std::optional<Elem> top() const override { return mask_; }
  std::optional<Elem> bottom() const override { return Elem{0}; }
  std::optional<Elem> implies(Elem a, Elem b) const override { return (~a | b) & mask_; }
  std::optional<Elem> pseudo_complement(Elem a) const override { return ~a & mask_; }
  std::shared_ptr<const Poset> below(Elem x) const override;

  unsigned universe() const { return universe_; }
  Elem mask() const { return mask_; }

 private:
  unsigned universe_;
  Elem mask_;
  Names names_;
};

// Induced sub-poset on a chosen member list; handles are the parent's.
class SubPoset final : public Poset {
 public:
  SubPoset(PosetRef parent, std::vector<Elem> members);

  std::size_t size() const override { return members_.size(); }
  Elem at(std::size_t i) const override { return members_[i]; }
  std::optional<std::size_t> index_of(Elem e) const override;
  bool leq(Elem a, Elem b) const override { return parent_->leq(a, b); }
  std::string label(Elem e) const override { return parent_->label(e); }
  std::optional<Elem> parse(std::string_view label) const override;

  const PosetRef& parent() const { return parent_; }

 private:
  PosetRef parent_;
  std::vector<Elem> members_;
  std::vector<std::pair<Elem, std::size_t>> sorted_;
};

// Strict validation: the pairs must already be reflexive and transitive.
std::shared_ptr<const FinitePoset> validate_poset(
    std::vector<std::string> elements,
    std::span<const std::pair<std::string, std::string>> leq_pairs);

// Takes the reflexive-transitive closure of covering pairs, then validates.
std::shared_ptr<const FinitePoset> poset_from_covers(
    std::vector<std::string> elements,
    std::span<const std::pair<std::string, std::string>> covers);

// Covering pairs (a < b with nothing strictly between); inverse of the above.
std::vector<std::pair<Elem, Elem>> covering_pairs(const Poset& p);

// Copies any enumerable poset into tabulated form (labels become ids).
std::shared_ptr<const FinitePoset> tabulate_poset(const Poset& p);

class MonotoneMap {
 public:
  using Fn = std::function<Elem(Elem)>;

  MonotoneMap() = default;
  MonotoneMap(PosetRef source, PosetRef target, Fn fn);

  Elem operator()(Elem a) const { return fn_(a); }
  const PosetRef& source() const { return source_; }
  const PosetRef& target() const { return target_; }

 private:
  PosetRef source_;
  PosetRef target_;
  Fn fn_;
};

MonotoneMap identity_map(PosetRef p);
// g after f
MonotoneMap compose(const MonotoneMap& g, const MonotoneMap& f);
// Same underlying function between other (sub-)posets.
MonotoneMap retarget(const MonotoneMap& f, PosetRef source, PosetRef target);
// Evaluates once over the source and serves lookups from the table.
MonotoneMap tabulate(const MonotoneMap& f);

// First source element where the two maps differ.
std::optional<Elem> first_difference(const MonotoneMap& a, const MonotoneMap& b);
// A pair a <= b with f(a) not <= f(b), or a value outside the target.
std::optional<std::pair<Elem, Elem>> monotonicity_violation(const MonotoneMap& f);

// Builds a map from an id table; must be total and monotone.
MonotoneMap monotone_map_from_table(
    PosetRef source, PosetRef target,
    std::span<const std::pair<std::string, std::string>> table);

// Bit helpers shared by subset lattices.
Elem deposit_bits(std::uint64_t index, Elem mask);
std::uint64_t extract_bits(Elem value, Elem mask);

}  // namespace doctrina
