#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "doctrina/limits.hpp"
#include "doctrina/poset.hpp"
#include "doctrina/report.hpp"

namespace doctrina {

using Obj = std::uint32_t;

// An arrow is its endpoints plus a representation private to the category:
// an arrow index for tabulated categories, a function table for finite sets,
// the underlying base arrow for Kleisli categories. Equal arrows have equal
// representations, so structural equality is plain value equality.
struct Arrow {
  Obj dom = 0;
  Obj cod = 0;
  std::vector<std::uint32_t> rep;

  friend bool operator==(const Arrow&, const Arrow&) = default;
  friend auto operator<=>(const Arrow&, const Arrow&) = default;
};

class Category : public std::enable_shared_from_this<Category> {
 public:
  virtual ~Category() = default;

  // Every object, or the declared probe family when lazy() is true.
  virtual std::vector<Obj> objects() const = 0;
  virtual bool lazy() const { return false; }
  virtual std::string object_label(Obj a) const { return std::to_string(a); }
  virtual std::string arrow_label(const Arrow& f) const;
  virtual std::optional<Obj> find_object(std::string_view label) const;

  virtual Arrow identity(Obj a) const = 0;
  // g after f; throws CompositionUndefined when cod f != dom g
  virtual Arrow compose(const Arrow& g, const Arrow& f) const = 0;
  // nullopt when the hom-set has more than `cap` arrows
  virtual std::optional<std::vector<Arrow>> hom(Obj a, Obj b, std::size_t cap) const = 0;

  // Chosen finite products. The defaults throw PrerequisiteMissing.
  virtual bool has_products() const { return false; }
  virtual Obj terminal() const;
  virtual Arrow bang(Obj a) const;
  virtual Obj product(Obj a, Obj b) const;
  virtual Arrow pr1(Obj a, Obj b) const;
  virtual Arrow pr2(Obj a, Obj b) const;
  virtual Arrow pair(const Arrow& f, const Arrow& g) const;

  // t x A = A = A x t with the unit projections identities.
  virtual bool strict_units() const { return false; }
  // X x (Y x A) = (X x Y) x A with matching projections.
  virtual bool strict_assoc() const { return false; }
};

using CategoryRef = std::shared_ptr<const Category>;

// f x g = <f pr1, g pr2>
Arrow cross(const Category& c, const Arrow& f, const Arrow& g);
Arrow diagonal(const Category& c, Obj a);
// X x (Y x A) -> (X x Y) x A and its inverse
Arrow assoc_left(const Category& c, Obj x, Obj y, Obj a);
Arrow assoc_right(const Category& c, Obj x, Obj y, Obj a);
bool is_terminal(const Category& c, Obj t, std::size_t cap);

// Work counter for exhaustive checks. Once spent, callers report the rest of
// the check as skipped instead of silently truncating.
class Budget {
 public:
  explicit Budget(std::size_t units) : left_(units) {}
  bool spend(std::size_t units = 1) {
    if (units > left_) {
      left_ = 0;
      exhausted_ = true;
      return false;
    }
    left_ -= units;
    return true;
  }
  bool exhausted() const { return exhausted_; }

 private:
  std::size_t left_;
  bool exhausted_ = false;
};

// Explicitly tabulated category. Built only through validate_category_with_products
// or semilattice_to_category.
class TableCategory final : public Category {
 public:
  struct ArrowInfo {
    std::string name;
    Obj dom, cod;
  };
  struct ProductInfo {
    Obj object;
    std::uint32_t pr1, pr2;
  };

  std::vector<Obj> objects() const override;
  std::string object_label(Obj a) const override { return objects_[a]; }
  std::string arrow_label(const Arrow& f) const override { return arrows_[f.rep.at(0)].name; }
  std::optional<Obj> find_object(std::string_view label) const override;

  Arrow identity(Obj a) const override { return arrow(identities_[a]); }
  Arrow compose(const Arrow& g, const Arrow& f) const override;
  std::optional<std::vector<Arrow>> hom(Obj a, Obj b, std::size_t cap) const override;

  bool has_products() const override { return terminal_.has_value(); }
  Obj terminal() const override;
  Arrow bang(Obj a) const override;
  Obj product(Obj a, Obj b) const override;
  Arrow pr1(Obj a, Obj b) const override;
  Arrow pr2(Obj a, Obj b) const override;
  Arrow pair(const Arrow& f, const Arrow& g) const override;
  bool strict_units() const override { return strict_units_; }
  bool strict_assoc() const override { return strict_assoc_; }

  std::size_t object_count() const { return objects_.size(); }
  std::size_t arrow_count() const { return arrows_.size(); }
  Arrow arrow(std::uint32_t index) const;
  std::optional<Arrow> find_arrow(std::string_view name) const;
  const ArrowInfo& info(std::uint32_t index) const { return arrows_[index]; }

 private:
  friend struct TableCategoryBuilder;
  TableCategory() = default;

  const ProductInfo& product_info(Obj a, Obj b) const;

  std::vector<std::string> objects_;
  std::vector<ArrowInfo> arrows_;
  std::vector<std::uint32_t> identities_;
  std::vector<std::int32_t> compose_;  // [g * arrows + f], -1 when undefined
  std::vector<std::vector<std::uint32_t>> hom_;  // [a * objects + b]
  std::optional<Obj> terminal_;
  std::vector<std::optional<ProductInfo>> products_;  // [a * objects + b]
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> pairing_;
  bool strict_units_ = false;
  bool strict_assoc_ = false;
};

// Raw tables as written in a spec file. Identities are implicit and named
// "id_<object>"; composites with identities are filled in.
struct RawCategory {
  struct ArrowDecl {
    std::string name, dom, cod;
  };
  struct ComposeDecl {
    std::string g, f, result;  // g . f = result
  };
  struct ProductDecl {
    std::string a, b, object, pr1, pr2;
  };

  std::vector<std::string> objects;
  std::vector<ArrowDecl> arrows;
  std::vector<ComposeDecl> compose;
  std::optional<std::string> terminal;
  std::vector<ProductDecl> products;
};

// Verifies identities, composition domain rules, associativity, uniqueness
// of bangs and the product universal property (pairing found by search).
std::shared_ptr<const TableCategory> validate_category_with_products(const RawCategory& raw);

// Objects = elements, one arrow "a<=b" per comparable pair, t = top, a x b = a /\ b.
std::shared_ptr<const TableCategory> semilattice_to_category(const PosetRef& lattice);

// Law check on any category, restricted to objects() (the probes when lazy).
// Throws on a violation; skipped portions are recorded in `report`.
void validate_category(const Category& c, const Limits& limits, Report& report);

struct Functor {
  CategoryRef source;
  CategoryRef target;
  std::function<Obj(Obj)> on_object;
  std::function<Arrow(const Arrow&)> on_arrow;

  Obj operator()(Obj a) const { return on_object(a); }
  Arrow operator()(const Arrow& f) const { return on_arrow(f); }
};

Functor identity_functor(CategoryRef c);
// G after F
Functor compose(const Functor& g, const Functor& f);

struct FunctorCheck {
  bool preserves_products = false;
  // F(t) = t, F(A x B) = FA x FB with F(pr_i) = pr_i
  bool strict_products = false;
};

// Functor laws over the source objects; with require_products also checks
// that F(t) is terminal and <F pr1, F pr2> is invertible (ProductsNotPreserved).
FunctorCheck validate_functor(const Functor& f, bool require_products, const Limits& limits,
                              Report& report);

// Inverse of the comparison <F pr1, F pr2> : F(A x B) -> FA x FB, by search.
std::optional<Arrow> product_comparison_inverse(const Functor& f, Obj a, Obj b, const Limits& limits);

struct NatTransf {
  Functor from;
  Functor to;
  std::function<Arrow(Obj)> component;

  Arrow operator()(Obj a) const { return component(a); }
};

// Throws NaturalitySquareViolation naming the arrow.
void validate_nat_transf(const NatTransf& eta, const Limits& limits, Report& report);

// Functor between thin categories (e.g. semilattices) given on objects; each
// arrow goes to the unique arrow between the images. Throws FunctorLawViolation
// when that arrow is missing.
Functor thin_functor(CategoryRef source, CategoryRef target, std::vector<Obj> object_map);

// On-the-nose comparison over the source objects and their hom-sets.
// Returns a description of the first difference.
std::optional<std::string> functor_difference(const Functor& f, const Functor& g, const Limits& limits);

}  // namespace doctrina
