#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "doctrina/category.hpp"
#include "doctrina/limits.hpp"
#include "doctrina/poset.hpp"
#include "doctrina/report.hpp"

namespace doctrina {

// A contravariant functor from a category with products into posets.
// reindex(f) for f : A -> B goes from fiber(B) to fiber(A).
class Doctrine {
 public:
  virtual ~Doctrine() = default;

  virtual const CategoryRef& base() const = 0;
  virtual PosetRef fiber(Obj a) const = 0;
  virtual MonotoneMap reindex(const Arrow& f) const = 0;
  virtual std::string name() const { return "P"; }
};

using DoctrineRef = std::shared_ptr<const Doctrine>;

// Doctrine given by callbacks. Fibers are built once per object and cached.
class LambdaDoctrine final : public Doctrine {
 public:
  using FiberFn = std::function<PosetRef(Obj)>;
  using ReindexFn = std::function<MonotoneMap(const Arrow&)>;

  LambdaDoctrine(std::string name, CategoryRef base, FiberFn fiber, ReindexFn reindex);

  const CategoryRef& base() const override { return base_; }
  PosetRef fiber(Obj a) const override;
  MonotoneMap reindex(const Arrow& f) const override { return reindex_(f); }
  std::string name() const override { return name_; }

 private:
  std::string name_;
  CategoryRef base_;
  FiberFn fiber_;
  ReindexFn reindex_;
  mutable std::mutex mu_;
  mutable std::map<Obj, PosetRef> cache_;
};

DoctrineRef make_doctrine(std::string name, CategoryRef base, LambdaDoctrine::FiberFn fiber,
                          LambdaDoctrine::ReindexFn reindex);

// Every fiber is the one-point poset.
DoctrineRef trivial_doctrine(CategoryRef base);

// Doctrine over a tabulated base. `reindex` maps arrow indices to tables
// indexed by the enumeration of fiber(cod), giving elements of fiber(dom).
// Identities may be omitted; any other missing arrow must factor through
// declared ones (g . f with both known), otherwise UnresolvedReference.
// Declared composites that disagree are left for validate_doctrine.
DoctrineRef table_doctrine(std::string name, std::shared_ptr<const TableCategory> base,
                           std::vector<PosetRef> fibers,
                           std::map<std::uint32_t, std::vector<Elem>> reindex);

// Identities, composites and monotonicity of reindexing over base().objects()
// (the probes of a lazy base). Throws ReindexIdentityViolation,
// ReindexCompositionViolation or NotMonotone.
void validate_doctrine(const Doctrine& d, const Limits& limits, Report& report);

// Hom-sets among a fixed object list, computed once. nullopt entries exceeded
// the hom cap.
class HomTable {
 public:
  HomTable(const Category& c, std::vector<Obj> objects, std::size_t cap);

  const std::vector<Obj>& objects() const { return objects_; }
  const std::optional<std::vector<Arrow>>& operator()(Obj a, Obj b) const;
  bool truncated() const { return truncated_; }
  // every arrow in the enumerable hom-sets
  std::vector<Arrow> arrows() const;

 private:
  std::vector<Obj> objects_;
  std::map<std::pair<Obj, Obj>, std::optional<std::vector<Arrow>>> homs_;
  bool truncated_ = false;
};

std::string probe_list(const Category& c);

}  // namespace doctrina
