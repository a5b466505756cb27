#pragma once

#include <vector>

#include "doctrina/category.hpp"

namespace doctrina {

// Skeleton of finite sets, presented lazily: object n is {0,...,n-1}, an
// arrow is its function table. n x m = n*m encoded row-major, so pr1(i) = i/m
// and pr2(i) = i%m; 1 is terminal and products are strictly unital and
// associative. Checks run over the declared probes.
class FinSetCategory final : public Category {
 public:
  explicit FinSetCategory(std::vector<Obj> probes);

  std::vector<Obj> objects() const override { return probes_; }
  bool lazy() const override { return true; }
  std::optional<Obj> find_object(std::string_view label) const override;

  Arrow identity(Obj a) const override;
  Arrow compose(const Arrow& g, const Arrow& f) const override;
  std::optional<std::vector<Arrow>> hom(Obj a, Obj b, std::size_t cap) const override;

  bool has_products() const override { return true; }
  Obj terminal() const override { return 1; }
  Arrow bang(Obj a) const override;
  Obj product(Obj a, Obj b) const override;
  Arrow pr1(Obj a, Obj b) const override;
  Arrow pr2(Obj a, Obj b) const override;
  Arrow pair(const Arrow& f, const Arrow& g) const override;
  bool strict_units() const override { return true; }
  bool strict_assoc() const override { return true; }

  // Arrow from an explicit table; checks the values are below `cod`.
  static Arrow function(Obj dom, Obj cod, std::vector<std::uint32_t> table);

 private:
  std::vector<Obj> probes_;
};

}  // namespace doctrina
