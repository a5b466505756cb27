#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "doctrina/doctrine.hpp"
#include "doctrina/finset.hpp"
#include "doctrina/limits.hpp"

namespace doctrina {

// Subsets of finite sets with inverse-image reindexing, over the lazy finite
// set skeleton. Throws ProbeTooLarge when a probe's powerset exceeds the
// fiber cap.
DoctrineRef powerset_doctrine(std::vector<Obj> probes, const Limits& limits = {});

// Direct image along pr1 : C x B -> C, and the "for all fibers" image.
Elem direct_image(Obj c, Obj b, Elem s);
Elem universal_image(Obj c, Obj b, Elem s);

struct RandomBounds {
  unsigned max_objects = 4;  // base size
  unsigned max_points = 4;   // fibers are subsets of at most this many points
  bool downset_fibers = false;  // distributive but not Boolean fibers
};

// Doctrine over a random finite meet-semilattice. Each point t gets a label
// l(t) in the base, fiber(a) is the powerset (or the downsets of a random
// order) of S_a = {t | l(t) <= a}, and reindexing along a <= b intersects
// with S_a. Deterministic in the seed.
struct RandomDoctrine {
  std::shared_ptr<const TableCategory> base;
  DoctrineRef doctrine;
  std::vector<Elem> support;  // S_a per object
  unsigned points = 0;
};

RandomDoctrine random_semilattice_doctrine(std::uint64_t seed, const RandomBounds& bounds = {});

}  // namespace doctrina
