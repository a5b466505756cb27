#pragma once

#include <cstddef>

namespace doctrina {

// Caps for every exhaustive enumeration. Exceeding one is reported, never
// silently truncated.
struct Limits {
  std::size_t fiber_cap = std::size_t{1} << 16;  // elements per enumerated fiber
  std::size_t hom_cap = 4096;                    // arrows per enumerated hom-set
  std::size_t em_budget = 1'000'000;             // candidate coalgebra structures
  std::size_t search_budget = 200'000;           // morphism / 2-cell search nodes
  std::size_t check_budget = 4'000'000;          // element evaluations per law check
};

}  // namespace doctrina
