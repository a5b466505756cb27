#pragma once

// Seeded generators for property tests. Hand-rolled so that streams are
// identical on every platform.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "doctrina/poset.hpp"

namespace testgen {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed * 0x9E3779B97F4A7C15ULL + 1) {}

  std::uint64_t next() {  // splitmix64
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
  bool coin(unsigned percent = 50) { return below(100) < percent; }

 private:
  std::uint64_t state_;
};

struct RawPoset {
  std::vector<std::string> names;
  std::vector<std::vector<bool>> leq;

  std::size_t size() const { return names.size(); }
};

inline RawPoset from_relation(std::size_t n, const std::vector<std::vector<bool>>& rel,
                              const std::string& prefix = "e") {
  RawPoset p;
  for (std::size_t i = 0; i < n; ++i) p.names.push_back(prefix + std::to_string(i));
  p.leq = rel;
  return p;
}

inline void close_transitively(std::vector<std::vector<bool>>& rel) {
  const std::size_t n = rel.size();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t a = 0; a < n; ++a)
      if (rel[a][k])
        for (std::size_t b = 0; b < n; ++b)
          if (rel[k][b]) rel[a][b] = true;
}

// Random DAG in index order, then reflexive-transitive closure.
inline RawPoset random_poset(Rng& rng, std::size_t n, unsigned density = 30) {
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a) {
    rel[a][a] = true;
    for (std::size_t b = a + 1; b < n; ++b)
      if (rng.coin(density)) rel[a][b] = true;
  }
  close_transitively(rel);
  return from_relation(n, rel);
}

// Family of subsets of a small ground set closed under intersection, with the
// full set: always a lattice.
inline RawPoset closure_system(Rng& rng, unsigned ground, std::size_t picks) {
  std::vector<std::uint32_t> family{(1u << ground) - 1};
  for (std::size_t i = 0; i < picks; ++i) family.push_back(static_cast<std::uint32_t>(rng.below(1u << ground)));
  bool grew = true;
  while (grew) {
    grew = false;
    std::sort(family.begin(), family.end());
    family.erase(std::unique(family.begin(), family.end()), family.end());
    const auto snapshot = family;
    for (auto a : snapshot)
      for (auto b : snapshot)
        if (std::find(family.begin(), family.end(), a & b) == family.end()) {
          family.push_back(a & b);
          grew = true;
        }
  }
  const std::size_t n = family.size();
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) rel[a][b] = (family[a] & ~family[b]) == 0;
  return from_relation(n, rel, "s");
}

// Downsets of a random poset: a distributive lattice.
inline RawPoset downset_lattice(Rng& rng, std::size_t points) {
  RawPoset base = random_poset(rng, points, 35);
  std::vector<std::uint32_t> downs;
  for (std::uint32_t s = 0; s < (1u << points); ++s) {
    bool closed = true;
    for (std::size_t a = 0; a < points && closed; ++a)
      if ((s >> a) & 1)
        for (std::size_t b = 0; b < points; ++b)
          if (base.leq[b][a] && !((s >> b) & 1)) closed = false;
    if (closed) downs.push_back(s);
  }
  const std::size_t n = downs.size();
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) rel[a][b] = (downs[a] & ~downs[b]) == 0;
  return from_relation(n, rel, "d");
}

inline RawPoset boolean_algebra(unsigned atoms) {
  const std::size_t n = std::size_t{1} << atoms;
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) rel[a][b] = (a & ~b) == 0;
  return from_relation(n, rel, "b");
}

inline RawPoset chain(std::size_t n) {
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) rel[a][b] = true;
  return from_relation(n, rel, "c");
}

inline RawPoset antichain(std::size_t n) {
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a) rel[a][a] = true;
  return from_relation(n, rel, "a");
}

// bottom, three atoms, top
inline RawPoset m3() {
  std::vector<std::vector<bool>> rel(5, std::vector<bool>(5, false));
  for (std::size_t a = 0; a < 5; ++a) {
    rel[a][a] = true;
    rel[0][a] = true;
    rel[a][4] = true;
  }
  RawPoset p = from_relation(5, rel);
  p.names = {"bot", "x", "y", "z", "top"};
  return p;
}

// bottom < a < b < top, bottom < c < top
inline RawPoset n5() {
  std::vector<std::vector<bool>> rel(5, std::vector<bool>(5, false));
  for (std::size_t a = 0; a < 5; ++a) {
    rel[a][a] = true;
    rel[0][a] = true;
    rel[a][4] = true;
  }
  rel[1][2] = true;
  RawPoset p = from_relation(5, rel);
  p.names = {"bot", "a", "b", "c", "top"};
  return p;
}

inline std::shared_ptr<const doctrina::FinitePoset> build(const RawPoset& raw) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t a = 0; a < raw.size(); ++a)
    for (std::size_t b = 0; b < raw.size(); ++b)
      if (raw.leq[a][b]) pairs.emplace_back(raw.names[a], raw.names[b]);
  return doctrina::validate_poset(raw.names, pairs);
}

// The suite of small posets used by the order-core properties.
inline std::vector<RawPoset> poset_suite(std::uint64_t seed, std::size_t count) {
  Rng rng(seed);
  std::vector<RawPoset> out{chain(1), chain(2), chain(3), antichain(2), m3(), n5(),
                            boolean_algebra(1), boolean_algebra(2), boolean_algebra(3),
                            boolean_algebra(4)};
  while (out.size() < count) {
    switch (rng.below(3)) {
      case 0:
        out.push_back(random_poset(rng, 1 + rng.below(16)));
        break;
      case 1: {
        auto p = closure_system(rng, 4, 1 + rng.below(6));
        if (p.size() <= 16) out.push_back(p);
        break;
      }
      default: {
        auto p = downset_lattice(rng, 2 + rng.below(3));
        if (p.size() <= 16) out.push_back(p);
        break;
      }
    }
  }
  return out;
}

}  // namespace testgen
