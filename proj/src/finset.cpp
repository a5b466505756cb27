#include "doctrina/finset.hpp"

#include <charconv>

#include "doctrina/error.hpp"

namespace doctrina {

namespace {

// Objects beyond this would make even the fiber enumeration pointless.
constexpr Obj kMaxCardinality = 1u << 20;

}  // namespace

FinSetCategory::FinSetCategory(std::vector<Obj> probes) : probes_(std::move(probes)) {
  for (Obj p : probes_)
    if (p > kMaxCardinality) fail(Errc::ProbeTooLarge, "probe set of size " + std::to_string(p));
}

std::optional<Obj> FinSetCategory::find_object(std::string_view label) const {
  Obj n = 0;
  auto [ptr, ec] = std::from_chars(label.data(), label.data() + label.size(), n);
  if (ec != std::errc{} || ptr != label.data() + label.size() || n > kMaxCardinality) return std::nullopt;
  return n;
}

Arrow FinSetCategory::function(Obj dom, Obj cod, std::vector<std::uint32_t> table) {
  if (table.size() != dom) fail(Errc::UsageError, "function table has the wrong length");
  for (auto v : table)
    if (v >= cod) fail(Errc::UsageError, "function value out of range");
  return Arrow{dom, cod, std::move(table)};
}

Arrow FinSetCategory::identity(Obj a) const {
  Arrow f{a, a, std::vector<std::uint32_t>(a)};
  for (Obj i = 0; i < a; ++i) f.rep[i] = i;
  return f;
}

Arrow FinSetCategory::compose(const Arrow& g, const Arrow& f) const {
  if (f.cod != g.dom)
    fail(Errc::CompositionUndefined, arrow_label(g) + " . " + arrow_label(f));
  Arrow h{f.dom, g.cod, std::vector<std::uint32_t>(f.dom)};
  for (Obj i = 0; i < f.dom; ++i) h.rep[i] = g.rep[f.rep[i]];
  return h;
}

std::optional<std::vector<Arrow>> FinSetCategory::hom(Obj a, Obj b, std::size_t cap) const {
  // |hom(a, b)| = b^a
  std::size_t count = 1;
  for (Obj i = 0; i < a; ++i) {
    if (b == 0) {
      count = 0;
      break;
    }
    if (count > cap / b) return std::nullopt;
    count *= b;
  }
  std::vector<Arrow> out;
  out.reserve(count);
  if (count == 0) return out;
  std::vector<std::uint32_t> table(a, 0);
  while (true) {
    out.push_back(Arrow{a, b, table});
    Obj i = 0;
    while (i < a && ++table[i] == b) table[i++] = 0;
    if (i == a) break;
  }
  return out;
}

Arrow FinSetCategory::bang(Obj a) const { return Arrow{a, 1, std::vector<std::uint32_t>(a, 0)}; }

Obj FinSetCategory::product(Obj a, Obj b) const {
  if (b != 0 && a > kMaxCardinality / b) fail(Errc::ProbeTooLarge, "product of sizes " + std::to_string(a) + " and " + std::to_string(b));
  return a * b;
}

Arrow FinSetCategory::pr1(Obj a, Obj b) const {
  Arrow f{product(a, b), a, std::vector<std::uint32_t>(a * b)};
  for (Obj i = 0; i < a * b; ++i) f.rep[i] = i / b;
  return f;
}

Arrow FinSetCategory::pr2(Obj a, Obj b) const {
  Arrow f{product(a, b), b, std::vector<std::uint32_t>(a * b)};
  for (Obj i = 0; i < a * b; ++i) f.rep[i] = i % b;
  return f;
}

Arrow FinSetCategory::pair(const Arrow& f, const Arrow& g) const {
  if (f.dom != g.dom) fail(Errc::CompositionUndefined, "pairing arrows with different domains");
  Arrow h{f.dom, product(f.cod, g.cod), std::vector<std::uint32_t>(f.dom)};
  for (Obj i = 0; i < f.dom; ++i) h.rep[i] = f.rep[i] * g.cod + g.rep[i];
  return h;
}

}  // namespace doctrina
