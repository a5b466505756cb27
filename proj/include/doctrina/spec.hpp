#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "doctrina/comonad.hpp"
#include "doctrina/limits.hpp"
#include "doctrina/morphism.hpp"
#include "doctrina/propositional.hpp"
#include "doctrina/report.hpp"

namespace doctrina {

// One line inside a block: `key args... <sep> values...`. How args and values
// are separated depends on the key (see README for the grammar).
struct SpecEntry {
  std::string key;
  std::vector<std::string> args;
  std::vector<std::string> values;
  std::size_t line = 0;  // not part of equality

  bool operator==(const SpecEntry& o) const { return key == o.key && args == o.args && values == o.values; }
};

struct SpecBlock {
  std::string kind;  // poset, category, doctrine, morphism, comonad, builtin
  std::string name;
  std::string builtin;  // powerset or lt, for builtin lines
  std::vector<SpecEntry> entries;
  std::size_t line = 0;

  bool operator==(const SpecBlock& o) const {
    return kind == o.kind && name == o.name && builtin == o.builtin && entries == o.entries;
  }
  const SpecEntry* find(std::string_view key) const;
};

struct SpecDocument {
  std::vector<SpecBlock> blocks;

  bool operator==(const SpecDocument&) const = default;
  const SpecBlock* find(std::string_view name) const;
};

// Syntax only: block shapes, known keys, required keys, duplicate names.
// SyntaxError witnesses start "line L, column C:".
SpecDocument parse_spec(std::string_view text);
SpecDocument parse_spec_file(const std::filesystem::path& path);

// Canonical text; parse_spec(print_spec(d)) == d.
std::string print_spec(const SpecDocument& doc);

// The core objects, one per block. Blocks may only refer to earlier blocks.
struct SpecEnv {
  std::map<std::string, PosetRef> posets;
  std::map<std::string, std::shared_ptr<const TableCategory>> categories;
  std::map<std::string, DoctrineRef> doctrines;
  std::map<std::string, LtTheory> theories;  // builtin lt blocks, also listed in doctrines
  std::map<std::string, DoctrineMorphism> morphisms;
  std::map<std::string, Comonad> comonads;
};

// Builds and validates every block; the validation checks land in `report`
// prefixed by the block name. Errors raised for a block are rethrown with
// "line L: " in front of the witness.
SpecEnv build_spec(const SpecDocument& doc, const Limits& limits, Report& report);

// An element of a fiber by label; for a builtin lt doctrine a formula is
// accepted as well. UnresolvedReference otherwise.
Elem resolve_element(const SpecEnv& env, const std::string& doctrine, Obj a, const std::string& text);

}  // namespace doctrina
