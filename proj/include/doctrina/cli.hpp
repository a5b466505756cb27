#pragma once

#include <string>
#include <utility>
#include <vector>

#include "doctrina/reader.hpp"
#include "doctrina/report.hpp"
#include "doctrina/spec.hpp"

namespace doctrina {

struct CommandResult {
  Report report;
  // extra human-readable blocks (emitted spec text, transport table)
  std::vector<std::pair<std::string, std::string>> sections;
  int status = 0;      // 0 pass, 1 check failure, 2 usage or parse error
  std::string output;  // what the tool prints
};

// args excludes the program name, e.g. {"demo", "lt-axiom"}.
CommandResult run_command(const std::vector<std::string>& args);

// Human section, then a ```report fence of key=value lines.
std::string render_report(const std::string& command, const Report& report,
                          const std::vector<std::pair<std::string, std::string>>& sections, int status);

// The extension over a tabulated base written back as spec blocks: one poset
// per fiber, the Kleisli category and the doctrine. nullopt (with `why` set)
// for a lazy base or past the size caps.
std::optional<SpecDocument> extension_spec(const Extension& e, const std::string& name, const Limits& limits,
                                           std::string& why);

// The arrow a -> b of `c` whose label is `label` (a table name, or the
// default "A->B[...]" label of a finite-set base).
Arrow resolve_arrow(const Category& c, Obj a, Obj b, const std::string& label, const Limits& limits);

}  // namespace doctrina
