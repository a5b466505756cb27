#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace doctrina {

enum class Outcome { pass, fail, skipped };

std::string_view outcome_name(Outcome o);

struct Check {
  std::string name;
  Outcome outcome = Outcome::pass;
  std::string detail;
};

// Ordered list of check outcomes plus key=value facts. Insertion order is the
// rendering order, so reports stay byte-stable.
class Report {
 public:
  explicit Report(std::string title = {}) : title_(std::move(title)) {}

  void pass(std::string name, std::string detail = {});
  void fail(std::string name, std::string detail);
  void skip(std::string name, std::string detail);
  void add(Check c) { checks_.push_back(std::move(c)); }
  void expect(bool ok, std::string name, std::string detail_if_not);
  void fact(std::string key, std::string value);

  // Appends the other report's checks and facts, names prefixed.
  void merge(const Report& other, std::string_view prefix = {});

  bool ok() const;
  std::size_t count(Outcome o) const;
  const std::string& title() const { return title_; }
  const std::vector<Check>& checks() const { return checks_; }
  const std::vector<std::pair<std::string, std::string>>& facts() const { return facts_; }

 private:
  std::string title_;
  std::vector<Check> checks_;
  std::vector<std::pair<std::string, std::string>> facts_;
};

}  // namespace doctrina
