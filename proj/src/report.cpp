#include "doctrina/report.hpp"

#include <algorithm>

namespace doctrina {

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::pass:
      return "pass";
    case Outcome::fail:
      return "fail";
    case Outcome::skipped:
      return "skipped";
  }
  return "?";
}

void Report::pass(std::string name, std::string detail) {
  checks_.push_back({std::move(name), Outcome::pass, std::move(detail)});
}

void Report::fail(std::string name, std::string detail) {
  checks_.push_back({std::move(name), Outcome::fail, std::move(detail)});
}

void Report::skip(std::string name, std::string detail) {
  checks_.push_back({std::move(name), Outcome::skipped, std::move(detail)});
}

void Report::expect(bool ok, std::string name, std::string detail_if_not) {
  if (ok)
    pass(std::move(name));
  else
    fail(std::move(name), std::move(detail_if_not));
}

void Report::fact(std::string key, std::string value) { facts_.emplace_back(std::move(key), std::move(value)); }

void Report::merge(const Report& other, std::string_view prefix) {
  const std::string p(prefix);
  for (const auto& c : other.checks_) checks_.push_back({p + c.name, c.outcome, c.detail});
  // fact keys stay dotted words: "model: factorization " becomes "model.factorization."
  std::string fp;
  for (char c : p) {
    if (c == ':') continue;
    fp += c == ' ' ? '.' : c;
  }
  if (!fp.empty() && fp.back() != '.') fp += '.';
  for (auto& [k, v] : other.facts_) {
    std::string key = fp + k;
    key.erase(std::unique(key.begin(), key.end(), [](char a, char b) { return a == '.' && b == '.'; }), key.end());
    facts_.emplace_back(std::move(key), v);
  }
}

bool Report::ok() const {
  return std::none_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.outcome == Outcome::fail; });
}

std::size_t Report::count(Outcome o) const {
  return static_cast<std::size_t>(
      std::count_if(checks_.begin(), checks_.end(), [o](const Check& c) { return c.outcome == o; }));
}

}  // namespace doctrina
