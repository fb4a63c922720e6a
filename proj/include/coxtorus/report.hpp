#pragma once

#include <string>
#include <utility>
#include <vector>

namespace coxtorus {

struct Check {
  std::string tag;   // short label of the claim being checked
  std::string name;  // what was compared
  bool pass = false;
  std::string detail;
};

struct Report {
  std::vector<Check> checks;
  std::vector<std::string> notes;  // informational lines, never affect the verdict

  void add(std::string tag, std::string name, bool pass, std::string detail = {}) {
    checks.push_back({std::move(tag), std::move(name), pass, std::move(detail)});
  }
  void note(std::string s) { notes.push_back(std::move(s)); }
  void merge(const Report& o) {
    checks.insert(checks.end(), o.checks.begin(), o.checks.end());
    notes.insert(notes.end(), o.notes.begin(), o.notes.end());
  }
  bool ok() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& c : checks) n += !c.pass;
    return n;
  }
};

}  // namespace coxtorus
