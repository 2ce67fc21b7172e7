#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace cheese {

/// Ordered list of named pass/fail checks. Failures are entries, never
/// exceptions.
struct VerificationReport {
  struct Check {
    std::string name;
    bool passed = true;
    std::string detail;
  };

  std::vector<Check> checks;

  void add(std::string name, bool passed, std::string detail = {}) {
    checks.push_back({std::move(name), passed, std::move(detail)});
  }

  void append(const VerificationReport& other, const std::string& prefix = {}) {
    for (const auto& c : other.checks) checks.push_back({prefix + c.name, c.passed, c.detail});
  }

  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }

  const Check* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }

  std::string to_text() const {
    std::string out;
    for (const auto& c : checks) {
      out += c.passed ? "PASS " : "FAIL ";
      out += c.name;
      if (!c.detail.empty()) out += "  (" + c.detail + ")";
      out += '\n';
    }
    return out;
  }
};

}  // namespace cheese
