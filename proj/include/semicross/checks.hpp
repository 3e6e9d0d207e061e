#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "semicross/ogroup.hpp"

namespace semicross {

/// Outcome of one numerical check, usually aggregated over samples.
struct CheckResult {
  std::string name;
  std::optional<GroupElement> x;
  std::optional<GroupElement> y;
  double residual = 0;
  double tol = 0;
  bool pass = true;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckResult> items;

  bool pass() const {
    return std::all_of(items.begin(), items.end(), [](const CheckResult& c) { return c.pass; });
  }

  int failed() const {
    return static_cast<int>(
        std::count_if(items.begin(), items.end(), [](const CheckResult& c) { return !c.pass; }));
  }

  const CheckResult* first_failure() const {
    for (const auto& c : items)
      if (!c.pass) return &c;
    return nullptr;
  }

  double max_residual() const {
    double r = 0;
    for (const auto& c : items) r = std::max(r, c.residual);
    return r;
  }

  void add(CheckResult c) { items.push_back(std::move(c)); }

  void merge(const CheckReport& other) {
    items.insert(items.end(), other.items.begin(), other.items.end());
  }

  /// Record `residual` under `name`, keeping only the worst instance.
  void track(const std::string& name, double residual, double tol,
             const std::optional<GroupElement>& x = std::nullopt,
             const std::optional<GroupElement>& y = std::nullopt) {
    for (auto& c : items) {
      if (c.name == name) {
        if (residual > c.residual) {
          c.residual = residual;
          c.x = x;
          c.y = y;
          c.pass = residual <= tol;
        }
        return;
      }
    }
    items.push_back(CheckResult{name, x, y, residual, tol, residual <= tol, ""});
  }
};

}  // namespace semicross
