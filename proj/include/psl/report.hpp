#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace psl {

struct CheckDetail {
  std::string name;
  double residual = 0.0;
};

/// Outcome of one named identity check over a sample set. The pass flag uses
/// max_residual < tol; residuals in the band [tol, 100 tol] are flagged
/// indeterminate rather than failed, so AD rounding is never misread as geometry.
struct CheckReport {
  std::string check;
  int points = 0;
  double max_residual = 0.0;
  double tol = 1e-8;
  bool pass = false;
  std::uint64_t seed = 0;
  std::vector<CheckDetail> detail;

  void add(const std::string& name, double residual) {
    detail.push_back({name, residual});
    if (residual > max_residual) max_residual = residual;
  }

  void finalize() { pass = max_residual < tol; }

  std::string verdict() const {
    if (max_residual < tol) return "pass";
    if (max_residual > 100.0 * tol) return "fail";
    return "indeterminate - tighten sampling";
  }

  nlohmann::json to_json() const;
};

nlohmann::json reports_to_json(const std::vector<CheckReport>& reports);

}  // namespace psl
