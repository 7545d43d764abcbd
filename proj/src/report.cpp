#include "psl/report.hpp"

namespace psl {

nlohmann::json CheckReport::to_json() const {
  nlohmann::json j;
  j["check"] = check;
  j["points"] = points;
  j["max_residual"] = max_residual;
  j["tol"] = tol;
  j["pass"] = pass;
  j["seed"] = seed;
  nlohmann::json det = nlohmann::json::array();
  for (const auto& d : detail) {
    nlohmann::json e;
    e["name"] = d.name;
    e["residual"] = d.residual;
    const bool p = d.residual < tol;
    e["verdict"] = p ? "pass" : (d.residual > 100.0 * tol ? "fail" : "indeterminate - tighten sampling");
    det.push_back(e);
  }
  j["detail"] = det;
  return j;
}

nlohmann::json reports_to_json(const std::vector<CheckReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(r.to_json());
  return arr;
}

}  // namespace psl
