#include "psl/model.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "psl/errors.hpp"

namespace psl {

void LieFrameModel::validate() const {
  if (dim <= 0) throw ShapeError("LieFrameModel: dim must be positive");
  if (c.size() != static_cast<std::size_t>(dim) * dim * dim)
    throw ShapeError("LieFrameModel: structure constant array has wrong size");
  if (g.rows() != dim || g.cols() != dim)
    throw ShapeError("LieFrameModel: frame metric has wrong shape");

  for (int k = 0; k < dim; ++k)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        if (c_at(k, i, j) != -c_at(k, j, i))
          throw ShapeError("LieFrameModel: c^k_ij must be exactly antisymmetric in i,j");

  // Jacobi: sum_cyc c^m_{ij} c^l_{mk} = 0.
  double jac = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) {
          double s = 0.0;
          for (int m = 0; m < dim; ++m)
            s += c_at(m, i, j) * c_at(l, m, k) + c_at(m, j, k) * c_at(l, m, i) +
                 c_at(m, k, i) * c_at(l, m, j);
          jac = std::max(jac, std::abs(s));
        }
  if (jac >= 1e-12) throw ShapeError("LieFrameModel: Jacobi identity residual too large");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw ShapeError("LieFrameModel: frame metric must be positive definite");
}

std::vector<Eigen::VectorXd> ManifoldModel::sample(int k, const Rng& rng) const {
  if (is_chart()) return sample_points(chart().domain, k, rng);
  // Left-invariant data is point-independent; a single representative suffices.
  (void)k;
  (void)rng;
  return {Eigen::VectorXd::Zero(0)};
}

LieFrameModel lie_frame_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  LieFrameModel m;
  m.dim = j.at("dim").get<int>();
  if (m.dim <= 0) throw ShapeError("lie_frame_from_json: dim must be positive");
  m.c.assign(static_cast<std::size_t>(m.dim) * m.dim * m.dim, 0.0);
  for (const auto& row : j.at("c")) {
    const int i = row.at(0).get<int>(), jj = row.at(1).get<int>(), k = row.at(2).get<int>();
    const double v = row.at(3).get<double>();
    if (i < 0 || i >= m.dim || jj < 0 || jj >= m.dim || k < 0 || k >= m.dim)
      throw IndexError("lie_frame_from_json: bracket index out of range");
    m.set_c(k, i, jj, v);
  }
  auto read_matrix = [&](const char* key) {
    Eigen::MatrixXd a(m.dim, m.dim);
    const auto& rows = j.at(key);
    for (int r = 0; r < m.dim; ++r)
      for (int cidx = 0; cidx < m.dim; ++cidx) a(r, cidx) = rows.at(r).at(cidx).get<double>();
    return a;
  };
  auto read_vector = [&](const char* key) {
    Eigen::VectorXd a(m.dim);
    const auto& row = j.at(key);
    for (int r = 0; r < m.dim; ++r) a[r] = row.at(r).get<double>();
    return a;
  };
  m.g = read_matrix("g");
  if (j.contains("phi")) {
    m.phi = read_matrix("phi");
    m.xi = read_vector("xi");
    m.eta = read_vector("eta");
  }
  m.validate();
  return m;
}

std::string lie_frame_to_json(const LieFrameModel& m) {
  nlohmann::json j;
  j["dim"] = m.dim;
  nlohmann::json cs = nlohmann::json::array();
  for (int i = 0; i < m.dim; ++i)
    for (int k = i + 1; k < m.dim; ++k)
      for (int l = 0; l < m.dim; ++l)
        if (m.c_at(l, i, k) != 0.0) cs.push_back({i, k, l, m.c_at(l, i, k)});
  j["c"] = cs;
  auto mat = [&](const Eigen::MatrixXd& a) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < a.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int c2 = 0; c2 < a.cols(); ++c2) row.push_back(a(r, c2));
      rows.push_back(row);
    }
    return rows;
  };
  j["g"] = mat(m.g);
  if (m.has_structure()) {
    j["phi"] = mat(m.phi);
    nlohmann::json xi = nlohmann::json::array(), eta = nlohmann::json::array();
    for (int r = 0; r < m.dim; ++r) {
      xi.push_back(m.xi[r]);
      eta.push_back(m.eta[r]);
    }
    j["xi"] = xi;
    j["eta"] = eta;
  }
  return j.dump(2);
}

}  // namespace psl
