#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <variant>

#include "psl/jet.hpp"
#include "psl/rng.hpp"
#include "psl/tensor.hpp"

namespace psl {

/// Lie group with left-invariant structure: constant structure constants c^k_{ij}
/// and constant frame components. Everything downstream is exact algebra.
struct LieFrameModel {
  int dim = 0;
  std::string frame_id = "frame";
  std::vector<double> c;  // c[(k*dim+i)*dim+j] = c^k_{ij}, components of [e_i,e_j]
  Eigen::MatrixXd g;      // frame metric

  // Structure components; empty when the model carries no (phi,xi,eta).
  Eigen::MatrixXd phi;
  Eigen::VectorXd xi;
  Eigen::VectorXd eta;

  double c_at(int k, int i, int j) const {
    return c[(static_cast<std::size_t>(k) * dim + i) * dim + j];
  }
  void set_c(int k, int i, int j, double v) {
    c[(static_cast<std::size_t>(k) * dim + i) * dim + j] = v;
    c[(static_cast<std::size_t>(k) * dim + j) * dim + i] = -v;
  }
  bool has_structure() const { return phi.size() > 0; }

  /// Checks antisymmetry (exact), the Jacobi identity (residual < 1e-12) and
  /// positive definiteness of the frame metric. Throws ShapeError on failure.
  void validate() const;
};

/// Chart-based model: the metric (and optional structure fields) are jet-evaluable
/// maps from coordinates, giving exact first and second partials.
struct ChartModel {
  int dim = 0;
  std::string frame_id = "chart";
  SampleBox domain;
  JetFieldFn metric;  // dim*dim symmetric, row-major

  // Optional structure fields (row-major (1,1) for phi).
  JetFieldFn phi;
  JetFieldFn xi;
  JetFieldFn eta;

  bool has_structure() const { return static_cast<bool>(phi); }
};

struct ManifoldModel {
  std::variant<LieFrameModel, ChartModel> backend;

  bool is_chart() const { return std::holds_alternative<ChartModel>(backend); }
  const ChartModel& chart() const { return std::get<ChartModel>(backend); }
  const LieFrameModel& frame() const { return std::get<LieFrameModel>(backend); }
  int dim() const {
    return is_chart() ? chart().dim : frame().dim;
  }
  const std::string& frame_id() const {
    return is_chart() ? chart().frame_id : frame().frame_id;
  }
  bool has_structure() const {
    return is_chart() ? chart().has_structure() : frame().has_structure();
  }

  /// Representative points for randomized checks: box samples for charts, a single
  /// origin for (left-invariant) frame models.
  std::vector<Eigen::VectorXd> sample(int k, const Rng& rng) const;
};

/// Parses {"dim":...,"c":[[i,j,k,value],...],"g":[[...]],"phi":[[...]],"xi":[...],"eta":[...]}.
LieFrameModel lie_frame_from_json(const std::string& text);
std::string lie_frame_to_json(const LieFrameModel& m);

}  // namespace psl
