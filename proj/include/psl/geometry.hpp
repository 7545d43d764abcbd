#pragma once

#include <optional>

#include "psl/model.hpp"
#include "psl/tensor.hpp"

namespace psl {

/// First partials of the chart fields at a point (not tensors; used by the
/// bracket-path Nijenhuis computations and by raw Lie-derivative checks).
struct ChartPartials {
  std::vector<double> dg;    // dg[(a*d+i)*d+j]   = d_a g_ij
  std::vector<double> dphi;  // dphi[(a*d+i)*d+j] = d_a phi^i_j
  std::vector<double> deta;  // deta[a*d+b]       = d_a eta_b
  std::vector<double> dxi;   // dxi[a*d+b]        = d_a xi^b
};

/// Everything the identity checks need at one point, in the model's working
/// basis (coordinate basis for charts, the Lie frame for frame models).
struct GeomEval {
  int dim = 0;
  std::string frame_id;
  Eigen::VectorXd point;

  TensorValue g;        // (0,2)
  TensorValue g_inv;    // (2,0)
  TensorValue gamma;    // connection coefficients, (k,i,j) -> Gamma^k_ij
  TensorValue riemann;  // (0,4), R(x,y,z,w) = g(R(x,y)z,w)
  TensorValue ricci;    // (0,2), Ric(x,y) = sum_i R(e_i,x,y,e_i)
  double scal = 0.0;

  bool has_structure = false;
  TensorValue phi;        // (1,1)
  TensorValue xi;         // (1,0)
  TensorValue eta;        // (0,1)
  TensorValue nabla_phi;  // (a,b,c) -> (nabla_a phi)^b_c
  TensorValue nabla_xi;   // (a,b)   -> (nabla_a xi)^b
  TensorValue nabla_eta;  // (a,b)   -> (nabla_a eta)_b
  TensorValue F;          // (0,3), F(x,y,z) = g((nabla_x phi)y, z)
  TensorValue g_tilde;    // (0,2), g(x,phi y) + eta(x) eta(y)
  TensorValue d_eta;      // (0,2), x(eta y) - y(eta x) - eta([x,y])
  double scal_star = 0.0;

  std::optional<ChartPartials> raw;            // charts only
  std::optional<LieFrameModel> frame_backend;  // frame models only (copy)
};

GeomEval evaluate_geometry(const ManifoldModel& m, const Eigen::VectorXd& p);

TensorValue christoffel(const ManifoldModel& m, const Eigen::VectorXd& p);
TensorValue riemann(const ManifoldModel& m, const Eigen::VectorXd& p);
TensorValue ricci(const ManifoldModel& m, const Eigen::VectorXd& p);
double scalar(const ManifoldModel& m, const Eigen::VectorXd& p);

/// A tensor field given either as a chart jet field or constant frame components.
struct TensorField {
  std::vector<Var> variance;
  JetFieldFn chart_fn;                  // flat row-major components
  std::vector<double> frame_components;  // for frame models
};

/// Covariant derivative of a field at p; the derivative slot comes first (lower).
TensorValue covariant_derivative(const ManifoldModel& m, const Eigen::VectorXd& p,
                                 const TensorField& field);

/// g-orthonormal basis by Gram-Schmidt over the coordinate/frame basis, pivoting
/// on the largest remaining norm. Columns are the frame vectors.
Eigen::MatrixXd orthonormal_frame(const Eigen::MatrixXd& g);

/// 2n-vector orthonormal basis of ker(eta), built from the projections
/// v - eta(v) xi of the working basis.
Eigen::MatrixXd horizontal_frame(const Eigen::MatrixXd& g, const Eigen::VectorXd& xi,
                                 const Eigen::VectorXd& eta);

/// Pulls a fully covariant tensor back along the linear map A (columns = new
/// basis vectors in the old basis), relabelling to new_frame.
TensorValue pull_back_covariant(const TensorValue& t, const Eigen::MatrixXd& A,
                                const std::string& new_frame);

}  // namespace psl
