#pragma once

#include <memory>
#include <span>

#include "psl/geometry.hpp"
#include "psl/report.hpp"
#include "psl/rng.hpp"

namespace psl {

struct PhpcrModel;

/// An almost paracontact paracomplex Riemannian structure: a manifold model of odd
/// dimension 2n+1 whose (phi, xi, eta, g) live in the backend (constant frame
/// components or chart fields).
struct ApcpcStructure {
  ManifoldModel model;
  std::string name = "apcpc";
  // Set when built by hyperbolic_extension; enables slice computations.
  std::shared_ptr<const PhpcrModel> extension_base;

  int dim() const { return model.dim(); }
  int n() const { return (model.dim() - 1) / 2; }
};

using Points = std::vector<Eigen::VectorXd>;

Points structure_sample(const ApcpcStructure& s, int k, const Rng& rng);

/// Residuals of the defining axioms phi^2 = id - eta (x) xi, eta(xi) = 1,
/// phi xi = 0, eta o phi = 0, g(.,xi) = eta, g(phi.,phi.) = g - eta (x) eta,
/// tr phi = 0, at every sample point.
CheckReport validate_structure(const ApcpcStructure& s, const Points& pts, const Tol& tol);

/// g~(x,y) = g(x,phi y) + eta(x) eta(y).
TensorValue associated_metric(const ApcpcStructure& s, const Eigen::VectorXd& p);

/// F(x,y,z) = g((nabla_x phi) y, z).
TensorValue fundamental_F(const ApcpcStructure& s, const Eigen::VectorXd& p);

struct LeeForms {
  TensorValue theta;       // sum_i F(e_i, e_i, .) over a horizontal orthonormal basis
  TensorValue theta_star;  // sum_i F(e_i, phi e_i, .)
  TensorValue omega;       // F(xi, xi, .)
};
LeeForms lee_forms(const GeomEval& ev);
LeeForms lee_forms(const ApcpcStructure& s, const Eigen::VectorXd& p);

/// Nijenhuis tensors through the F-expressions.
TensorValue nijenhuis(const GeomEval& ev);
TensorValue assoc_nijenhuis(const GeomEval& ev);

/// Independent route: N from [phi,phi] - d eta (x) xi, N^ from the symmetric
/// brackets, using raw partial derivatives (charts) or structure constants (frames).
TensorValue nijenhuis_bracket(const ApcpcStructure& s, const Eigen::VectorXd& p);
TensorValue assoc_nijenhuis_bracket(const ApcpcStructure& s, const Eigen::VectorXd& p);

/// Checks F = (1/4)[N(phi x,y,z)+N(phi x,z,y)+N^(phi x,y,z)+N^(phi x,z,y)]
///           - (1/2) eta(x)[N(xi,y,phi z)+N^(xi,y,phi z)+eta(z) N^(xi,xi,phi y)]
/// with both sides computed independently (F via nabla, N/N^ via brackets).
CheckReport verify_nabf(const ApcpcStructure& s, const Points& pts, const Tol& tol);

struct SasakiVerdict {
  bool is_para_sasaki_like = false;
  CheckReport report;
};

/// Evaluates the three equivalent characterizations (the F-conditions, the
/// closed form of nabla phi, and the Nijenhuis conditions) and asserts their
/// verdicts agree; when they pass, also checks d eta = 0, nabla_xi xi = 0,
/// theta = -2n eta, theta* = 0, omega = 0.
SasakiVerdict check_para_sasaki_like(const ApcpcStructure& s, const Points& pts, const Tol& tol);

struct ConeData {
  ChartModel cone;     // dim 2n+2; last coordinate is r
  JetFieldFn p_check;  // the paracomplex structure field on the cone
  int base_dim = 0;
};

/// Riemannian cone r^2 g + (1-r^2) eta (x) eta + dr^2 with the induced paracomplex
/// structure; base must be chart-backed.
ConeData build_cone(const ApcpcStructure& s);

/// (a,b,c) -> g(( nabla_a P)db, dc) on the cone at the given (base point, r).
TensorValue cone_nabla_p(const ConeData& cone, const Eigen::VectorXd& cone_point);

/// || nabla P || over sampled base points x given r values; names the offending
/// component when it is bounded away from zero.
CheckReport check_cone_parallel(const ApcpcStructure& s, const Points& pts,
                                std::span<const double> r_values, const Tol& tol);

/// Spot-verifies the cone connection component formulas (the xi-, d/dr- and
/// xi-derivative rows) against direct values on an arbitrary apcpcR base.
CheckReport check_cone_formulas(const ApcpcStructure& s, const Points& pts,
                                std::span<const double> r_values, const Tol& tol);

}  // namespace psl
