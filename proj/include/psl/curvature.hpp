#pragma once

#include "psl/structure.hpp"

namespace psl {

/// Curvature-phi exchange identity on para-Sasaki-like structures:
/// R(x,y,phi z,w) - R(x,y,z,phi w) equals the g/eta closed form. Residuals are
/// componentwise plus evaluations on `quads` random quadruples.
CheckReport check_curf(const ApcpcStructure& s, const Points& pts, int quads, Rng rng,
                       const Tol& tol, bool enforce_precondition = true);

/// The xi-direction identities: R(x,y)xi = -eta(y)x + eta(x)y, R(xi,x)xi = x - eta(x)xi,
/// Ric(y,xi) = -2n eta(y), and R(x,y,z,xi) = R(xi,z,y,x) with its closed form.
CheckReport check_xi_curvature(const ApcpcStructure& s, const Points& pts, int quads, Rng rng,
                               const Tol& tol, bool enforce_precondition = true);

/// Gauss relation against the directly computed slice curvature, the full
/// curvature decomposition, Ric = Ric^h - 2n eta (x) eta, Scal = Scal^h - 2n and
/// Scal* = Scal^h*. Requires a hyperbolic extension (computable slice).
CheckReport horizontal_decomposition(const ApcpcStructure& s, const Points& pts, const Tol& tol);

struct EinsteinFit {
  double lambda = 0.0;
  double residual = 0.0;  // Frobenius norm of Ric - lambda g
};

struct EtaEinsteinFit {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double residual = 0.0;  // Frobenius norm of Ric - alpha g - beta g~ - gamma eta(x)eta
};

/// Least-squares fits in the Frobenius inner product induced by g.
EinsteinFit einstein_fit(const GeomEval& ev);
EinsteinFit einstein_fit(const ApcpcStructure& s, const Eigen::VectorXd& p);
EtaEinsteinFit eta_einstein_fit(const GeomEval& ev);
EtaEinsteinFit eta_einstein_fit(const ApcpcStructure& s, const Eigen::VectorXd& p);

/// Einstein fit of a bare metric model (used on extension slices).
EinsteinFit einstein_fit_model(const ManifoldModel& m, const Eigen::VectorXd& p);

/// Scal* of a slice phpcR model (trace of Ric^h against P over an h-orthonormal frame).
double slice_scalar_star(const PhpcrModel& slice, const Eigen::VectorXd& p);

}  // namespace psl
