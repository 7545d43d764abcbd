#pragma once

#include <optional>

#include "psl/structure.hpp"

namespace psl {

/// Paraholomorphic paracomplex Riemannian base: an even-dimensional chart with a
/// product structure P satisfying P^2 = id, tr P = 0, h(P.,P.) = h and nabla P = 0.
struct PhpcrModel {
  ChartModel chart;  // carries the metric h only
  JetFieldFn P;      // (1,1) field
  std::string name = "phpcr";

  int dim() const { return chart.dim; }
  int n() const { return chart.dim / 2; }
};

/// h~(X,Y) = h(X,PY).
JetFieldFn phpcr_h_tilde(const PhpcrModel& base);

CheckReport validate_phpcr(const PhpcrModel& base, const Points& pts, const Tol& tol);

/// R x N with eta = dt, xi = d/dt, phi|_H = P and
/// g = dt^2 + cosh(2t) h + sinh(2t) h~. Validates the base first.
ApcpcStructure hyperbolic_extension(const PhpcrModel& base);

/// Constant-t slice of a hyperbolic extension as a phpcR model with metric
/// cosh(2t) h + sinh(2t) h~.
PhpcrModel extension_slice(const ApcpcStructure& s, double t);

/// Flat R^2n with h = scale * delta and P swapping x^i <-> x^{n+i}.
PhpcrModel flat_phpcr_swap(int n, double scale = 1.0);
/// Flat R^2n with h = scale * delta and P = diag(+1,-1,...,+1,-1) in pair order.
PhpcrModel flat_phpcr_diag(int n, double scale = 1.0);

PhpcrModel scale_metric(const PhpcrModel& base, double c);

struct Example1 {
  ApcpcStructure frame;  // solvable Lie group, left-invariant structure
  ApcpcStructure chart;  // chart twin (hyperbolic extension of the flat base)
};
/// Solvable Lie group of dimension 2n+1 with [e_0,e_i] = -e_{n+i},
/// [e_0,e_{n+i}] = -e_i, orthonormal frame metric, xi = e_0, phi e_i = e_{n+i}.
Example1 example1(int n);

/// Chart components of the left-invariant frame e_0..e_2n at parameter t
/// (columns); aligns the two Example 1 backends.
Eigen::MatrixXd example1_frame_alignment(int n, double t);

struct Example2 {
  ApcpcStructure frame;
  std::optional<ApcpcStructure> chart;  // present iff mu = 0 and lambda != 0
};
/// Five-dimensional Lie group with the two-parameter bracket family.
Example2 example2(double lambda, double mu);
ApcpcStructure example2_chart(double lambda, double mu);

/// Product of two n-dimensional hyperbolic discs scaled so each factor has
/// Ric = -2n h (per-factor scalar curvature -2n^2); P = diag(+,-) blockwise.
PhpcrModel example3(int n);

/// P-invariant sphere: intersection of the sphere h'(z,z)=a with the hyperboloid
/// h~'(z,z)=b in flat R^{2n+2}, realized as the product of round n-spheres of
/// radii sqrt((a+b)/2) and sqrt((a-b)/2) in the P'-eigenspace splitting.
PhpcrModel example4(int n, double a, double b);

/// Closed-form curvature of example4: (a(pi1+pi2) - b pi3)/(a^2-b^2) built from
/// the h and h~ values at the point.
TensorValue example4_curvature_closed_form(const PhpcrModel& sphere, double a, double b,
                                           const Eigen::VectorXd& p);

/// Flat phpcR x line with a t-independent metric; nabla phi = 0, F = 0, and the
/// structure is not para-Sasaki-like.
ApcpcStructure parallel_product(int n);

/// Generic apcpcR structure (dim 5) with non-closed eta and position-dependent
/// metric; exercises every derivative path without any special geometry.
ApcpcStructure twisted_fixture();

}  // namespace psl
