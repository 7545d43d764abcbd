#include "psl/curvature.hpp"

#include <cmath>
#include <sstream>

#include "psl/constructions.hpp"
#include "psl/errors.hpp"

namespace psl {

namespace {

void require_para_sasaki(const ApcpcStructure& s, const Points& pts, const char* op) {
  const SasakiVerdict v = check_para_sasaki_like(s, pts, Tol{1e-8, 1e-8});
  if (!v.is_para_sasaki_like)
    throw PreconditionError(std::string(op) + ": " + s.name + " is not para-Sasaki-like");
}

double quadruple_max(const TensorValue& diff, int quads, Rng& rng) {
  double worst = 0.0;
  for (int q = 0; q < quads; ++q) {
    const std::vector<Eigen::VectorXd> v = sample_quadruple(diff.dim(), rng);
    worst = std::max(worst, std::abs(evaluate(diff, v)));
  }
  return worst;
}

std::string pt_tag(std::size_t i) {
  std::ostringstream os;
  os << "point" << i;
  return os.str();
}

// Frobenius inner product of (0,2) tensors w.r.t. g: A_ab B_cd g^ac g^bd.
double frob(const TensorValue& A, const TensorValue& B, const TensorValue& g_inv) {
  const int d = A.dim();
  double s = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) s += A(a, b) * B(c, e) * g_inv(a, c) * g_inv(b, e);
  return s;
}

}  // namespace

CheckReport check_curf(const ApcpcStructure& s, const Points& pts, int quads, Rng rng,
                       const Tol& tol, bool enforce_precondition) {
  if (enforce_precondition) require_para_sasaki(s, pts, "check_curf");
  CheckReport rep;
  rep.check = "curf(" + s.name + ")";
  rep.tol = tol.atol;
  rep.points = static_cast<int>(pts.size());
  for (std::size_t ip = 0; ip < pts.size(); ++ip) {
    const GeomEval ev = evaluate_geometry(s.model, pts[ip]);
    const int d = ev.dim;
    const TensorValue lhs =
        compose_slot(ev.riemann, 2, ev.phi) - compose_slot(ev.riemann, 3, ev.phi);
    TensorValue rhs(d, {Var::Lo, Var::Lo, Var::Lo, Var::Lo}, ev.frame_id);
    Eigen::MatrixXd A(d, d), m(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        A(a, b) = ev.g(a, b) - 2.0 * ev.eta(a) * ev.eta(b);
        double gp = 0.0;
        for (int k = 0; k < d; ++k) gp += ev.g(a, k) * ev.phi(k, b);
        m(a, b) = gp;
      }
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y)
        for (int z = 0; z < d; ++z)
          for (int w = 0; w < d; ++w)
            rhs(x, y, z, w) = -A(y, z) * m(x, w) - A(y, w) * m(x, z) + A(x, z) * m(y, w) +
                              A(x, w) * m(y, z);
    const TensorValue diff = lhs - rhs;
    const double sc = std::max({1.0, lhs.max_abs(), rhs.max_abs()});
    Rng qrng = rng.split(1000 + ip);
    rep.add(pt_tag(ip) + ":componentwise", diff.max_abs() / sc);
    rep.add(pt_tag(ip) + ":quadruples", quadruple_max(diff, quads, qrng) / sc);
  }
  rep.finalize();
  return rep;
}

CheckReport check_xi_curvature(const ApcpcStructure& s, const Points& pts, int quads, Rng rng,
                               const Tol& tol, bool enforce_precondition) {
  if (enforce_precondition) require_para_sasaki(s, pts, "check_xi_curvature");
  CheckReport rep;
  rep.check = "xi_curvature(" + s.name + ")";
  rep.tol = tol.atol;
  rep.points = static_cast<int>(pts.size());
  const int n = s.n();
  for (std::size_t ip = 0; ip < pts.size(); ++ip) {
    const GeomEval ev = evaluate_geometry(s.model, pts[ip]);
    const int d = ev.dim;
    const double sc = std::max(1.0, ev.g.max_abs());

    // (cur): R(x,y,xi,w) = -eta(y) g(x,w) + eta(x) g(y,w)
    TensorValue cur(d, {Var::Lo, Var::Lo, Var::Lo}, ev.frame_id);
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y)
        for (int w = 0; w < d; ++w) {
          double lhs = 0.0;
          for (int m = 0; m < d; ++m) lhs += ev.riemann(x, y, m, w) * ev.xi(m);
          cur(x, y, w) = lhs + ev.eta(y) * ev.g(x, w) - ev.eta(x) * ev.g(y, w);
        }
    Rng qrng = rng.split(2000 + ip);
    rep.add(pt_tag(ip) + ":R(x,y)xi", cur.max_abs() / sc);
    rep.add(pt_tag(ip) + ":R(x,y)xi-quadruples",
            [&] {
              double worst = 0.0;
              for (int q = 0; q < quads; ++q) {
                const auto v = sample_quadruple(d, qrng);
                worst = std::max(worst, std::abs(evaluate(cur, {v[0], v[1], v[2]})));
              }
              return worst;
            }() / sc);

    // R(xi,y,xi,w) = g(y,w) - eta(y) eta(w)
    double rxixi = 0.0;
    for (int y = 0; y < d; ++y)
      for (int w = 0; w < d; ++w) {
        double lhs = 0.0;
        for (int m = 0; m < d; ++m)
          for (int l = 0; l < d; ++l) lhs += ev.xi(m) * ev.xi(l) * ev.riemann(m, y, l, w);
        rxixi = std::max(rxixi,
                         std::abs(lhs - ev.g(y, w) + ev.eta(y) * ev.eta(w)));
      }
    rep.add(pt_tag(ip) + ":R(xi,X)xi=X", rxixi / sc);

    // Ric(y,xi) = -2n eta(y); Ric(xi,xi) = -2n
    double ricxi = 0.0;
    for (int y = 0; y < d; ++y) {
      double lhs = 0.0;
      for (int m = 0; m < d; ++m) lhs += ev.ricci(y, m) * ev.xi(m);
      ricxi = std::max(ricxi, std::abs(lhs + 2.0 * n * ev.eta(y)));
    }
    rep.add(pt_tag(ip) + ":Ric(y,xi)=-2n.eta", ricxi / sc);
    double ricxixi = 0.0;
    for (int y = 0; y < d; ++y)
      for (int m = 0; m < d; ++m) ricxixi += ev.xi(y) * ev.ricci(y, m) * ev.xi(m);
    rep.add(pt_tag(ip) + ":Ric(xi,xi)=-2n", std::abs(ricxixi + 2.0 * n));

    // (Rxi): R(x,y,z,xi) = R(xi,z,y,x) = -eta(x) g(y,z) + eta(y) g(x,z)
    double rxi_sym = 0.0, rxi_closed = 0.0;
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y)
        for (int z = 0; z < d; ++z) {
          double lhs = 0.0, mid = 0.0;
          for (int m = 0; m < d; ++m) {
            lhs += ev.riemann(x, y, z, m) * ev.xi(m);
            mid += ev.xi(m) * ev.riemann(m, z, y, x);
          }
          const double closed = -ev.eta(x) * ev.g(y, z) + ev.eta(y) * ev.g(x, z);
          rxi_sym = std::max(rxi_sym, std::abs(lhs - mid));
          rxi_closed = std::max(rxi_closed, std::abs(lhs - closed));
        }
    rep.add(pt_tag(ip) + ":R(x,y,z,xi)=R(xi,z,y,x)", rxi_sym / sc);
    rep.add(pt_tag(ip) + ":R(x,y,z,xi)-closed-form", rxi_closed / sc);
  }
  rep.finalize();
  return rep;
}

CheckReport horizontal_decomposition(const ApcpcStructure& s, const Points& pts,
                                     const Tol& tol) {
  if (!s.extension_base)
    throw BackendError("horizontal_decomposition: hyperbolic extension required");
  require_para_sasaki(s, pts, "horizontal_decomposition");
  CheckReport rep;
  rep.check = "horizontal_decomposition(" + s.name + ")";
  rep.tol = tol.atol;
  rep.points = static_cast<int>(pts.size());
  const int n = s.n();
  for (std::size_t ip = 0; ip < pts.size(); ++ip) {
    const Eigen::VectorXd& p = pts[ip];
    const double t = p[0];
    const Eigen::VectorXd py = p.tail(p.size() - 1);
    const GeomEval ev = evaluate_geometry(s.model, p);
    const PhpcrModel slice = extension_slice(s, t);
    ManifoldModel sm{slice.chart};
    const GeomEval evh = evaluate_geometry(sm, py);
    const int d = ev.dim;     // 2n+1
    const int dh = evh.dim;   // 2n
    const double sc = std::max({1.0, ev.riemann.max_abs(), ev.g.max_abs()});

    Eigen::MatrixXd m(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        double gp = 0.0;
        for (int k = 0; k < d; ++k) gp += ev.g(a, k) * ev.phi(k, b);
        m(a, b) = gp;
      }

    // Gauss relation on horizontal coordinate indices (1..2n ambient).
    double gaus = 0.0;
    for (int a = 0; a < dh; ++a)
      for (int b = 0; b < dh; ++b)
        for (int c = 0; c < dh; ++c)
          for (int e = 0; e < dh; ++e) {
            const double lhs = ev.riemann(a + 1, b + 1, c + 1, e + 1);
            const double rhs = evh.riemann(a, b, c, e) + m(a + 1, c + 1) * m(b + 1, e + 1) -
                               m(b + 1, c + 1) * m(a + 1, e + 1);
            gaus = std::max(gaus, std::abs(lhs - rhs));
          }
    rep.add(pt_tag(ip) + ":gauss", gaus / sc);

    // Full decomposition with x|_H the eta-horizontal projection.
    double full = 0.0;
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y)
        for (int z = 0; z < d; ++z)
          for (int w = 0; w < d; ++w) {
            const double rh = (x > 0 && y > 0 && z > 0 && w > 0)
                                  ? evh.riemann(x - 1, y - 1, z - 1, w - 1)
                                  : 0.0;
            const double rhs =
                rh - m(y, z) * m(x, w) + m(x, z) * m(y, w) -
                (ev.g(y, z) * ev.eta(x) - ev.g(x, z) * ev.eta(y)) * ev.eta(w) -
                (ev.g(x, w) * ev.eta(y) - ev.g(y, w) * ev.eta(x)) * ev.eta(z);
            full = std::max(full, std::abs(ev.riemann(x, y, z, w) - rhs));
          }
    rep.add(pt_tag(ip) + ":full-decomposition", full / sc);

    // Ric = Ric^h - 2n eta (x) eta
    double ric = 0.0;
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y) {
        const double rh = (x > 0 && y > 0) ? evh.ricci(x - 1, y - 1) : 0.0;
        ric = std::max(ric,
                       std::abs(ev.ricci(x, y) - rh + 2.0 * n * ev.eta(x) * ev.eta(y)));
      }
    rep.add(pt_tag(ip) + ":ric-decomposition", ric / sc);
    rep.add(pt_tag(ip) + ":scal=scal_h-2n", rel_residual(ev.scal, evh.scal - 2.0 * n));
    rep.add(pt_tag(ip) + ":scal*=scal_h*", rel_residual(ev.scal_star, slice_scalar_star(slice, py)));
  }
  rep.finalize();
  return rep;
}

EinsteinFit einstein_fit(const GeomEval& ev) {
  EinsteinFit fit;
  const double gg = frob(ev.g, ev.g, ev.g_inv);  // = dim
  fit.lambda = frob(ev.g, ev.ricci, ev.g_inv) / gg;
  const TensorValue diff = ev.ricci - ev.g * fit.lambda;
  fit.residual = std::sqrt(std::max(0.0, frob(diff, diff, ev.g_inv)));
  return fit;
}

EinsteinFit einstein_fit(const ApcpcStructure& s, const Eigen::VectorXd& p) {
  return einstein_fit(evaluate_geometry(s.model, p));
}

EinsteinFit einstein_fit_model(const ManifoldModel& m, const Eigen::VectorXd& p) {
  return einstein_fit(evaluate_geometry(m, p));
}

EtaEinsteinFit eta_einstein_fit(const GeomEval& ev) {
  const int d = ev.dim;
  TensorValue ee(d, {Var::Lo, Var::Lo}, ev.frame_id);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) ee(a, b) = ev.eta(a) * ev.eta(b);
  const TensorValue* basis[3] = {&ev.g, &ev.g_tilde, &ee};
  Eigen::Matrix3d M;
  Eigen::Vector3d rhs;
  for (int i = 0; i < 3; ++i) {
    rhs[i] = frob(*basis[i], ev.ricci, ev.g_inv);
    for (int j = 0; j < 3; ++j) M(i, j) = frob(*basis[i], *basis[j], ev.g_inv);
  }
  const double det = M.determinant();
  if (std::abs(det) < 1e-10 * std::max(1.0, M.cwiseAbs().maxCoeff()))
    throw FitDegenerateError("eta_einstein_fit: {g, g~, eta*eta} degenerate at this point");
  const Eigen::Vector3d coef = M.ldlt().solve(rhs);
  EtaEinsteinFit fit;
  fit.alpha = coef[0];
  fit.beta = coef[1];
  fit.gamma = coef[2];
  const TensorValue diff =
      ev.ricci - ev.g * fit.alpha - ev.g_tilde * fit.beta - ee * fit.gamma;
  fit.residual = std::sqrt(std::max(0.0, frob(diff, diff, ev.g_inv)));
  return fit;
}

EtaEinsteinFit eta_einstein_fit(const ApcpcStructure& s, const Eigen::VectorXd& p) {
  return eta_einstein_fit(evaluate_geometry(s.model, p));
}

double slice_scalar_star(const PhpcrModel& slice, const Eigen::VectorXd& p) {
  ManifoldModel m{slice.chart};
  const GeomEval ev = evaluate_geometry(m, p);
  const int d = ev.dim;
  const std::vector<Jet> vars = seed_point(p);
  const std::vector<Jet> pj = slice.P(vars);
  Eigen::MatrixXd P(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) P(i, j) = pj[i * d + j].v;
  const Eigen::MatrixXd E = orthonormal_frame(ev.g.as_matrix());
  const Eigen::MatrixXd ric = ev.ricci.as_matrix();
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += E.col(i).dot(ric * (P * E.col(i)));
  return s;
}

}  // namespace psl
