#include "psl/structure.hpp"

#include <cmath>
#include <sstream>

#include "psl/errors.hpp"

namespace psl {

namespace {

double scale_of(const GeomEval& ev) {
  return std::max({1.0, ev.g.max_abs(), ev.F.max_abs()});
}

std::string pt_tag(int i) {
  std::ostringstream os;
  os << "point" << i;
  return os.str();
}

}  // namespace

Points structure_sample(const ApcpcStructure& s, int k, const Rng& rng) {
  return s.model.sample(k, rng);
}

CheckReport validate_structure(const ApcpcStructure& s, const Points& pts, const Tol& tol) {
  if (s.dim() % 2 == 0)
    throw DimensionError("validate_structure: apcpcR manifolds are odd-dimensional");
  CheckReport rep;
  rep.check = "validate_structure(" + s.name + ")";
  rep.tol = tol.atol;
  rep.points = static_cast<int>(pts.size());
  for (std::size_t ip = 0; ip < pts.size(); ++ip) {
    const GeomEval ev = evaluate_geometry(s.model, pts[ip]);
    const int d = ev.dim;
    double phi2 = 0, eta_xi = 0, phi_xi = 0, eta_phi = 0, g_xi = 0, compat = 0, tr_phi = 0;
    for (int a = 0; a < d; ++a) {
      double px = 0, ep = 0, gx = 0;
      for (int m = 0; m < d; ++m) {
        px += ev.phi(a, m) * ev.xi(m);
        ep += ev.eta(m) * ev.phi(m, a);
        gx += ev.g(a, m) * ev.xi(m);
      }
      phi_xi = std::max(phi_xi, std::abs(px));
      eta_phi = std::max(eta_phi, std::abs(ep));
      g_xi = std::max(g_xi, std::abs(gx - ev.eta(a)));
      tr_phi += ev.phi(a, a);
      for (int b = 0; b < d; ++b) {
        double p2 = 0, cm = 0;
        for (int m = 0; m < d; ++m) {
          p2 += ev.phi(a, m) * ev.phi(m, b);
          for (int l = 0; l < d; ++l) cm += ev.phi(m, a) * ev.phi(l, b) * ev.g(m, l);
        }
        const double target = (a == b ? 1.0 : 0.0) - ev.xi(a) * ev.eta(b);
        phi2 = std::max(phi2, std::abs(p2 - target));
        compat = std::max(compat, std::abs(cm - ev.g(a, b) + ev.eta(a) * ev.eta(b)));
      }
    }
    double exi = -1.0;
    for (int m = 0; m < d; ++m) exi += ev.eta(m) * ev.xi(m);
    eta_xi = std::abs(exi);

    const std::string t = pt_tag(static_cast<int>(ip));
    rep.add(t + ":phi^2=id-eta*xi", phi2);
    rep.add(t + ":eta(xi)=1", eta_xi);
    rep.add(t + ":phi(xi)=0", phi_xi);
    rep.add(t + ":eta(phi.)=0", eta_phi);
    rep.add(t + ":g(.,xi)=eta", g_xi);
    rep.add(t + ":g(phi.,phi.)=g-eta*eta", compat);
    rep.add(t + ":tr(phi)=0", std::abs(tr_phi));
  }
  rep.finalize();
  return rep;
}

TensorValue associated_metric(const ApcpcStructure& s, const Eigen::VectorXd& p) {
  return evaluate_geometry(s.model, p).g_tilde;
}

TensorValue fundamental_F(const ApcpcStructure& s, const Eigen::VectorXd& p) {
  return evaluate_geometry(s.model, p).F;
}

LeeForms lee_forms(const GeomEval& ev) {
  const int d = ev.dim;
  const Eigen::MatrixXd E =
      horizontal_frame(ev.g.as_matrix(), ev.xi.as_vector(), ev.eta.as_vector());
  const Eigen::MatrixXd phi = ev.phi.as_matrix();
  LeeForms lf{TensorValue(d, {Var::Lo}, ev.frame_id), TensorValue(d, {Var::Lo}, ev.frame_id),
              TensorValue(d, {Var::Lo}, ev.frame_id)};
  for (int c = 0; c < d; ++c) {
    double th = 0, ths = 0, om = 0;
    for (int i = 0; i < E.cols(); ++i) {
      const Eigen::VectorXd e = E.col(i);
      const Eigen::VectorXd pe = phi * e;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          th += e[a] * e[b] * ev.F(a, b, c);
          ths += e[a] * pe[b] * ev.F(a, b, c);
        }
    }
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) om += ev.xi(a) * ev.xi(b) * ev.F(a, b, c);
    lf.theta(c) = th;
    lf.theta_star(c) = ths;
    lf.omega(c) = om;
  }
  return lf;
}

LeeForms lee_forms(const ApcpcStructure& s, const Eigen::VectorXd& p) {
  return lee_forms(evaluate_geometry(s.model, p));
}

TensorValue nijenhuis(const GeomEval& ev) {
  const int d = ev.dim;
  TensorValue N(d, {Var::Lo, Var::Lo, Var::Lo}, ev.frame_id);
  // E1(a,b) = F(e_a, phi e_b, xi)
  Eigen::MatrixXd E1 = Eigen::MatrixXd::Zero(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int m = 0; m < d; ++m)
        for (int l = 0; l < d; ++l) E1(a, b) += ev.F(a, m, l) * ev.phi(m, b) * ev.xi(l);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) {
        double s = 0.0;
        for (int m = 0; m < d; ++m)
          s += ev.phi(m, a) * ev.F(m, b, c) - ev.phi(m, b) * ev.F(m, a, c) -
               ev.F(a, b, m) * ev.phi(m, c) + ev.F(b, a, m) * ev.phi(m, c);
        N(a, b, c) = s + ev.eta(c) * (E1(a, b) - E1(b, a));
      }
  return N;
}

TensorValue assoc_nijenhuis(const GeomEval& ev) {
  const int d = ev.dim;
  TensorValue Nh(d, {Var::Lo, Var::Lo, Var::Lo}, ev.frame_id);
  Eigen::MatrixXd E1 = Eigen::MatrixXd::Zero(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int m = 0; m < d; ++m)
        for (int l = 0; l < d; ++l) E1(a, b) += ev.F(a, m, l) * ev.phi(m, b) * ev.xi(l);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) {
        double s = 0.0;
        for (int m = 0; m < d; ++m)
          s += ev.phi(m, a) * ev.F(m, b, c) + ev.phi(m, b) * ev.F(m, a, c) -
               ev.F(a, b, m) * ev.phi(m, c) - ev.F(b, a, m) * ev.phi(m, c);
        Nh(a, b, c) = s + ev.eta(c) * (E1(a, b) + E1(b, a));
      }
  return Nh;
}

namespace {

// Bracket-route tensors for chart backends, from jet evaluations of the fields.
struct ChartFieldJets {
  int d;
  std::vector<Jet> g, phi, xi, eta;
  Eigen::MatrixXd g_inv;

  double gv(int i, int j) const { return g[i * d + j].v; }
  double dg(int a, int i, int j) const { return g[i * d + j].d[a]; }
  double phiv(int i, int j) const { return phi[i * d + j].v; }
  double dphi(int a, int i, int j) const { return phi[i * d + j].d[a]; }
};

ChartFieldJets chart_field_jets(const ChartModel& cm, const Eigen::VectorXd& p) {
  ChartFieldJets f;
  f.d = cm.dim;
  const std::vector<Jet> vars = seed_point(p);
  f.g = cm.metric(vars);
  f.phi = cm.phi(vars);
  f.xi = cm.xi(vars);
  f.eta = cm.eta(vars);
  Eigen::MatrixXd G(f.d, f.d);
  for (int i = 0; i < f.d; ++i)
    for (int j = 0; j < f.d; ++j) G(i, j) = f.gv(i, j);
  f.g_inv = G.inverse();
  return f;
}

// g({u,v}, d_c) for vector fields with jet components; the symmetric bracket is
// defined through the Koszul-style display, so only first derivatives enter.
double sym_bracket_lower(const ChartFieldJets& f, const std::vector<Jet>& u,
                         const std::vector<Jet>& v, int c) {
  const int d = f.d;
  // scalar fields g(v, d_c), g(u, d_c), g(u, v) as jets
  Jet gvc(0.0, d), guc(0.0, d), guv(0.0, d);
  for (int i = 0; i < d; ++i) {
    gvc += f.g[i * d + c] * v[i];
    guc += f.g[i * d + c] * u[i];
    for (int j = 0; j < d; ++j) guv += f.g[i * d + j] * u[i] * v[j];
  }
  double s = 0.0;
  for (int e = 0; e < d; ++e) s += u[e].v * gvc.d[e] + v[e].v * guc.d[e];
  s -= guv.d[c];
  // + g([d_c, u], v) + g([d_c, v], u) with [d_c, u]^e = d_c u^e
  for (int e = 0; e < d; ++e)
    for (int i = 0; i < d; ++i)
      s += f.gv(e, i) * (u[e].d[c] * v[i].v + v[e].d[c] * u[i].v);
  return s;
}

// {u,v} with the index raised.
Eigen::VectorXd sym_bracket(const ChartFieldJets& f, const std::vector<Jet>& u,
                            const std::vector<Jet>& v) {
  Eigen::VectorXd low(f.d);
  for (int c = 0; c < f.d; ++c) low[c] = sym_bracket_lower(f, u, v, c);
  return f.g_inv * low;
}

std::vector<Jet> phi_column_field(const ChartFieldJets& f, int a) {
  std::vector<Jet> u(f.d);
  for (int i = 0; i < f.d; ++i) u[i] = f.phi[i * f.d + a];
  return u;
}

std::vector<Jet> basis_field(const ChartFieldJets& f, int a) {
  std::vector<Jet> u(f.d, Jet::constant(0.0, f.d));
  u[a] = Jet::constant(1.0, f.d);
  return u;
}

}  // namespace

TensorValue nijenhuis_bracket(const ApcpcStructure& s, const Eigen::VectorXd& p) {
  const int d = s.dim();
  TensorValue N(d, {Var::Lo, Var::Lo, Var::Lo}, s.model.frame_id());
  if (s.model.is_chart()) {
    const ChartFieldJets f = chart_field_jets(s.model.chart(), p);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        Eigen::VectorXd nv = Eigen::VectorXd::Zero(d);
        // [phi,phi]^m_ab with raw partials; coordinate brackets vanish.
        for (int m = 0; m < d; ++m) {
          double t = 0.0;
          for (int c = 0; c < d; ++c)
            t += f.phiv(c, a) * f.dphi(c, m, b) - f.phiv(c, b) * f.dphi(c, m, a) +
                 f.dphi(b, c, a) * f.phiv(m, c) - f.dphi(a, c, b) * f.phiv(m, c);
          nv[m] = t;
        }
        const double deta_ab = f.eta[b].d[a] - f.eta[a].d[b];
        for (int m = 0; m < d; ++m) nv[m] -= deta_ab * f.xi[m].v;
        for (int c = 0; c < d; ++c) {
          double low = 0.0;
          for (int m = 0; m < d; ++m) low += nv[m] * f.gv(m, c);
          N(a, b, c) = low;
        }
      }
    return N;
  }
  const LieFrameModel& fm = s.model.frame();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Eigen::VectorXd nv = Eigen::VectorXd::Zero(d);
      for (int m = 0; m < d; ++m) {
        double t = 0.0;
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) t += fm.phi(k, i) * fm.phi(l, j) * fm.c_at(m, k, l);
        for (int l = 0; l < d; ++l) {
          double p2 = 0.0;
          for (int k = 0; k < d; ++k) p2 += fm.phi(m, k) * fm.phi(k, l);
          t += p2 * fm.c_at(l, i, j);
        }
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l)
            t -= fm.phi(k, i) * fm.c_at(l, k, j) * fm.phi(m, l) +
                 fm.phi(k, j) * fm.c_at(l, i, k) * fm.phi(m, l);
        nv[m] = t;
      }
      double deta_ij = 0.0;
      for (int m = 0; m < d; ++m) deta_ij -= fm.c_at(m, i, j) * fm.eta[m];
      for (int m = 0; m < d; ++m) nv[m] -= deta_ij * fm.xi[m];
      for (int c = 0; c < d; ++c) {
        double low = 0.0;
        for (int m = 0; m < d; ++m) low += nv[m] * fm.g(m, c);
        N(i, j, c) = low;
      }
    }
  return N;
}

TensorValue assoc_nijenhuis_bracket(const ApcpcStructure& s, const Eigen::VectorXd& p) {
  const int d = s.dim();
  TensorValue Nh(d, {Var::Lo, Var::Lo, Var::Lo}, s.model.frame_id());
  if (s.model.is_chart()) {
    const ChartFieldJets f = chart_field_jets(s.model.chart(), p);
    Eigen::MatrixXd phi(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) phi(i, j) = f.phiv(i, j);
    for (int a = 0; a < d; ++a) {
      const std::vector<Jet> pa = phi_column_field(f, a);
      const std::vector<Jet> ea = basis_field(f, a);
      for (int b = 0; b < d; ++b) {
        const std::vector<Jet> pb = phi_column_field(f, b);
        const std::vector<Jet> eb = basis_field(f, b);
        const Eigen::VectorXd t1 = sym_bracket(f, pa, pb);              // {phi a, phi b}
        const Eigen::VectorXd t2 = phi * (phi * sym_bracket(f, ea, eb));  // phi^2 {a,b}
        const Eigen::VectorXd t3 = phi * sym_bracket(f, pa, eb);        // phi {phi a, b}
        const Eigen::VectorXd t4 = phi * sym_bracket(f, ea, pb);        // phi {a, phi b}
        Eigen::VectorXd nv = t1 + t2 - t3 - t4;
        // (L_xi g)(a,b) from raw partials
        double lie = 0.0;
        for (int cidx = 0; cidx < d; ++cidx) lie += f.xi[cidx].v * f.dg(cidx, a, b);
        for (int m = 0; m < d; ++m)
          lie += f.gv(m, b) * f.xi[m].d[a] + f.gv(a, m) * f.xi[m].d[b];
        for (int m = 0; m < d; ++m) nv[m] -= lie * f.xi[m].v;
        for (int c = 0; c < d; ++c) {
          double low = 0.0;
          for (int m = 0; m < d; ++m) low += nv[m] * f.gv(m, c);
          Nh(a, b, c) = low;
        }
      }
    }
    return Nh;
  }
  const LieFrameModel& fm = s.model.frame();
  // {e_i,e_j}_k = c_ki,j + c_kj,i for a constant frame metric; constant
  // coefficients make the symmetric bracket bilinear.
  Eigen::MatrixXd ginv = fm.g.inverse();
  auto sym_basis = [&](int i, int j) {
    Eigen::VectorXd low(d);
    for (int k = 0; k < d; ++k) {
      double t = 0.0;
      for (int m = 0; m < d; ++m) t += fm.c_at(m, k, i) * fm.g(m, j) + fm.c_at(m, k, j) * fm.g(m, i);
      low[k] = t;
    }
    return Eigen::VectorXd(ginv * low);
  };
  auto sym_combo = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (u[i] != 0.0 && v[j] != 0.0) r += u[i] * v[j] * sym_basis(i, j);
    return r;
  };
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Eigen::VectorXd pi = fm.phi.col(i), pj = fm.phi.col(j);
      const Eigen::VectorXd ei = Eigen::VectorXd::Unit(d, i), ej = Eigen::VectorXd::Unit(d, j);
      Eigen::VectorXd nv = sym_combo(pi, pj) + fm.phi * (fm.phi * sym_combo(ei, ej)) -
                           fm.phi * sym_combo(pi, ej) - fm.phi * sym_combo(ei, pj);
      double lie = 0.0;
      for (int k = 0; k < d; ++k)
        for (int m = 0; m < d; ++m)
          lie -= fm.xi[k] * (fm.c_at(m, k, i) * fm.g(m, j) + fm.c_at(m, k, j) * fm.g(i, m));
      nv -= lie * fm.xi;
      for (int c = 0; c < d; ++c) {
        double low = 0.0;
        for (int m = 0; m < d; ++m) low += nv[m] * fm.g(m, c);
        Nh(i, j, c) = low;
      }
    }
  return Nh;
}

CheckReport verify_nabf(const ApcpcStructure& s, const Points& pts, const Tol& tol) {
  CheckReport rep;
  rep.check = "nabf(" + s.name + ")";
  rep.tol = tol.atol;
  rep.points = static_cast<int>(pts.size());
  for (std::size_t ip = 0; ip < pts.size(); ++ip) {
    const GeomEval ev = evaluate_geometry(s.model, pts[ip]);
    const TensorValue N = nijenhuis_bracket(s, pts[ip]);
    const TensorValue Nh = assoc_nijenhuis_bracket(s, pts[ip]);
    const int d = ev.dim;
    TensorValue rhs(d, {Var::Lo, Var::Lo, Var::Lo}, ev.frame_id);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c) {
          double quarter = 0.0;
          for (int m = 0; m < d; ++m)
            quarter += ev.phi(m, a) *
                       (N(m, b, c) + N(m, c, b) + Nh(m, b, c) + Nh(m, c, b));
          double half = 0.0;
          for (int m = 0; m < d; ++m)
            for (int l = 0; l < d; ++l) {
              half += ev.xi(m) * (N(m, b, l) + Nh(m, b, l)) * ev.phi(l, c);
              for (int e = 0; e < d; ++e)
                half += ev.eta(c) * ev.xi(m) * ev.xi(l) * Nh(m, l, e) * ev.phi(e, b);
            }
          rhs(a, b, c) = 0.25 * quarter - 0.5 * ev.eta(a) * half;
        }
    rep.add(pt_tag(static_cast<int>(ip)), identity_residual(ev.F, rhs));
  }
  rep.finalize();
  return rep;
}

SasakiVerdict check_para_sasaki_like(const ApcpcStructure& s, const Points& pts,
                                     const Tol& tol) {
  CheckReport rep;
  rep.check = "para_sasaki_like(" + s.name + ")";
  rep.tol = tol.atol;
  rep.points = static_cast<int>(pts.size());
  const int n = s.n();

  double res_a = 0, res_b = 0, res_c = 0;
  std::vector<GeomEval> evals;
  evals.reserve(pts.size());
  for (const auto& p : pts) evals.push_back(evaluate_geometry(s.model, p));

  for (std::size_t ip = 0; ip < pts.size(); ++ip) {
    const GeomEval& ev = evals[ip];
    const int d = ev.dim;
    const double sc = scale_of(ev);

    // Horizontal projector
    Eigen::MatrixXd Pi = Eigen::MatrixXd::Identity(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) Pi(a, b) -= ev.xi(a) * ev.eta(b);

    // (a) the F-conditions
    double r1 = 0, r2 = 0, r3 = 0, r4 = 0;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        double fxy_xi = 0, gxy = 0, fxiyz = 0;
        for (int dd = 0; dd < d; ++dd)
          for (int e = 0; e < d; ++e) {
            double fxi = 0;
            for (int m = 0; m < d; ++m) fxi += ev.F(dd, e, m) * ev.xi(m);
            fxy_xi += Pi(dd, a) * Pi(e, b) * fxi;
            gxy += Pi(dd, a) * Pi(e, b) * ev.g(dd, e);
            double fz = 0;
            for (int m = 0; m < d; ++m) fz += ev.xi(m) * ev.F(m, dd, e);
            fxiyz += fz * Pi(dd, a) * Pi(e, b);
          }
        r4 = std::max(r4, std::abs(fxy_xi + gxy));
        r2 = std::max(r2, std::abs(fxiyz));
        for (int c = 0; c < d; ++c) {
          double fh = 0;
          for (int dd = 0; dd < d; ++dd)
            for (int e = 0; e < d; ++e)
              for (int fidx = 0; fidx < d; ++fidx)
                fh += ev.F(dd, e, fidx) * Pi(dd, a) * Pi(e, b) * Pi(fidx, c);
          r1 = std::max(r1, std::abs(fh));
        }
      }
    for (int c = 0; c < d; ++c) {
      double om = 0;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) om += ev.xi(a) * ev.xi(b) * ev.F(a, b, c);
      r3 = std::max(r3, std::abs(om));
    }
    const double ra = std::max({r1, r2, r3, r4}) / sc;

    // (b) the closed form of nabla phi
    double rb = 0;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c)
          rb = std::max(rb, std::abs(ev.F(a, b, c) + ev.g(a, b) * ev.eta(c) +
                                     ev.eta(b) * ev.g(a, c) -
                                     2.0 * ev.eta(a) * ev.eta(b) * ev.eta(c)));
    rb /= sc;

    // (c) the Nijenhuis conditions, through the bracket route
    const TensorValue N = nijenhuis_bracket(s, pts[ip]);
    const TensorValue Nh = assoc_nijenhuis_bracket(s, pts[ip]);
    double rc = N.max_abs();
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c)
          rc = std::max(rc, std::abs(Nh(a, b, c) +
                                     4.0 * (ev.g_tilde(a, b) - ev.eta(a) * ev.eta(b)) *
                                         ev.eta(c)));
    rc /= sc;

    res_a = std::max(res_a, ra);
    res_b = std::max(res_b, rb);
    res_c = std::max(res_c, rc);
    const std::string t = pt_tag(static_cast<int>(ip));
    rep.add(t + ":F-conditions", ra);
    rep.add(t + ":nabla-phi-closed-form", rb);
    rep.add(t + ":nijenhuis-conditions", rc);
  }

  auto verdict = [&](double r) -> int {  // 1 pass, 0 fail, -1 indeterminate
    if (r < tol.atol) return 1;
    if (r > 100.0 * tol.atol) return 0;
    return -1;
  };
  const int va = verdict(res_a), vb = verdict(res_b), vc = verdict(res_c);
  if (va >= 0 && vb >= 0 && vc >= 0 && !(va == vb && vb == vc)) {
    throw InternalConsistencyError(
        "check_para_sasaki_like: equivalent characterizations disagree on " + s.name);
  }

  SasakiVerdict out;
  out.is_para_sasaki_like = (va == 1 && vb == 1 && vc == 1);

  if (out.is_para_sasaki_like) {
    // Corollary consequences.
    for (std::size_t ip = 0; ip < pts.size(); ++ip) {
      const GeomEval& ev = evals[ip];
      const int d = ev.dim;
      const double sc = scale_of(ev);
      double nxx = 0;
      for (int b = 0; b < d; ++b) {
        double t = 0;
        for (int a = 0; a < d; ++a) t += ev.xi(a) * ev.nabla_xi(a, b);
        nxx = std::max(nxx, std::abs(t));
      }
      const LeeForms lf = lee_forms(ev);
      TensorValue theta_target = ev.eta * (-2.0 * n);
      const std::string t = pt_tag(static_cast<int>(ip));
      rep.add(t + ":d(eta)=0", ev.d_eta.max_abs() / sc);
      rep.add(t + ":nabla_xi(xi)=0", nxx / sc);
      rep.add(t + ":theta=-2n.eta", max_abs_diff(lf.theta, theta_target) / sc);
      rep.add(t + ":theta*=0", lf.theta_star.max_abs() / sc);
      rep.add(t + ":omega=0", lf.omega.max_abs() / sc);
    }
  }
  rep.finalize();
  out.report = rep;
  return out;
}

ConeData build_cone(const ApcpcStructure& s) {
  if (!s.model.is_chart())
    throw BackendError("build_cone: chart backend required (use the shipped chart form)");
  const ChartModel base = s.model.chart();
  const int d = base.dim;
  const int D = d + 1;

  ConeData cone;
  cone.base_dim = d;
  ChartModel& cm = cone.cone;
  cm.dim = D;
  cm.frame_id = base.frame_id + "::cone";
  cm.domain.lo = Eigen::VectorXd(D);
  cm.domain.hi = Eigen::VectorXd(D);
  cm.domain.lo.head(d) = base.domain.lo;
  cm.domain.hi.head(d) = base.domain.hi;
  cm.domain.lo[d] = 0.5;
  cm.domain.hi[d] = 2.0;

  cm.metric = [base, d, D](JetSpan vars) {
    const Jet& r = vars[d];
    const Jet r2 = r * r;
    const std::vector<Jet> gb = base.metric(vars.subspan(0, d));
    const std::vector<Jet> eb = base.eta(vars.subspan(0, d));
    const int jd = r.dim();
    std::vector<Jet> out(static_cast<std::size_t>(D) * D, Jet::constant(0.0, jd));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        out[i * D + j] = r2 * gb[i * d + j] + (1.0 - r2) * (eb[i] * eb[j]);
    out[d * D + d] = Jet::constant(1.0, jd);
    return out;
  };
  cone.p_check = [base, d, D](JetSpan vars) {
    const Jet& r = vars[d];
    const std::vector<Jet> pb = base.phi(vars.subspan(0, d));
    const std::vector<Jet> xb = base.xi(vars.subspan(0, d));
    const std::vector<Jet> eb = base.eta(vars.subspan(0, d));
    const int jd = r.dim();
    std::vector<Jet> out(static_cast<std::size_t>(D) * D, Jet::constant(0.0, jd));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) out[i * D + j] = pb[i * d + j];
    for (int j = 0; j < d; ++j) out[d * D + j] = r * eb[j];
    for (int i = 0; i < d; ++i) out[i * D + d] = xb[i] / r;
    return out;
  };
  return cone;
}

TensorValue cone_nabla_p(const ConeData& cone, const Eigen::VectorXd& cone_point) {
  ManifoldModel m{cone.cone};
  const GeomEval ev = evaluate_geometry(m, cone_point);
  const int D = cone.cone.dim;
  TensorField pf;
  pf.variance = {Var::Up, Var::Lo};
  pf.chart_fn = cone.p_check;
  const TensorValue nabla_p = covariant_derivative(m, cone_point, pf);  // (a, m, b)
  TensorValue T(D, {Var::Lo, Var::Lo, Var::Lo}, ev.frame_id);
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b)
      for (int c = 0; c < D; ++c) {
        double s = 0.0;
        for (int mm = 0; mm < D; ++mm) s += nabla_p(a, mm, b) * ev.g(mm, c);
        T(a, b, c) = s;
      }
  return T;
}

CheckReport check_cone_parallel(const ApcpcStructure& s, const Points& pts,
                                std::span<const double> r_values, const Tol& tol) {
  const ConeData cone = build_cone(s);
  CheckReport rep;
  rep.check = "cone_parallel(" + s.name + ")";
  rep.tol = tol.atol;
  rep.points = static_cast<int>(pts.size() * r_values.size());
  const int D = cone.cone.dim;
  for (std::size_t ip = 0; ip < pts.size(); ++ip)
    for (double r : r_values) {
      Eigen::VectorXd cp(D);
      cp.head(D - 1) = pts[ip];
      cp[D - 1] = r;
      const TensorValue T = cone_nabla_p(cone, cp);
      double worst = 0;
      int wa = 0, wb = 0, wc = 0;
      for (int a = 0; a < D; ++a)
        for (int b = 0; b < D; ++b)
          for (int c = 0; c < D; ++c)
            if (std::abs(T(a, b, c)) > worst) {
              worst = std::abs(T(a, b, c));
              wa = a;
              wb = b;
              wc = c;
            }
      std::ostringstream nm;
      nm << pt_tag(static_cast<int>(ip)) << ",r=" << r << ",max@(" << wa << "," << wb << ","
         << wc << ")";
      rep.add(nm.str(), worst);
    }
  rep.finalize();
  return rep;
}

CheckReport check_cone_formulas(const ApcpcStructure& s, const Points& pts,
                                std::span<const double> r_values, const Tol& tol) {
  const ConeData cone = build_cone(s);
  CheckReport rep;
  rep.check = "cone_formulas(" + s.name + ")";
  rep.tol = tol.atol;
  rep.points = static_cast<int>(pts.size() * r_values.size());
  const int d = cone.base_dim;
  const int D = d + 1;
  for (std::size_t ip = 0; ip < pts.size(); ++ip) {
    const GeomEval base = evaluate_geometry(s.model, pts[ip]);
    // horizontal projector on the base
    Eigen::MatrixXd Pi = Eigen::MatrixXd::Identity(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) Pi(a, b) -= base.xi(a) * base.eta(b);
    Eigen::MatrixXd gphi(d, d), Fxi(d, d), deta_phi(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        double gp = 0, fx = 0, dp = 0;
        for (int m = 0; m < d; ++m) {
          gp += base.g(a, m) * base.phi(m, b);
          dp += base.d_eta(a, m) * base.phi(m, b);
          fx += base.F(a, b, m) * base.xi(m);
        }
        gphi(a, b) = gp;
        Fxi(a, b) = fx;
        deta_phi(a, b) = dp;
      }

    for (double r : r_values) {
      Eigen::VectorXd cp(D);
      cp.head(d) = pts[ip];
      cp[d] = r;
      const TensorValue T = cone_nabla_p(cone, cp);
      const double r2 = r * r;
      double res1 = 0, res2 = 0, res3 = 0;
      // xi as a cone vector is the lifted base xi; T(.,.,xi) contracts the last slot.
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          double lhs1 = 0, lhs2 = 0;
          for (int da = 0; da < d; ++da)
            for (int db = 0; db < d; ++db) {
              double txi = 0;
              for (int m = 0; m < d; ++m) txi += T(da, db, m) * base.xi(m);
              lhs1 += Pi(da, a) * Pi(db, b) * txi;
              lhs2 += Pi(da, a) * Pi(db, b) * T(da, db, d);
            }
          double gH = 0, FxiH = 0, detaphiH = 0, neH = 0, gphiH = 0, detaH = 0;
          for (int da = 0; da < d; ++da)
            for (int db = 0; db < d; ++db) {
              gH += Pi(da, a) * Pi(db, b) * base.g(da, db);
              FxiH += Pi(da, a) * Pi(db, b) * Fxi(da, db);
              detaphiH += Pi(da, a) * Pi(db, b) * deta_phi(da, db);
              neH += Pi(da, a) * Pi(db, b) * base.nabla_eta(da, db);
              gphiH += Pi(da, a) * Pi(db, b) * gphi(da, db);
              detaH += Pi(da, a) * Pi(db, b) * base.d_eta(da, db);
            }
          const double rhs1 = r2 * (FxiH + gH) + 0.5 * (r2 - 1.0) * detaphiH;
          res1 = std::max(res1, std::abs(lhs1 - rhs1));
          const double rhs2 = r * (neH - gphiH) - 0.5 / r * (r2 - 1.0) * detaH;
          res2 = std::max(res2, std::abs(lhs2 - rhs2));
        }
      // (3): T(xi, Y, Z) = r^2 g((nabla_xi phi)Y, Z) - (1/2)(r^2-1){deta(phi Y,Z) - deta(Y,phi Z)}
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c) {
          double lhs = 0, f_xi = 0, dpz = 0, dpy = 0;
          for (int db = 0; db < d; ++db)
            for (int dc = 0; dc < d; ++dc) {
              double txi = 0;
              for (int m = 0; m < d; ++m) txi += base.xi(m) * T(m, db, dc);
              lhs += Pi(db, b) * Pi(dc, c) * txi;
              double fx = 0, d1 = 0, d2 = 0;
              for (int m = 0; m < d; ++m) {
                fx += base.xi(m) * base.F(m, db, dc);
                d1 += base.phi(m, db) * base.d_eta(m, dc);
                d2 += base.d_eta(db, m) * base.phi(m, dc);
              }
              f_xi += Pi(db, b) * Pi(dc, c) * fx;
              dpz += Pi(db, b) * Pi(dc, c) * d1;
              dpy += Pi(db, b) * Pi(dc, c) * d2;
            }
          const double rhs = r2 * f_xi - 0.5 * (r2 - 1.0) * (dpz - dpy);
          res3 = std::max(res3, std::abs(lhs - rhs));
        }
      std::ostringstream nm;
      nm << pt_tag(static_cast<int>(ip)) << ",r=" << r;
      const double sc = std::max(1.0, base.g.max_abs() * r2);
      rep.add(nm.str() + ":row-xi", res1 / sc);
      rep.add(nm.str() + ":row-dr", res2 / sc);
      rep.add(nm.str() + ":row-nabla-xi", res3 / sc);
    }
  }
  rep.finalize();
  return rep;
}

}  // namespace psl
