#include "psl/geometry.hpp"

#include <cmath>

#include "psl/errors.hpp"

namespace psl {

namespace {

std::size_t idx3(int a, int b, int c, int d) {
  return (static_cast<std::size_t>(a) * d + b) * d + c;
}

// Connection coefficients and curvature shared by both backends once Gamma and
// its derivative dGamma[(m,k,i,j)] (charts) or the bracket correction (frames)
// are known.
void finish_curvature(GeomEval& ev) {
  const int d = ev.dim;
  ev.ricci = TensorValue(d, {Var::Lo, Var::Lo}, ev.frame_id);
  for (int b = 0; b < d; ++b)
    for (int c = 0; c < d; ++c) {
      double s = 0.0;
      for (int a = 0; a < d; ++a)
        for (int e = 0; e < d; ++e) s += ev.g_inv(a, e) * ev.riemann(a, b, c, e);
      ev.ricci(b, c) = s;
    }
  ev.scal = 0.0;
  for (int b = 0; b < d; ++b)
    for (int c = 0; c < d; ++c) ev.scal += ev.g_inv(b, c) * ev.ricci(b, c);
}

void finish_structure(GeomEval& ev) {
  const int d = ev.dim;
  // nabla of phi/xi/eta from raw partials (zero for frames) + Gamma corrections.
  const auto& raw = ev.raw;
  auto dphi = [&](int a, int i, int j) { return raw ? raw->dphi[idx3(a, i, j, d)] : 0.0; };
  auto deta = [&](int a, int b) { return raw ? raw->deta[a * d + b] : 0.0; };
  auto dxi = [&](int a, int b) { return raw ? raw->dxi[a * d + b] : 0.0; };

  ev.nabla_phi = TensorValue(d, {Var::Lo, Var::Up, Var::Lo}, ev.frame_id);
  ev.nabla_xi = TensorValue(d, {Var::Lo, Var::Up}, ev.frame_id);
  ev.nabla_eta = TensorValue(d, {Var::Lo, Var::Lo}, ev.frame_id);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      double sxi = dxi(a, b);
      double seta = deta(a, b);
      for (int m = 0; m < d; ++m) {
        sxi += ev.gamma(b, a, m) * ev.xi(m);
        seta -= ev.gamma(m, a, b) * ev.eta(m);
      }
      ev.nabla_xi(a, b) = sxi;
      ev.nabla_eta(a, b) = seta;
      for (int c = 0; c < d; ++c) {
        double s = dphi(a, b, c);
        for (int m = 0; m < d; ++m)
          s += ev.gamma(b, a, m) * ev.phi(m, c) - ev.gamma(m, a, c) * ev.phi(b, m);
        ev.nabla_phi(a, b, c) = s;
      }
    }

  ev.F = TensorValue(d, {Var::Lo, Var::Lo, Var::Lo}, ev.frame_id);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) {
        double s = 0.0;
        for (int m = 0; m < d; ++m) s += ev.nabla_phi(a, m, b) * ev.g(m, c);
        ev.F(a, b, c) = s;
      }

  ev.g_tilde = TensorValue(d, {Var::Lo, Var::Lo}, ev.frame_id);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      double s = ev.eta(a) * ev.eta(b);
      for (int m = 0; m < d; ++m) s += ev.g(a, m) * ev.phi(m, b);
      ev.g_tilde(a, b) = s;
    }

  // d eta: in charts, coordinate brackets vanish; in frames, eta([e_i,e_j]) remains.
  ev.d_eta = TensorValue(d, {Var::Lo, Var::Lo}, ev.frame_id);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      double s = deta(a, b) - deta(b, a);
      if (ev.frame_backend)
        for (int m = 0; m < d; ++m) s -= ev.frame_backend->c_at(m, a, b) * ev.eta(m);
      ev.d_eta(a, b) = s;
    }

  // Scal* over a g-orthonormal frame.
  const Eigen::MatrixXd E = orthonormal_frame(ev.g.as_matrix());
  const Eigen::MatrixXd ric = ev.ricci.as_matrix();
  const Eigen::MatrixXd phi = ev.phi.as_matrix();
  ev.scal_star = 0.0;
  for (int i = 0; i < d; ++i)
    ev.scal_star += E.col(i).dot(ric * (phi * E.col(i)));
}

GeomEval evaluate_frame(const LieFrameModel& fm) {
  GeomEval ev;
  const int d = fm.dim;
  ev.dim = d;
  ev.frame_id = fm.frame_id;
  ev.point = Eigen::VectorXd::Zero(0);
  ev.frame_backend = fm;

  ev.g = TensorValue::from_matrix(fm.g, Var::Lo, Var::Lo, fm.frame_id);
  ev.g_inv = metric_inverse(ev.g);

  // Koszul with constant metric: 2 g(nabla_i e_j, e_k) = c_ij,k + c_ki,j + c_kj,i.
  auto cform = [&](int i, int j, int k) {
    double s = 0.0;
    for (int m = 0; m < d; ++m) s += fm.c_at(m, i, j) * fm.g(m, k);
    return s;
  };
  ev.gamma = TensorValue(d, {Var::Up, Var::Lo, Var::Lo}, fm.frame_id);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        const double two_gamma_k = cform(i, j, k) + cform(k, i, j) + cform(k, j, i);
        for (int l = 0; l < d; ++l) ev.gamma(l, i, j) += 0.5 * ev.g_inv(k, l) * two_gamma_k;
      }

  // R(e_i,e_j)e_k = nabla_i nabla_j e_k - nabla_j nabla_i e_k - nabla_[e_i,e_j] e_k,
  // with constant connection coefficients.
  ev.riemann = TensorValue(d, {Var::Lo, Var::Lo, Var::Lo, Var::Lo}, fm.frame_id);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double s = 0.0;
          for (int m = 0; m < d; ++m)
            s += ev.gamma(m, j, k) * ev.gamma(l, i, m) - ev.gamma(m, i, k) * ev.gamma(l, j, m) -
                 fm.c_at(m, i, j) * ev.gamma(l, m, k);
          for (int e = 0; e < d; ++e) ev.riemann(i, j, k, e) += s * fm.g(l, e);
        }
  finish_curvature(ev);

  if (fm.has_structure()) {
    ev.has_structure = true;
    ev.phi = TensorValue::from_matrix(fm.phi, Var::Up, Var::Lo, fm.frame_id);
    ev.xi = TensorValue::from_vector(fm.xi, Var::Up, fm.frame_id);
    ev.eta = TensorValue::from_vector(fm.eta, Var::Lo, fm.frame_id);
    finish_structure(ev);
  }
  return ev;
}

struct JetTables {
  std::vector<Jet> g;          // dim*dim
  std::vector<Jet> phi, xi, eta;
};

GeomEval evaluate_chart(const ChartModel& cm, const Eigen::VectorXd& p) {
  if (p.size() != cm.dim) throw ShapeError("evaluate_geometry: point has wrong dimension");
  GeomEval ev;
  const int d = cm.dim;
  ev.dim = d;
  ev.frame_id = cm.frame_id;
  ev.point = p;

  const std::vector<Jet> vars = seed_point(p);
  JetTables jt;
  jt.g = cm.metric(vars);
  if (jt.g.size() != static_cast<std::size_t>(d) * d)
    throw ShapeError("metric field returned wrong number of components");

  ev.g = TensorValue(d, {Var::Lo, Var::Lo}, cm.frame_id);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) ev.g(i, j) = jt.g[i * d + j].v;
  ev.g_inv = metric_inverse(ev.g);

  ChartPartials raw;
  raw.dg.assign(static_cast<std::size_t>(d) * d * d, 0.0);
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) raw.dg[idx3(a, i, j, d)] = jt.g[i * d + j].d[a];

  // Gamma^k_ij = (1/2) g^{kl} (d_i g_jl + d_j g_il - d_l g_ij).
  auto dg = [&](int a, int i, int j) { return raw.dg[idx3(a, i, j, d)]; };
  ev.gamma = TensorValue(d, {Var::Up, Var::Lo, Var::Lo}, cm.frame_id);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int l = 0; l < d; ++l)
          s += ev.g_inv(k, l) * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
        ev.gamma(k, i, j) = 0.5 * s;
      }

  // dGamma^k_ij / dx^m needs d g^{kl} = -g^{ka} (d g_ab) g^{bl} and the metric Hessian.
  std::vector<double> dginv(static_cast<std::size_t>(d) * d * d, 0.0);
  for (int m = 0; m < d; ++m)
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l) {
        double s = 0.0;
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) s -= ev.g_inv(k, a) * dg(m, a, b) * ev.g_inv(b, l);
        dginv[idx3(m, k, l, d)] = s;
      }
  auto ddg = [&](int m, int a, int i, int j) { return jt.g[i * d + j].h(m, a); };
  std::vector<double> dGamma(static_cast<std::size_t>(d) * d * d * d, 0.0);
  auto dG = [&](int m, int k, int i, int j) -> double& {
    return dGamma[((static_cast<std::size_t>(m) * d + k) * d + i) * d + j];
  };
  for (int m = 0; m < d; ++m)
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double s = 0.0;
          for (int l = 0; l < d; ++l) {
            s += dginv[idx3(m, k, l, d)] * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
            s += ev.g_inv(k, l) * (ddg(m, i, j, l) + ddg(m, j, i, l) - ddg(m, l, i, j));
          }
          dG(m, k, i, j) = 0.5 * s;
        }

  // R^l_ijk = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik.
  ev.riemann = TensorValue(d, {Var::Lo, Var::Lo, Var::Lo, Var::Lo}, cm.frame_id);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double s = dG(i, l, j, k) - dG(j, l, i, k);
          for (int m = 0; m < d; ++m)
            s += ev.gamma(l, i, m) * ev.gamma(m, j, k) - ev.gamma(l, j, m) * ev.gamma(m, i, k);
          for (int e = 0; e < d; ++e) ev.riemann(i, j, k, e) += s * ev.g(l, e);
        }
  finish_curvature(ev);

  if (cm.has_structure()) {
    ev.has_structure = true;
    jt.phi = cm.phi(vars);
    jt.xi = cm.xi(vars);
    jt.eta = cm.eta(vars);
    ev.phi = TensorValue(d, {Var::Up, Var::Lo}, cm.frame_id);
    ev.xi = TensorValue(d, {Var::Up}, cm.frame_id);
    ev.eta = TensorValue(d, {Var::Lo}, cm.frame_id);
    raw.dphi.assign(static_cast<std::size_t>(d) * d * d, 0.0);
    raw.deta.assign(static_cast<std::size_t>(d) * d, 0.0);
    raw.dxi.assign(static_cast<std::size_t>(d) * d, 0.0);
    for (int i = 0; i < d; ++i) {
      ev.xi(i) = jt.xi[i].v;
      ev.eta(i) = jt.eta[i].v;
      for (int j = 0; j < d; ++j) {
        ev.phi(i, j) = jt.phi[i * d + j].v;
        for (int a = 0; a < d; ++a) raw.dphi[idx3(a, i, j, d)] = jt.phi[i * d + j].d[a];
      }
      for (int a = 0; a < d; ++a) {
        raw.deta[a * d + i] = jt.eta[i].d[a];
        raw.dxi[a * d + i] = jt.xi[i].d[a];
      }
    }
    ev.raw = std::move(raw);
    finish_structure(ev);
  } else {
    ev.raw = std::move(raw);
  }
  return ev;
}

}  // namespace

GeomEval evaluate_geometry(const ManifoldModel& m, const Eigen::VectorXd& p) {
  return m.is_chart() ? evaluate_chart(m.chart(), p) : evaluate_frame(m.frame());
}

TensorValue christoffel(const ManifoldModel& m, const Eigen::VectorXd& p) {
  return evaluate_geometry(m, p).gamma;
}
TensorValue riemann(const ManifoldModel& m, const Eigen::VectorXd& p) {
  return evaluate_geometry(m, p).riemann;
}
TensorValue ricci(const ManifoldModel& m, const Eigen::VectorXd& p) {
  return evaluate_geometry(m, p).ricci;
}
double scalar(const ManifoldModel& m, const Eigen::VectorXd& p) {
  return evaluate_geometry(m, p).scal;
}

TensorValue covariant_derivative(const ManifoldModel& m, const Eigen::VectorXd& p,
                                 const TensorField& field) {
  const GeomEval ev = evaluate_geometry(m, p);
  const int d = ev.dim;
  const int r = static_cast<int>(field.variance.size());

  // Component values and raw partials of the field.
  std::vector<double> val, dval;
  std::size_t n = 1;
  for (int k = 0; k < r; ++k) n *= d;
  if (m.is_chart()) {
    const std::vector<Jet> vars = seed_point(p);
    std::vector<Jet> comps = field.chart_fn(vars);
    if (comps.size() != n) throw ShapeError("covariant_derivative: field has wrong size");
    val.resize(n);
    dval.assign(static_cast<std::size_t>(d) * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      val[i] = comps[i].v;
      for (int a = 0; a < d; ++a) dval[a * n + i] = comps[i].d[a];
    }
  } else {
    if (field.frame_components.size() != n)
      throw ShapeError("covariant_derivative: field has wrong size");
    val = field.frame_components;
    dval.assign(static_cast<std::size_t>(d) * n, 0.0);
  }

  std::vector<Var> out_var;
  out_var.push_back(Var::Lo);
  out_var.insert(out_var.end(), field.variance.begin(), field.variance.end());
  TensorValue out(d, out_var, ev.frame_id);

  auto flat_src = [&](const std::vector<int>& ix) {
    std::size_t f = 0;
    for (int i : ix) f = f * d + static_cast<std::size_t>(i);
    return f;
  };
  // Iterate over all field indices.
  std::vector<int> ix(r, 0);
  for (;;) {
    const std::size_t src = flat_src(ix);
    for (int a = 0; a < d; ++a) {
      double s = dval[a * n + src];
      for (int slot = 0; slot < r; ++slot) {
        std::vector<int> jx = ix;
        for (int mm = 0; mm < d; ++mm) {
          jx[slot] = mm;
          const double tcomp = val[flat_src(jx)];
          if (field.variance[slot] == Var::Up)
            s += ev.gamma(ix[slot], a, mm) * tcomp;
          else
            s -= ev.gamma(mm, a, ix[slot]) * tcomp;
        }
      }
      std::vector<int> ox;
      ox.reserve(r + 1);
      ox.push_back(a);
      ox.insert(ox.end(), ix.begin(), ix.end());
      std::size_t f = 0;
      for (int i : ox) f = f * d + static_cast<std::size_t>(i);
      out[f] = s;
    }
    int k = r - 1;
    for (; k >= 0; --k) {
      if (++ix[k] < d) break;
      ix[k] = 0;
    }
    if (k < 0) break;
  }
  return out;
}

Eigen::MatrixXd orthonormal_frame(const Eigen::MatrixXd& g) {
  const int d = static_cast<int>(g.rows());
  std::vector<Eigen::VectorXd> cand;
  for (int i = 0; i < d; ++i) cand.push_back(Eigen::VectorXd::Unit(d, i));
  Eigen::MatrixXd E(d, d);
  int built = 0;
  while (built < d) {
    // Project candidates against the built set, pivot on the largest remaining norm.
    int best = -1;
    double best_norm = -1.0;
    std::vector<Eigen::VectorXd> proj(cand.size());
    for (std::size_t c = 0; c < cand.size(); ++c) {
      Eigen::VectorXd v = cand[c];
      for (int k = 0; k < built; ++k) v -= (E.col(k).transpose() * g * v)(0) * E.col(k);
      proj[c] = v;
      const double nn = (v.transpose() * g * v)(0);
      if (nn > best_norm) {
        best_norm = nn;
        best = static_cast<int>(c);
      }
    }
    if (best_norm <= 1e-14) throw SingularMetricError("orthonormal_frame: degenerate metric");
    E.col(built) = proj[best] / std::sqrt(best_norm);
    cand.erase(cand.begin() + best);
    ++built;
  }
  return E;
}

Eigen::MatrixXd horizontal_frame(const Eigen::MatrixXd& g, const Eigen::VectorXd& xi,
                                 const Eigen::VectorXd& eta) {
  const int d = static_cast<int>(g.rows());
  std::vector<Eigen::VectorXd> cand;
  for (int i = 0; i < d; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(d, i);
    v -= eta[i] * xi;  // horizontal projection x - eta(x) xi
    cand.push_back(v);
  }
  Eigen::MatrixXd E(d, d - 1);
  int built = 0;
  while (built < d - 1) {
    int best = -1;
    double best_norm = -1.0;
    std::vector<Eigen::VectorXd> proj(cand.size());
    for (std::size_t c = 0; c < cand.size(); ++c) {
      Eigen::VectorXd v = cand[c];
      for (int k = 0; k < built; ++k) v -= (E.col(k).transpose() * g * v)(0) * E.col(k);
      proj[c] = v;
      const double nn = (v.transpose() * g * v)(0);
      if (nn > best_norm) {
        best_norm = nn;
        best = static_cast<int>(c);
      }
    }
    if (best_norm <= 1e-14)
      throw SingularMetricError("horizontal_frame: could not span ker(eta)");
    E.col(built) = proj[best] / std::sqrt(best_norm);
    cand.erase(cand.begin() + best);
    ++built;
  }
  return E;
}

TensorValue pull_back_covariant(const TensorValue& t, const Eigen::MatrixXd& A,
                                const std::string& new_frame) {
  for (Var v : t.variance())
    if (v != Var::Lo) throw VarianceError("pull_back_covariant: tensor must be fully covariant");
  const int r = t.rank();
  const int dn = static_cast<int>(A.cols());
  const int do = t.dim();
  TensorValue out(dn, t.variance(), new_frame);
  std::vector<int> oi(r, 0);
  for (;;) {
    // contract each slot with the corresponding column
    std::vector<int> si(r, 0);
    double sum = 0.0;
    for (;;) {
      double prod = t[[&] {
        std::size_t f = 0;
        for (int i : si) f = f * do + static_cast<std::size_t>(i);
        return f;
      }()];
      for (int k = 0; k < r && prod != 0.0; ++k) prod *= A(si[k], oi[k]);
      sum += prod;
      int k = r - 1;
      for (; k >= 0; --k) {
        if (++si[k] < do) break;
        si[k] = 0;
      }
      if (k < 0) break;
    }
    std::size_t f = 0;
    for (int i : oi) f = f * dn + static_cast<std::size_t>(i);
    out[f] = sum;
    int k = r - 1;
    for (; k >= 0; --k) {
      if (++oi[k] < dn) break;
      oi[k] = 0;
    }
    if (k < 0) break;
  }
  return out;
}

}  // namespace psl
