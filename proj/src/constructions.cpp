#include "psl/constructions.hpp"

#include <cmath>
#include <sstream>

#include "psl/errors.hpp"

namespace psl {

namespace {

std::vector<Jet> constant_matrix_field(const Eigen::MatrixXd& m, JetSpan vars) {
  const int d = static_cast<int>(m.rows());
  const int jd = vars.empty() ? 0 : vars[0].dim();
  std::vector<Jet> out(static_cast<std::size_t>(d) * m.cols(), Jet::constant(0.0, jd));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < m.cols(); ++j) out[i * m.cols() + j] = Jet::constant(m(i, j), jd);
  return out;
}

JetFieldFn constant_matrix(const Eigen::MatrixXd& m) {
  return [m](JetSpan vars) { return constant_matrix_field(m, vars); };
}

JetFieldFn constant_vector(const Eigen::VectorXd& v) {
  return [v](JetSpan vars) {
    const int jd = vars.empty() ? 0 : vars[0].dim();
    std::vector<Jet> out;
    out.reserve(v.size());
    for (int i = 0; i < v.size(); ++i) out.push_back(Jet::constant(v[i], jd));
    return out;
  };
}

Eigen::MatrixXd swap_matrix(int n) {
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    P(n + i, i) = 1.0;
    P(i, n + i) = 1.0;
  }
  return P;
}

}  // namespace

JetFieldFn phpcr_h_tilde(const PhpcrModel& base) {
  const ChartModel chart = base.chart;
  const JetFieldFn P = base.P;
  const int d = base.dim();
  return [chart, P, d](JetSpan vars) {
    const std::vector<Jet> h = chart.metric(vars);
    const std::vector<Jet> p = P(vars);
    const int jd = vars.empty() ? 0 : vars[0].dim();
    std::vector<Jet> out(static_cast<std::size_t>(d) * d, Jet::constant(0.0, jd));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Jet s = Jet::constant(0.0, jd);
        for (int m = 0; m < d; ++m) s += h[i * d + m] * p[m * d + j];
        out[i * d + j] = s;
      }
    return out;
  };
}

CheckReport validate_phpcr(const PhpcrModel& base, const Points& pts, const Tol& tol) {
  if (base.dim() % 2 != 0) throw DimensionError("validate_phpcr: even dimension required");
  CheckReport rep;
  rep.check = "validate_phpcr(" + base.name + ")";
  rep.tol = tol.atol;
  rep.points = static_cast<int>(pts.size());
  ManifoldModel m{base.chart};
  const int d = base.dim();
  for (std::size_t ip = 0; ip < pts.size(); ++ip) {
    const GeomEval ev = evaluate_geometry(m, pts[ip]);
    const std::vector<Jet> vars = seed_point(pts[ip]);
    const std::vector<Jet> pj = base.P(vars);
    Eigen::MatrixXd P(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) P(i, j) = pj[i * d + j].v;
    const Eigen::MatrixXd G = ev.g.as_matrix();

    const double p2 = (P * P - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
    const double trp = std::abs(P.trace());
    const double comp = (P.transpose() * G * P - G).cwiseAbs().maxCoeff();

    TensorField pf;
    pf.variance = {Var::Up, Var::Lo};
    pf.chart_fn = base.P;
    const TensorValue np = covariant_derivative(m, pts[ip], pf);
    const double sc = std::max(1.0, G.cwiseAbs().maxCoeff());

    std::ostringstream nm;
    nm << "point" << ip;
    rep.add(nm.str() + ":P^2=id", p2);
    rep.add(nm.str() + ":tr(P)=0", trp);
    rep.add(nm.str() + ":h(P.,P.)=h", comp / sc);
    rep.add(nm.str() + ":nabla(P)=0", np.max_abs() / sc);
  }
  rep.finalize();
  return rep;
}

ApcpcStructure hyperbolic_extension(const PhpcrModel& base) {
  // The base contract is enforced up front; a defective base would silently break
  // every downstream theorem check.
  {
    Rng rng(0x7e3a11dull);
    const Points pts = sample_points(base.chart.domain, 5, rng);
    const CheckReport rep = validate_phpcr(base, pts, Tol{1e-8, 1e-8});
    if (!rep.pass)
      throw PhpcrValidationError("hyperbolic_extension: base fails phpcR invariants (" +
                                 base.name + ", residual " + std::to_string(rep.max_residual) +
                                 ")");
  }
  const int d = base.dim();
  const int D = d + 1;
  const ChartModel bchart = base.chart;
  const JetFieldFn P = base.P;
  const JetFieldFn htilde = phpcr_h_tilde(base);

  ChartModel cm;
  cm.dim = D;
  cm.frame_id = base.name + "::extension";
  cm.domain.lo = Eigen::VectorXd(D);
  cm.domain.hi = Eigen::VectorXd(D);
  cm.domain.lo[0] = -1.5;
  cm.domain.hi[0] = 1.5;
  cm.domain.lo.tail(d) = bchart.domain.lo;
  cm.domain.hi.tail(d) = bchart.domain.hi;

  cm.metric = [bchart, htilde, d, D](JetSpan vars) {
    const Jet& t = vars[0];
    const Jet c2 = cosh(2.0 * t);
    const Jet s2 = sinh(2.0 * t);
    const std::vector<Jet> h = bchart.metric(vars.subspan(1, d));
    const std::vector<Jet> ht = htilde(vars.subspan(1, d));
    const int jd = t.dim();
    std::vector<Jet> out(static_cast<std::size_t>(D) * D, Jet::constant(0.0, jd));
    out[0] = Jet::constant(1.0, jd);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        out[(i + 1) * D + (j + 1)] = c2 * h[i * d + j] + s2 * ht[i * d + j];
    return out;
  };
  cm.phi = [P, d, D](JetSpan vars) {
    const std::vector<Jet> p = P(vars.subspan(1, d));
    const int jd = vars[0].dim();
    std::vector<Jet> out(static_cast<std::size_t>(D) * D, Jet::constant(0.0, jd));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) out[(i + 1) * D + (j + 1)] = p[i * d + j];
    return out;
  };
  cm.xi = [D](JetSpan vars) {
    const int jd = vars[0].dim();
    std::vector<Jet> out(D, Jet::constant(0.0, jd));
    out[0] = Jet::constant(1.0, jd);
    return out;
  };
  cm.eta = cm.xi;

  ApcpcStructure s;
  s.model = ManifoldModel{cm};
  s.name = base.name + "::extension";
  s.extension_base = std::make_shared<PhpcrModel>(base);
  return s;
}

PhpcrModel extension_slice(const ApcpcStructure& s, double t) {
  if (!s.extension_base)
    throw BackendError("extension_slice: structure is not a hyperbolic extension");
  const PhpcrModel base = *s.extension_base;
  PhpcrModel slice = base;
  const double c2 = std::cosh(2.0 * t), s2 = std::sinh(2.0 * t);
  const ChartModel bchart = base.chart;
  const JetFieldFn htilde = phpcr_h_tilde(base);
  const int d = base.dim();
  slice.chart.metric = [bchart, htilde, c2, s2, d](JetSpan vars) {
    std::vector<Jet> h = bchart.metric(vars);
    const std::vector<Jet> ht = htilde(vars);
    for (int k = 0; k < d * d; ++k) h[k] = c2 * h[k] + s2 * ht[k];
    return h;
  };
  slice.name = base.name + "::slice";
  slice.chart.frame_id = base.chart.frame_id + "::slice";
  return slice;
}

PhpcrModel flat_phpcr_swap(int n, double scale) {
  PhpcrModel m;
  m.name = "flat_swap_n" + std::to_string(n);
  m.chart.dim = 2 * n;
  m.chart.frame_id = m.name;
  m.chart.domain = SampleBox::cube(2 * n, -1.0, 1.0);
  m.chart.metric = constant_matrix(scale * Eigen::MatrixXd::Identity(2 * n, 2 * n));
  m.P = constant_matrix(swap_matrix(n));
  return m;
}

PhpcrModel flat_phpcr_diag(int n, double scale) {
  PhpcrModel m;
  m.name = "flat_diag_n" + std::to_string(n);
  m.chart.dim = 2 * n;
  m.chart.frame_id = m.name;
  m.chart.domain = SampleBox::cube(2 * n, -1.0, 1.0);
  m.chart.metric = constant_matrix(scale * Eigen::MatrixXd::Identity(2 * n, 2 * n));
  Eigen::VectorXd diag(2 * n);
  for (int i = 0; i < 2 * n; ++i) diag[i] = (i % 2 == 0) ? 1.0 : -1.0;
  m.P = constant_matrix(diag.asDiagonal());
  return m;
}

PhpcrModel scale_metric(const PhpcrModel& base, double c) {
  PhpcrModel out = base;
  const JetFieldFn metric = base.chart.metric;
  out.chart.metric = [metric, c](JetSpan vars) {
    std::vector<Jet> h = metric(vars);
    for (auto& x : h) x *= c;
    return h;
  };
  out.name = base.name + "::scaled";
  out.chart.frame_id = base.chart.frame_id + "::scaled";
  return out;
}

Example1 example1(int n) {
  if (n < 1) throw ParameterError("example1: n >= 1 required");
  const int d = 2 * n + 1;
  LieFrameModel fm;
  fm.dim = d;
  fm.frame_id = "example1_n" + std::to_string(n);
  fm.c.assign(static_cast<std::size_t>(d) * d * d, 0.0);
  for (int i = 1; i <= n; ++i) {
    fm.set_c(n + i, 0, i, -1.0);  // [e_0, e_i] = -e_{n+i}
    fm.set_c(i, 0, n + i, -1.0);  // [e_0, e_{n+i}] = -e_i
  }
  fm.g = Eigen::MatrixXd::Identity(d, d);
  fm.phi = Eigen::MatrixXd::Zero(d, d);
  for (int i = 1; i <= n; ++i) {
    fm.phi(n + i, i) = 1.0;
    fm.phi(i, n + i) = 1.0;
  }
  fm.xi = Eigen::VectorXd::Unit(d, 0);
  fm.eta = Eigen::VectorXd::Unit(d, 0);
  fm.validate();

  Example1 out;
  out.frame.model = ManifoldModel{fm};
  out.frame.name = fm.frame_id;

  out.chart = hyperbolic_extension(flat_phpcr_swap(n));
  out.chart.name = "example1_n" + std::to_string(n) + "_chart";
  return out;
}

Eigen::MatrixXd example1_frame_alignment(int n, double t) {
  const int d = 2 * n + 1;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d, d);
  A(0, 0) = 1.0;  // e_0 = d/dt
  const double ch = std::cosh(t), sh = std::sinh(t);
  // dual to e^i = cosh(t) dx^i + sinh(t) dx^{n+i}, e^{n+i} = sinh(t) dx^i + cosh(t) dx^{n+i}
  for (int i = 1; i <= n; ++i) {
    A(i, i) = ch;
    A(n + i, i) = -sh;
    A(i, n + i) = -sh;
    A(n + i, n + i) = ch;
  }
  return A;
}

Example2 example2(double lambda, double mu) {
  const int d = 5;
  LieFrameModel fm;
  fm.dim = d;
  fm.frame_id = "example2";
  fm.c.assign(static_cast<std::size_t>(d) * d * d, 0.0);
  // [e_0,e_1] = l e_2 - e_3 + m e_4        [e_0,e_2] = -l e_1 - m e_3 - e_4
  // [e_0,e_3] = -e_1 + m e_2 + l e_4       [e_0,e_4] = -m e_1 - e_2 - l e_3
  fm.set_c(2, 0, 1, lambda);
  fm.set_c(3, 0, 1, -1.0);
  fm.set_c(4, 0, 1, mu);
  fm.set_c(1, 0, 2, -lambda);
  fm.set_c(3, 0, 2, -mu);
  fm.set_c(4, 0, 2, -1.0);
  fm.set_c(1, 0, 3, -1.0);
  fm.set_c(2, 0, 3, mu);
  fm.set_c(4, 0, 3, lambda);
  fm.set_c(1, 0, 4, -mu);
  fm.set_c(2, 0, 4, -1.0);
  fm.set_c(3, 0, 4, -lambda);
  fm.g = Eigen::MatrixXd::Identity(d, d);
  fm.phi = Eigen::MatrixXd::Zero(d, d);
  fm.phi(3, 1) = fm.phi(1, 3) = 1.0;  // phi e_1 = e_3
  fm.phi(4, 2) = fm.phi(2, 4) = 1.0;  // phi e_2 = e_4
  fm.xi = Eigen::VectorXd::Unit(d, 0);
  fm.eta = Eigen::VectorXd::Unit(d, 0);
  fm.validate();

  Example2 out;
  out.frame.model = ManifoldModel{fm};
  out.frame.name = "example2_l" + std::to_string(lambda) + "_m" + std::to_string(mu);
  if (mu == 0.0 && lambda != 0.0) out.chart = example2_chart(lambda, mu);
  return out;
}

ApcpcStructure example2_chart(double lambda, double mu) {
  if (mu != 0.0 || lambda == 0.0)
    throw ParameterError("example2_chart: the chart twin requires mu = 0 and lambda != 0");
  // The chart metric is lambda-independent: the flat base carries h = 2 delta and
  // the eigenvalue-diagonal product structure.
  ApcpcStructure s = hyperbolic_extension(flat_phpcr_diag(2, 2.0));
  s.name = "example2_chart";
  return s;
}

PhpcrModel example3(int n) {
  if (n < 2) throw ParameterError("example3: n >= 2 required");
  PhpcrModel m;
  m.name = "example3_n" + std::to_string(n);
  const int d = 2 * n;
  m.chart.dim = d;
  m.chart.frame_id = m.name;
  const double half_width = 0.8 / std::sqrt(static_cast<double>(n));
  m.chart.domain = SampleBox::cube(d, -half_width, half_width);
  // Each factor: hyperbolic disc metric c * 4/(1-|y|^2)^2 delta with c = (n-1)/(2n),
  // so Ric_factor = -2n h_factor.
  const double c = (n - 1.0) / (2.0 * n);
  m.chart.metric = [n, d, c](JetSpan vars) {
    const int jd = vars[0].dim();
    std::vector<Jet> out(static_cast<std::size_t>(d) * d, Jet::constant(0.0, jd));
    for (int f = 0; f < 2; ++f) {
      Jet r2 = Jet::constant(0.0, jd);
      for (int i = 0; i < n; ++i) r2 += vars[f * n + i] * vars[f * n + i];
      const Jet den = 1.0 - r2;
      const Jet conf = (4.0 * c) / (den * den);
      for (int i = 0; i < n; ++i) out[(f * n + i) * d + (f * n + i)] = conf;
    }
    return out;
  };
  Eigen::VectorXd diag(d);
  for (int i = 0; i < d; ++i) diag[i] = (i < n) ? 1.0 : -1.0;
  m.P = constant_matrix(diag.asDiagonal());
  return m;
}

PhpcrModel example4(int n, double a, double b) {
  if (n < 2) throw ParameterError("example4: n >= 2 required");
  if (!(a > std::abs(b))) throw ParameterError("example4: a > |b| required");
  PhpcrModel m;
  m.name = "example4_n" + std::to_string(n);
  const int d = 2 * n;
  m.chart.dim = d;
  m.chart.frame_id = m.name;
  m.chart.domain = SampleBox::cube(d, 0.2, M_PI - 0.2);
  const double rp2 = 0.5 * (a + b);  // radius^2 of the +1-eigenspace sphere
  const double rm2 = 0.5 * (a - b);
  // Round n-sphere in spherical angles: g_kk = r^2 prod_{j<k} sin^2(theta_j).
  m.chart.metric = [n, d, rp2, rm2](JetSpan vars) {
    const int jd = vars[0].dim();
    std::vector<Jet> out(static_cast<std::size_t>(d) * d, Jet::constant(0.0, jd));
    for (int f = 0; f < 2; ++f) {
      const double r2 = (f == 0) ? rp2 : rm2;
      Jet acc = Jet::constant(r2, jd);
      for (int k = 0; k < n; ++k) {
        out[(f * n + k) * d + (f * n + k)] = acc;
        const Jet s = sin(vars[f * n + k]);
        acc = acc * s * s;
      }
    }
    return out;
  };
  Eigen::VectorXd diag(d);
  for (int i = 0; i < d; ++i) diag[i] = (i < n) ? 1.0 : -1.0;
  m.P = constant_matrix(diag.asDiagonal());
  return m;
}

TensorValue example4_curvature_closed_form(const PhpcrModel& sphere, double a, double b,
                                           const Eigen::VectorXd& p) {
  ManifoldModel m{sphere.chart};
  const GeomEval ev = evaluate_geometry(m, p);
  const int d = sphere.dim();
  const std::vector<Jet> vars = seed_point(p);
  const std::vector<Jet> pj = sphere.P(vars);
  TensorValue h = ev.g;
  TensorValue ht(d, {Var::Lo, Var::Lo}, ev.frame_id);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += ev.g(i, k) * pj[k * d + j].v;
      ht(i, j) = s;
    }
  const TensorValue pi1 = kulkarni_nomizu(h, h) * 0.5;
  const TensorValue pi2 = kulkarni_nomizu(ht, ht) * 0.5;
  const TensorValue pi3 = kulkarni_nomizu(h, ht);
  return ((pi1 + pi2) * a - pi3 * b) * (1.0 / (a * a - b * b));
}

ApcpcStructure parallel_product(int n) {
  if (n < 1) throw ParameterError("parallel_product: n >= 1 required");
  const int D = 2 * n + 1;
  ChartModel cm;
  cm.dim = D;
  cm.frame_id = "parallel_product_n" + std::to_string(n);
  cm.domain = SampleBox::cube(D, -1.0, 1.0);
  cm.metric = constant_matrix(Eigen::MatrixXd::Identity(D, D));
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(D, D);
  phi.bottomRightCorner(2 * n, 2 * n) = swap_matrix(n);
  cm.phi = constant_matrix(phi);
  cm.xi = constant_vector(Eigen::VectorXd::Unit(D, 0));
  cm.eta = constant_vector(Eigen::VectorXd::Unit(D, 0));
  ApcpcStructure s;
  s.model = ManifoldModel{cm};
  s.name = cm.frame_id;
  return s;
}

ApcpcStructure twisted_fixture() {
  // Coordinates (t, x1..x4); eta = dt + 0.3 sin(x2) dx1, xi = d/dt,
  // phi from the pair-swap P on the eta-horizontal frame X_b = d_b - eta_b d_t,
  // metric g = eta (x) eta on xi plus hhat = a(t,x) delta + b(t,x) sigma on the
  // horizontal frame. d(eta) != 0, so every derivative path is exercised.
  const int D = 5;
  ChartModel cm;
  cm.dim = D;
  cm.frame_id = "twisted";
  cm.domain = SampleBox::cube(D, -1.0, 1.0);

  auto eta1 = [](JetSpan v) { return 0.3 * sin(v[2]); };
  auto coef_a = [](JetSpan v) { return 1.4 + 0.25 * sin(v[0] + v[1]); };
  auto coef_b = [](JetSpan v) { return 0.3 + 0.2 * cos(v[3] + 2.0 * v[0]); };
  // sigma pairs (1,3) and (2,4) of the horizontal indices 1..4
  auto sigma = [](int i, int j) {
    return ((i == 1 && j == 3) || (i == 3 && j == 1) || (i == 2 && j == 4) ||
            (i == 4 && j == 2))
               ? 1.0
               : 0.0;
  };

  cm.eta = [eta1, D](JetSpan v) {
    const int jd = v[0].dim();
    std::vector<Jet> out(D, Jet::constant(0.0, jd));
    out[0] = Jet::constant(1.0, jd);
    out[1] = eta1(v);
    return out;
  };
  cm.xi = [D](JetSpan v) {
    const int jd = v[0].dim();
    std::vector<Jet> out(D, Jet::constant(0.0, jd));
    out[0] = Jet::constant(1.0, jd);
    return out;
  };
  cm.phi = [eta1, sigma, D](JetSpan v) {
    const int jd = v[0].dim();
    std::vector<Jet> out(static_cast<std::size_t>(D) * D, Jet::constant(0.0, jd));
    std::vector<Jet> eta(D, Jet::constant(0.0, jd));
    eta[0] = Jet::constant(1.0, jd);
    eta[1] = eta1(v);
    // phi d_b = sum_c sigma(c,b) (d_c - eta_c d_t)
    for (int b = 1; b < D; ++b)
      for (int c = 1; c < D; ++c)
        if (sigma(c, b) != 0.0) {
          out[c * D + b] = Jet::constant(1.0, jd);
          out[0 * D + b] -= eta[c];
        }
    return out;
  };
  cm.metric = [eta1, coef_a, coef_b, sigma, D](JetSpan v) {
    const int jd = v[0].dim();
    std::vector<Jet> eta(D, Jet::constant(0.0, jd));
    eta[0] = Jet::constant(1.0, jd);
    eta[1] = eta1(v);
    const Jet a = coef_a(v);
    const Jet b = coef_b(v);
    std::vector<Jet> out(static_cast<std::size_t>(D) * D, Jet::constant(0.0, jd));
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j) {
        Jet s = eta[i] * eta[j];
        if (i >= 1 && j >= 1) {
          if (i == j) s += a;
          if (sigma(i, j) != 0.0) s += b;
        }
        out[i * D + j] = s;
      }
    return out;
  };

  ApcpcStructure s;
  s.model = ManifoldModel{cm};
  s.name = "twisted";
  return s;
}

}  // namespace psl
