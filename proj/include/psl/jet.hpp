#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace psl {

/// Second-order forward-mode jet: value, gradient and Hessian w.r.t. the seeded
/// chart coordinates. Curvature needs exact second metric derivatives, so jets are
/// propagated through all field arithmetic; finite differences remain test oracles only.
class Jet {
 public:
  double v = 0.0;
  Eigen::VectorXd d;   // gradient
  Eigen::MatrixXd h;   // Hessian (kept symmetric)

  Jet() = default;
  Jet(double value, int dim)
      : v(value), d(Eigen::VectorXd::Zero(dim)), h(Eigen::MatrixXd::Zero(dim, dim)) {}

  int dim() const { return static_cast<int>(d.size()); }

  static Jet constant(double value, int dim) { return Jet(value, dim); }

  static Jet variable(double value, int dim, int index) {
    Jet j(value, dim);
    j.d[index] = 1.0;
    return j;
  }

  Jet operator-() const {
    Jet r = *this;
    r.v = -r.v;
    r.d = -r.d;
    r.h = -r.h;
    return r;
  }

  Jet& operator+=(const Jet& o) {
    v += o.v;
    d += o.d;
    h += o.h;
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v;
    d -= o.d;
    h -= o.h;
    return *this;
  }
  Jet& operator+=(double c) {
    v += c;
    return *this;
  }
  Jet& operator-=(double c) {
    v -= c;
    return *this;
  }
  Jet& operator*=(double c) {
    v *= c;
    d *= c;
    h *= c;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double c) { return a += c; }
  friend Jet operator+(double c, Jet a) { return a += c; }
  friend Jet operator-(Jet a, double c) { return a -= c; }
  friend Jet operator-(double c, const Jet& a) { return (-a) += c; }
  friend Jet operator*(Jet a, double c) { return a *= c; }
  friend Jet operator*(double c, Jet a) { return a *= c; }
  friend Jet operator/(Jet a, double c) { return a *= (1.0 / c); }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(a.v * b.v, a.dim());
    r.d = a.v * b.d + b.v * a.d;
    r.h = a.v * b.h + b.v * a.h + a.d * b.d.transpose() + b.d * a.d.transpose();
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
  friend Jet operator/(double c, const Jet& b) { return reciprocal(b) * c; }

  /// Composition with a scalar function given f(v), f'(v), f''(v).
  static Jet compose(const Jet& x, double f, double fp, double fpp) {
    Jet r(f, x.dim());
    r.d = fp * x.d;
    r.h = fp * x.h + fpp * (x.d * x.d.transpose());
    return r;
  }

  static Jet reciprocal(const Jet& x) {
    const double iv = 1.0 / x.v;
    return compose(x, iv, -iv * iv, 2.0 * iv * iv * iv);
  }
};

inline Jet exp(const Jet& x) {
  const double e = std::exp(x.v);
  return Jet::compose(x, e, e, e);
}
inline Jet log(const Jet& x) {
  return Jet::compose(x, std::log(x.v), 1.0 / x.v, -1.0 / (x.v * x.v));
}
inline Jet sqrt(const Jet& x) {
  const double s = std::sqrt(x.v);
  return Jet::compose(x, s, 0.5 / s, -0.25 / (s * x.v));
}
inline Jet sin(const Jet& x) {
  return Jet::compose(x, std::sin(x.v), std::cos(x.v), -std::sin(x.v));
}
inline Jet cos(const Jet& x) {
  return Jet::compose(x, std::cos(x.v), -std::sin(x.v), -std::cos(x.v));
}
inline Jet sinh(const Jet& x) {
  return Jet::compose(x, std::sinh(x.v), std::cosh(x.v), std::sinh(x.v));
}
inline Jet cosh(const Jet& x) {
  return Jet::compose(x, std::cosh(x.v), std::sinh(x.v), std::cosh(x.v));
}

/// Seeds the coordinates of `p` as jet variables.
inline std::vector<Jet> seed_point(const Eigen::VectorXd& p) {
  const int n = static_cast<int>(p.size());
  std::vector<Jet> vars;
  vars.reserve(n);
  for (int i = 0; i < n; ++i) vars.push_back(Jet::variable(p[i], n, i));
  return vars;
}

/// Constant (derivative-free) jets at `p`; used by finite-difference test oracles.
inline std::vector<Jet> seed_constants(const Eigen::VectorXd& p) {
  const int n = static_cast<int>(p.size());
  std::vector<Jet> vars;
  vars.reserve(n);
  for (int i = 0; i < n; ++i) vars.push_back(Jet::constant(p[i], n));
  return vars;
}

using JetSpan = std::span<const Jet>;
using JetFieldFn = std::function<std::vector<Jet>(JetSpan)>;
using ScalarFieldFn = std::function<Jet(JetSpan)>;

}  // namespace psl
