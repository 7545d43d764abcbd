#include "psl/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace psl {

namespace {

std::size_t pow_dim(int dim, int rank) {
  std::size_t s = 1;
  for (int i = 0; i < rank; ++i) s *= static_cast<std::size_t>(dim);
  return s;
}

// Multi-index walker over rank slots of extent dim.
struct MultiIndex {
  explicit MultiIndex(int rank, int dim) : idx(rank, 0), dim(dim) {}
  std::vector<int> idx;
  int dim;
  bool advance() {
    for (int k = static_cast<int>(idx.size()) - 1; k >= 0; --k) {
      if (++idx[k] < dim) return true;
      idx[k] = 0;
    }
    return false;
  }
};

std::size_t flat_of(const std::vector<int>& idx, int dim) {
  std::size_t f = 0;
  for (int i : idx) f = f * dim + static_cast<std::size_t>(i);
  return f;
}

}  // namespace

TensorValue::TensorValue(int dim, std::vector<Var> variance, std::string frame_id)
    : dim_(dim),
      variance_(std::move(variance)),
      comp_(pow_dim(dim, static_cast<int>(variance_.size())), 0.0),
      frame_(std::move(frame_id)) {
  if (dim <= 0) throw ShapeError("TensorValue: dim must be positive");
}

TensorValue TensorValue::scalar(double v, int dim, std::string frame_id) {
  TensorValue t(dim, {}, std::move(frame_id));
  t.comp_[0] = v;
  return t;
}

TensorValue TensorValue::from_matrix(const Eigen::MatrixXd& m, Var a, Var b,
                                     std::string frame_id) {
  TensorValue t(static_cast<int>(m.rows()), {a, b}, std::move(frame_id));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) t(i, j) = m(i, j);
  return t;
}

TensorValue TensorValue::from_vector(const Eigen::VectorXd& v, Var a, std::string frame_id) {
  TensorValue t(static_cast<int>(v.size()), {a}, std::move(frame_id));
  for (int i = 0; i < v.size(); ++i) t(i) = v[i];
  return t;
}

TensorValue TensorValue::identity(int dim, std::string frame_id) {
  TensorValue t(dim, {Var::Up, Var::Lo}, std::move(frame_id));
  for (int i = 0; i < dim; ++i) t(i, i) = 1.0;
  return t;
}

std::size_t TensorValue::flat(std::initializer_list<int> idx) const {
  if (static_cast<int>(idx.size()) != rank())
    throw IndexError("TensorValue: wrong number of indices");
  std::size_t f = 0;
  for (int i : idx) {
    if (i < 0 || i >= dim_) throw IndexError("TensorValue: index out of range");
    f = f * dim_ + static_cast<std::size_t>(i);
  }
  return f;
}

Eigen::MatrixXd TensorValue::as_matrix() const {
  if (rank() != 2) throw ShapeError("as_matrix: rank-2 tensor required");
  Eigen::MatrixXd m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
  return m;
}

Eigen::VectorXd TensorValue::as_vector() const {
  if (rank() != 1) throw ShapeError("as_vector: rank-1 tensor required");
  Eigen::VectorXd v(dim_);
  for (int i = 0; i < dim_; ++i) v[i] = (*this)(i);
  return v;
}

double TensorValue::max_abs() const {
  double m = 0.0;
  for (double c : comp_) m = std::max(m, std::abs(c));
  return m;
}

void TensorValue::require_compatible(const TensorValue& o) const {
  if (dim_ != o.dim_ || frame_ != o.frame_)
    throw ShapeError("TensorValue: dim/frame mismatch (" + frame_ + " vs " + o.frame_ + ")");
  if (variance_ != o.variance_) throw VarianceError("TensorValue: variance mismatch");
}

TensorValue& TensorValue::operator+=(const TensorValue& o) {
  require_compatible(o);
  for (std::size_t i = 0; i < comp_.size(); ++i) comp_[i] += o.comp_[i];
  return *this;
}

TensorValue& TensorValue::operator-=(const TensorValue& o) {
  require_compatible(o);
  for (std::size_t i = 0; i < comp_.size(); ++i) comp_[i] -= o.comp_[i];
  return *this;
}

TensorValue& TensorValue::operator*=(double c) {
  for (double& x : comp_) x *= c;
  return *this;
}

TensorValue contract(const TensorValue& t, int slot_a, int slot_b) {
  const int r = t.rank();
  if (slot_a == slot_b) throw IndexError("contract: slots must differ");
  if (slot_a < 0 || slot_a >= r || slot_b < 0 || slot_b >= r)
    throw IndexError("contract: slot out of range");
  if (t.variance()[slot_a] == t.variance()[slot_b])
    throw VarianceError("contract: one slot must be upper and one lower");

  const int d = t.dim();
  std::vector<Var> out_var;
  std::vector<int> out_slots;
  for (int k = 0; k < r; ++k)
    if (k != slot_a && k != slot_b) {
      out_var.push_back(t.variance()[k]);
      out_slots.push_back(k);
    }

  TensorValue out(d, out_var, t.frame_id());
  MultiIndex mi(r - 2, d);
  std::vector<int> src(r, 0);
  do {
    double sum = 0.0;
    for (int k = 0; k < r - 2; ++k) src[out_slots[k]] = mi.idx[k];
    for (int s = 0; s < d; ++s) {
      src[slot_a] = s;
      src[slot_b] = s;
      sum += t[flat_of(src, d)];
    }
    out[flat_of(mi.idx, d)] = sum;
  } while (mi.advance());
  return out;
}

TensorValue contract(const TensorValue& s, int slot_s, const TensorValue& t, int slot_t) {
  if (s.dim() != t.dim() || s.frame_id() != t.frame_id())
    throw ShapeError("contract: dim/frame mismatch");
  if (slot_s < 0 || slot_s >= s.rank() || slot_t < 0 || slot_t >= t.rank())
    throw IndexError("contract: slot out of range");
  if (s.variance()[slot_s] == t.variance()[slot_t])
    throw VarianceError("contract: one slot must be upper and one lower");

  const int d = s.dim();
  const int rs = s.rank(), rt = t.rank();
  std::vector<Var> out_var;
  for (int k = 0; k < rs; ++k)
    if (k != slot_s) out_var.push_back(s.variance()[k]);
  for (int k = 0; k < rt; ++k)
    if (k != slot_t) out_var.push_back(t.variance()[k]);

  TensorValue out(d, out_var, s.frame_id());
  const int ro = rs + rt - 2;
  MultiIndex mi(ro, d);
  std::vector<int> si(rs, 0), ti(rt, 0);
  do {
    int k = 0;
    for (int a = 0; a < rs; ++a)
      if (a != slot_s) si[a] = mi.idx[k++];
    for (int a = 0; a < rt; ++a)
      if (a != slot_t) ti[a] = mi.idx[k++];
    double sum = 0.0;
    for (int m = 0; m < d; ++m) {
      si[slot_s] = m;
      ti[slot_t] = m;
      sum += s[flat_of(si, d)] * t[flat_of(ti, d)];
    }
    out[flat_of(mi.idx, d)] = sum;
  } while (mi.advance());
  return out;
}

TensorValue outer(const TensorValue& a, const TensorValue& b) {
  if (a.dim() != b.dim() || a.frame_id() != b.frame_id())
    throw ShapeError("outer: dim/frame mismatch");
  std::vector<Var> out_var = a.variance();
  out_var.insert(out_var.end(), b.variance().begin(), b.variance().end());
  TensorValue out(a.dim(), out_var, a.frame_id());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return out;
}

namespace {

TensorValue move_metric_slot(const TensorValue& t, int slot, const TensorValue& metric,
                             Var needed, const char* what) {
  if (slot < 0 || slot >= t.rank()) throw IndexError(std::string(what) + ": slot out of range");
  if (t.variance()[slot] != needed)
    throw VarianceError(std::string(what) + ": slot has wrong variance");
  // Contract with the metric, then move the new slot (appended last) back into place.
  TensorValue c = contract(t, slot, metric, 0);
  std::vector<int> perm(c.rank());
  for (int k = 0; k < c.rank(); ++k)
    perm[k] = (k == slot) ? c.rank() - 1 : (k < slot ? k : k - 1);
  return permute(c, perm);
}

}  // namespace

TensorValue raise_index(const TensorValue& t, int slot, const TensorValue& g_inv) {
  if (g_inv.variance() != std::vector<Var>{Var::Up, Var::Up})
    throw VarianceError("raise_index: g_inv must be (2,0)");
  return move_metric_slot(t, slot, g_inv, Var::Lo, "raise_index");
}

TensorValue lower_index(const TensorValue& t, int slot, const TensorValue& g) {
  if (g.variance() != std::vector<Var>{Var::Lo, Var::Lo})
    throw VarianceError("lower_index: g must be (0,2)");
  return move_metric_slot(t, slot, g, Var::Up, "lower_index");
}

TensorValue metric_inverse(const TensorValue& g) {
  if (g.variance() != std::vector<Var>{Var::Lo, Var::Lo})
    throw VarianceError("metric_inverse: g must be (0,2)");
  const Eigen::MatrixXd m = g.as_matrix();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const double det = lu.determinant();
  const double scale = std::max(1.0, std::pow(m.cwiseAbs().maxCoeff(), m.rows()));
  if (std::abs(det) < 1e-12 * scale)
    throw SingularMetricError("metric_inverse: determinant below threshold");
  return TensorValue::from_matrix(lu.inverse(), Var::Up, Var::Up, g.frame_id());
}

TensorValue kulkarni_nomizu(const TensorValue& a, const TensorValue& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.variance() != b.variance() ||
      a.variance() != std::vector<Var>{Var::Lo, Var::Lo})
    throw ShapeError("kulkarni_nomizu: two (0,2) tensors required");
  if (a.dim() != b.dim() || a.frame_id() != b.frame_id())
    throw ShapeError("kulkarni_nomizu: dim/frame mismatch");
  const int d = a.dim();
  TensorValue out(d, {Var::Lo, Var::Lo, Var::Lo, Var::Lo}, a.frame_id());
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z)
        for (int w = 0; w < d; ++w)
          out(x, y, z, w) = a(y, z) * b(x, w) - a(x, z) * b(y, w) + b(y, z) * a(x, w) -
                            b(x, z) * a(y, w);
  return out;
}

TensorValue permute(const TensorValue& t, const std::vector<int>& perm) {
  const int r = t.rank();
  if (static_cast<int>(perm.size()) != r) throw IndexError("permute: wrong permutation size");
  std::vector<Var> out_var(r);
  for (int k = 0; k < r; ++k) out_var[k] = t.variance()[perm[k]];
  TensorValue out(t.dim(), out_var, t.frame_id());
  if (r == 0) {
    out[0] = t[0];
    return out;
  }
  MultiIndex mi(r, t.dim());
  std::vector<int> src(r, 0);
  do {
    for (int k = 0; k < r; ++k) src[perm[k]] = mi.idx[k];
    out[flat_of(mi.idx, t.dim())] = t[flat_of(src, t.dim())];
  } while (mi.advance());
  return out;
}

TensorValue symmetrize(const TensorValue& t, int a, int b) {
  std::vector<int> perm(t.rank());
  for (int k = 0; k < t.rank(); ++k) perm[k] = k;
  std::swap(perm[a], perm[b]);
  return (t + permute(t, perm)) * 0.5;
}

TensorValue antisymmetrize(const TensorValue& t, int a, int b) {
  std::vector<int> perm(t.rank());
  for (int k = 0; k < t.rank(); ++k) perm[k] = k;
  std::swap(perm[a], perm[b]);
  return (t - permute(t, perm)) * 0.5;
}

TensorValue compose_slot(const TensorValue& t, int slot, const TensorValue& m) {
  if (m.variance() != std::vector<Var>{Var::Up, Var::Lo})
    throw VarianceError("compose_slot: endomorphism must be (1,1)");
  if (slot < 0 || slot >= t.rank() || t.variance()[slot] != Var::Lo)
    throw VarianceError("compose_slot: slot must be a lower slot");
  // t(..., m(arg), ...): contract t's lower slot with m's upper slot; m's lower
  // slot replaces it.
  TensorValue c = contract(t, slot, m, 0);
  std::vector<int> perm(c.rank());
  for (int k = 0; k < c.rank(); ++k)
    perm[k] = (k == slot) ? c.rank() - 1 : (k < slot ? k : k - 1);
  return permute(c, perm);
}

double evaluate(const TensorValue& t, const std::vector<Eigen::VectorXd>& args) {
  if (static_cast<int>(args.size()) != t.rank())
    throw IndexError("evaluate: argument count must equal rank");
  const int d = t.dim();
  const int r = t.rank();
  if (r == 0) return t[0];
  MultiIndex mi(r, d);
  double sum = 0.0;
  do {
    double prod = t[flat_of(mi.idx, d)];
    for (int k = 0; k < r && prod != 0.0; ++k) prod *= args[k][mi.idx[k]];
    sum += prod;
  } while (mi.advance());
  return sum;
}

double max_abs_diff(const TensorValue& a, const TensorValue& b) {
  TensorValue d = a;
  d -= b;
  return d.max_abs();
}

bool near_equal(const TensorValue& a, const TensorValue& b, const Tol& tol) {
  if (a.dim() != b.dim() || a.frame_id() != b.frame_id())
    throw ShapeError("near_equal: dim/frame mismatch");
  if (a.variance() != b.variance()) throw VarianceError("near_equal: variance mismatch");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!tol.near(a[i], b[i])) return false;
  return true;
}

double identity_residual(const TensorValue& lhs, const TensorValue& rhs) {
  const double scale = std::max({1.0, lhs.max_abs(), rhs.max_abs()});
  return max_abs_diff(lhs, rhs) / scale;
}

}  // namespace psl
