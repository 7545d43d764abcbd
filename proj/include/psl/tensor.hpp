#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "psl/errors.hpp"
#include "psl/tolerance.hpp"

namespace psl {

enum class Var : std::uint8_t { Lo, Up };

/// Dense multi-index array at a point, tagged with a variance signature and the
/// frame/chart its components refer to. Row-major storage; immutable by convention
/// after construction (operations return fresh values).
class TensorValue {
 public:
  TensorValue() = default;
  TensorValue(int dim, std::vector<Var> variance, std::string frame_id);

  static TensorValue scalar(double v, int dim, std::string frame_id);
  static TensorValue from_matrix(const Eigen::MatrixXd& m, Var a, Var b, std::string frame_id);
  static TensorValue from_vector(const Eigen::VectorXd& v, Var a, std::string frame_id);
  static TensorValue identity(int dim, std::string frame_id);  // (1,1) delta

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(variance_.size()); }
  const std::vector<Var>& variance() const { return variance_; }
  const std::string& frame_id() const { return frame_; }
  std::size_t size() const { return comp_.size(); }
  const std::vector<double>& data() const { return comp_; }
  std::vector<double>& data() { return comp_; }

  double& operator[](std::size_t flat) { return comp_[flat]; }
  double operator[](std::size_t flat) const { return comp_[flat]; }

  template <class... I>
  double& operator()(I... idx) {
    return comp_[flat(std::initializer_list<int>{static_cast<int>(idx)...})];
  }
  template <class... I>
  double operator()(I... idx) const {
    return comp_[flat(std::initializer_list<int>{static_cast<int>(idx)...})];
  }

  std::size_t flat(std::initializer_list<int> idx) const;

  Eigen::MatrixXd as_matrix() const;  // rank-2 only
  Eigen::VectorXd as_vector() const;  // rank-1 only

  double max_abs() const;

  TensorValue& operator+=(const TensorValue& o);
  TensorValue& operator-=(const TensorValue& o);
  TensorValue& operator*=(double c);

  friend TensorValue operator+(TensorValue a, const TensorValue& b) { return a += b; }
  friend TensorValue operator-(TensorValue a, const TensorValue& b) { return a -= b; }
  friend TensorValue operator*(TensorValue a, double c) { return a *= c; }
  friend TensorValue operator*(double c, TensorValue a) { return a *= c; }
  friend TensorValue operator-(TensorValue a) { return a *= -1.0; }

 private:
  void require_compatible(const TensorValue& o) const;

  int dim_ = 0;
  std::vector<Var> variance_;
  std::vector<double> comp_;
  std::string frame_;
};

/// Contraction of slots (a,b) of one tensor; one slot must be upper, one lower.
TensorValue contract(const TensorValue& t, int slot_a, int slot_b);

/// Pairwise contraction: slot_s of s against slot_t of t (opposite variance).
/// Result carries s's remaining slots followed by t's.
TensorValue contract(const TensorValue& s, int slot_s, const TensorValue& t, int slot_t);

TensorValue outer(const TensorValue& a, const TensorValue& b);

TensorValue raise_index(const TensorValue& t, int slot, const TensorValue& g_inv);
TensorValue lower_index(const TensorValue& t, int slot, const TensorValue& g);

/// Inverse of a (0,2) metric by LU with partial pivoting; flags near-singularity
/// relative to the entry scale.
TensorValue metric_inverse(const TensorValue& g);

/// Kulkarni-Nomizu product of two symmetric (0,2) tensors:
/// (a ^ b)(x,y,z,w) = a(y,z)b(x,w) - a(x,z)b(y,w) + b(y,z)a(x,w) - b(x,z)a(y,w).
TensorValue kulkarni_nomizu(const TensorValue& a, const TensorValue& b);

/// Reorders slots: perm[k] gives the source slot for result slot k.
TensorValue permute(const TensorValue& t, const std::vector<int>& perm);

TensorValue symmetrize(const TensorValue& t, int a, int b);
TensorValue antisymmetrize(const TensorValue& t, int a, int b);

/// Contracts slot `slot` (must be lower) of t with the upper slot of the (1,1)
/// endomorphism `m`, keeping the slot order; i.e. plugs m(arg) into that argument.
TensorValue compose_slot(const TensorValue& t, int slot, const TensorValue& m);

/// Full evaluation t(v1,...,vk) on vectors given in the same frame.
double evaluate(const TensorValue& t, const std::vector<Eigen::VectorXd>& args);

double max_abs_diff(const TensorValue& a, const TensorValue& b);
bool near_equal(const TensorValue& a, const TensorValue& b, const Tol& tol);

/// Residual of the tensor identity lhs == rhs, scaled by the largest component
/// magnitude of either side (floored at 1).
double identity_residual(const TensorValue& lhs, const TensorValue& rhs);

}  // namespace psl
