#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace psl {

/// Deterministic 64-bit generator (splitmix64). Used instead of <random> engines so the
/// double stream is identical across standard-library implementations, which keeps JSON
/// reports byte-identical for a fixed seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0,1) with 53 random bits.
  double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  /// Independent stream for sample point `index`; reproducible regardless of
  /// evaluation order.
  Rng split(std::uint64_t index) const {
    Rng child(state_ ^ (0x6a09e667f3bcc909ull * (index + 1)));
    child.next_u64();
    return child;
  }

  /// Random vector with components in [-1,1].
  Eigen::VectorXd box_vector(int dim) {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = uniform(-1.0, 1.0);
    return v;
  }

  /// Random vector normalized to Euclidean unit length.
  Eigen::VectorXd unit_vector(int dim) {
    for (;;) {
      Eigen::VectorXd v = box_vector(dim);
      const double n = v.norm();
      if (n > 0.1) return v / n;
    }
  }

 private:
  std::uint64_t state_;
};

struct SampleBox {
  Eigen::VectorXd lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }

  Eigen::VectorXd sample(Rng& rng) const {
    Eigen::VectorXd p(lo.size());
    for (int i = 0; i < lo.size(); ++i) p[i] = rng.uniform(lo[i], hi[i]);
    return p;
  }

  static SampleBox cube(int dim, double lo, double hi) {
    SampleBox b;
    b.lo = Eigen::VectorXd::Constant(dim, lo);
    b.hi = Eigen::VectorXd::Constant(dim, hi);
    return b;
  }
};

/// k points from the box, each drawn from its own split stream.
inline std::vector<Eigen::VectorXd> sample_points(const SampleBox& box, int k, const Rng& rng) {
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(k);
  for (int i = 0; i < k; ++i) {
    Rng r = rng.split(i);
    pts.push_back(box.sample(r));
  }
  return pts;
}

/// Unit vectors rejecting near-parallel pairs (|cos| > 0.99) so identity residuals
/// are well conditioned.
inline std::vector<Eigen::VectorXd> sample_quadruple(int dim, Rng& rng) {
  std::vector<Eigen::VectorXd> q;
  while (q.size() < 4) {
    Eigen::VectorXd v = rng.unit_vector(dim);
    bool ok = true;
    for (const auto& u : q)
      if (std::abs(u.dot(v)) > 0.99) ok = false;
    if (ok) q.push_back(v);
  }
  return q;
}

}  // namespace psl
