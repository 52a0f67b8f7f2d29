#pragma once

#include <vector>

namespace mfhj {

class DistFn;

// Right-continuous step path q = sum_k q_k 1[zeta_k, zeta_{k+1}) on [0,1),
// with zeta_0 = 0 and zeta_{K+1} = 1 implicit.
class PiecewisePath {
 public:
  // Constant path q == level.
  explicit PiecewisePath(double level = 0.0);
  // zetas strictly increasing in (0,1); levels non-decreasing, >= 0,
  // levels.size() == zetas.size() + 1. Equal levels are permitted.
  PiecewisePath(std::vector<double> zetas, std::vector<double> levels);

  const std::vector<double>& zetas() const { return zetas_; }
  const std::vector<double>& levels() const { return levels_; }
  std::size_t num_breaks() const { return zetas_.size(); }

  // Breakpoint zeta_k for k = 0..K+1 including the implicit ends.
  double zeta(std::size_t k) const;
  double operator()(double u) const;
  double q1() const { return levels_.back(); }
  // Right-continuous inverse: zeta_k on [q_{k-1}, q_k) with q_{-1} = 0, and 1 at or past q_K.
  double inverse(double s) const;

  // Adjacent equal levels merged; the function q(u) is unchanged.
  PiecewisePath canonical() const;
  // int_0^1 q(u)^2 du
  double square_integral() const;

  // Requires levels in [0,1].
  DistFn to_distfn() const;

  bool operator==(const PiecewisePath&) const = default;

 private:
  std::vector<double> zetas_;
  std::vector<double> levels_;
};

// Right-continuous non-decreasing zeta on [0,1] with zeta(1) = 1, stored as
// atom locations a_0 < ... < a_K in [0,1] and the value of zeta at each atom
// (so jump k is value_k - value_{k-1}). Storing cumulative values keeps the
// round trip through PiecewisePath exact.
class DistFn {
 public:
  DistFn(std::vector<double> locations, std::vector<double> values);
  // From (location, jump) pairs; jumps positive, summing to 1 within 1e-12.
  static DistFn from_jumps(std::vector<double> locations, std::vector<double> jumps);

  const std::vector<double>& locations() const { return locations_; }
  const std::vector<double>& values() const { return values_; }
  double jump(std::size_t k) const { return values_[k] - (k == 0 ? 0.0 : values_[k - 1]); }

  double operator()(double s) const;
  // int_0^1 s zeta(s) ds, exact on the step function.
  double t_zeta_integral() const;

  PiecewisePath to_path() const;

 private:
  std::vector<double> locations_;
  std::vector<double> values_;
};

// Exact int_0^1 |q(u) - q2(u)| du over the merged breakpoint partition.
double path_l1_distance(const PiecewisePath& q, const PiecewisePath& q2);

// Pointwise sum on the merged breakpoint partition.
PiecewisePath path_sum(const PiecewisePath& q, const PiecewisePath& q2);

}  // namespace mfhj
