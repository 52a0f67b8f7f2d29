#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace mfhj {

struct UniformGrid {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t n = 2;

  UniformGrid() = default;
  UniformGrid(double lo, double hi, std::size_t n);

  double spacing() const { return (hi - lo) / static_cast<double>(n - 1); }
  // Endpoints are exact; a grid on [-a, a] is mirror-symmetric and contains 0
  // exactly when n is odd.
  double x(std::size_t i) const;
};

// Sampled function on a uniform grid. Nodes outside the effective domain
// carry an explicit +inf flag; infinite nodes may only form a prefix and/or a
// suffix.
class GridFunction {
 public:
  GridFunction(UniformGrid grid, std::vector<double> values, std::vector<std::uint8_t> finite);
  // All nodes finite.
  GridFunction(UniformGrid grid, std::vector<double> values);

  static GridFunction sample(UniformGrid grid, const std::function<double(double)>& f);

  const UniformGrid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double x(std::size_t i) const { return grid_.x(i); }
  bool is_finite(std::size_t i) const { return finite_[i] != 0; }
  // Only meaningful where is_finite(i).
  double raw(std::size_t i) const { return values_[i]; }
  std::optional<double> value(std::size_t i) const;
  const std::vector<double>& raw_values() const { return values_; }

  // Indices [first, last] of the finite block; throws if none.
  std::size_t first_finite() const { return first_; }
  std::size_t last_finite() const { return last_; }
  bool all_finite() const { return first_ == 0 && last_ + 1 == values_.size(); }

  // Linear interpolation; nullopt outside [lo, hi] or when a bracketing node
  // is infinite.
  std::optional<double> interpolate(double x) const;
  // Linear interpolation with linear extrapolation beyond the ends (all finite only).
  double interpolate_extrapolate(double x) const;

  // Largest absolute slope between neighbouring finite nodes.
  double lipschitz() const;

 private:
  UniformGrid grid_;
  std::vector<double> values_;
  std::vector<std::uint8_t> finite_;
  std::size_t first_ = 0;
  std::size_t last_ = 0;
};

}  // namespace mfhj
