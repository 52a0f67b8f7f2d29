#include "mfhj/grid.hpp"

#include <cmath>
#include <limits>

#include "mfhj/error.hpp"

namespace mfhj {

UniformGrid::UniformGrid(double lo_, double hi_, std::size_t n_) : lo(lo_), hi(hi_), n(n_) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "grid requires finite lo < hi");
  require(n >= 2, "grid requires at least 2 nodes");
}

double UniformGrid::x(std::size_t i) const {
  // Weighted form: mirror-symmetric when lo == -hi and exact at "round"
  // interior nodes such as +-1 on [-1.5, 1.5]. The ends are returned as given.
  if (i == 0) return lo;
  if (i + 1 == n) return hi;
  const double a = static_cast<double>(n - 1 - i);
  const double b = static_cast<double>(i);
  return (lo * a + hi * b) / static_cast<double>(n - 1);
}

GridFunction::GridFunction(UniformGrid grid, std::vector<double> values,
                           std::vector<std::uint8_t> finite)
    : grid_(grid), values_(std::move(values)), finite_(std::move(finite)) {
  require(values_.size() == grid_.n && finite_.size() == grid_.n,
          "grid function size does not match grid");
  std::size_t i = 0;
  while (i < finite_.size() && !finite_[i]) ++i;
  require(i < finite_.size(), "grid function has no finite node");
  first_ = i;
  while (i < finite_.size() && finite_[i]) ++i;
  last_ = i - 1;
  for (; i < finite_.size(); ++i)
    require(!finite_[i], "infinite nodes must form a prefix or suffix of the grid");
  for (std::size_t j = first_; j <= last_; ++j)
    require(std::isfinite(values_[j]), "finite-flagged node holds a non-finite value");
  for (std::size_t j = 0; j < values_.size(); ++j)
    if (!finite_[j]) values_[j] = std::numeric_limits<double>::infinity();
}

GridFunction::GridFunction(UniformGrid grid, std::vector<double> values)
    : GridFunction(grid, values, std::vector<std::uint8_t>(values.size(), 1)) {}

GridFunction GridFunction::sample(UniformGrid grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) v[i] = f(grid.x(i));
  return GridFunction(grid, std::move(v));
}

std::optional<double> GridFunction::value(std::size_t i) const {
  if (!finite_[i]) return std::nullopt;
  return values_[i];
}

std::optional<double> GridFunction::interpolate(double x) const {
  if (!(x >= grid_.lo && x <= grid_.hi)) return std::nullopt;
  const double pos = (x - grid_.lo) / grid_.spacing();
  std::size_t i = static_cast<std::size_t>(pos);
  if (i >= grid_.n - 1) i = grid_.n - 2;
  const double w = pos - static_cast<double>(i);
  if (w == 0.0) return value(i);
  if (w == 1.0) return value(i + 1);
  if (!finite_[i] || !finite_[i + 1]) return std::nullopt;
  return (1.0 - w) * values_[i] + w * values_[i + 1];
}

double GridFunction::interpolate_extrapolate(double x) const {
  const double pos = (x - grid_.lo) / grid_.spacing();
  long long i = static_cast<long long>(std::floor(pos));
  const long long last = static_cast<long long>(grid_.n) - 2;
  if (i < 0) i = 0;
  if (i > last) i = last;
  const double w = pos - static_cast<double>(i);
  const auto k = static_cast<std::size_t>(i);
  return (1.0 - w) * values_[k] + w * values_[k + 1];
}

double GridFunction::lipschitz() const {
  double lip = 0.0;
  const double h = grid_.spacing();
  for (std::size_t i = first_; i < last_; ++i)
    lip = std::max(lip, std::abs(values_[i + 1] - values_[i]) / h);
  return lip;
}

}  // namespace mfhj
