#include "mfhj/path.hpp"

#include <algorithm>
#include <cmath>

#include "mfhj/error.hpp"

namespace mfhj {

PiecewisePath::PiecewisePath(double level) : levels_{level} {
  require(std::isfinite(level) && level >= 0.0, "path levels must be finite and >= 0");
}

PiecewisePath::PiecewisePath(std::vector<double> zetas, std::vector<double> levels)
    : zetas_(std::move(zetas)), levels_(std::move(levels)) {
  require(levels_.size() == zetas_.size() + 1, "path needs exactly one more level than breakpoints");
  for (std::size_t k = 0; k < zetas_.size(); ++k) {
    require(zetas_[k] > 0.0 && zetas_[k] < 1.0, "path breakpoints must lie in (0,1)");
    if (k > 0) require(zetas_[k] > zetas_[k - 1], "path breakpoints must be strictly increasing");
  }
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    require(std::isfinite(levels_[k]) && levels_[k] >= 0.0, "path levels must be finite and >= 0");
    if (k > 0) require(levels_[k] >= levels_[k - 1], "path levels must be non-decreasing");
  }
}

double PiecewisePath::zeta(std::size_t k) const {
  if (k == 0) return 0.0;
  if (k > zetas_.size()) return 1.0;
  return zetas_[k - 1];
}

double PiecewisePath::operator()(double u) const {
  const auto it = std::upper_bound(zetas_.begin(), zetas_.end(), u);
  return levels_[static_cast<std::size_t>(it - zetas_.begin())];
}

double PiecewisePath::inverse(double s) const {
  for (std::size_t k = 0; k < levels_.size(); ++k)
    if (s < levels_[k]) return zeta(k);
  return 1.0;
}

PiecewisePath PiecewisePath::canonical() const {
  std::vector<double> z;
  std::vector<double> l{levels_[0]};
  for (std::size_t k = 0; k < zetas_.size(); ++k) {
    if (levels_[k + 1] == l.back()) continue;
    z.push_back(zetas_[k]);
    l.push_back(levels_[k + 1]);
  }
  return PiecewisePath(std::move(z), std::move(l));
}

double PiecewisePath::square_integral() const {
  double s = 0.0;
  for (std::size_t k = 0; k < levels_.size(); ++k)
    s += levels_[k] * levels_[k] * (zeta(k + 1) - zeta(k));
  return s;
}

DistFn PiecewisePath::to_distfn() const {
  const PiecewisePath c = canonical();
  require(c.q1() <= 1.0, "distribution function needs path levels in [0,1]");
  std::vector<double> values(c.levels_.size());
  for (std::size_t k = 0; k < values.size(); ++k) values[k] = c.zeta(k + 1);
  return DistFn(c.levels_, std::move(values));
}

DistFn::DistFn(std::vector<double> locations, std::vector<double> values)
    : locations_(std::move(locations)), values_(std::move(values)) {
  require(!locations_.empty() && locations_.size() == values_.size(),
          "distribution function needs matching non-empty locations and values");
  for (std::size_t k = 0; k < locations_.size(); ++k) {
    require(locations_[k] >= 0.0 && locations_[k] <= 1.0, "atom locations must lie in [0,1]");
    require(values_[k] > (k == 0 ? 0.0 : values_[k - 1]), "distribution jumps must be positive");
    if (k > 0) require(locations_[k] > locations_[k - 1], "atom locations must be strictly increasing");
  }
  require(values_.back() == 1.0, "distribution function must reach 1");
}

DistFn DistFn::from_jumps(std::vector<double> locations, std::vector<double> jumps) {
  require(locations.size() == jumps.size() && !jumps.empty(), "need one jump per atom location");
  std::vector<std::size_t> order(locations.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return locations[a] < locations[b]; });
  double total = 0.0;
  for (double j : jumps) {
    require(j > 0.0, "distribution jumps must be positive");
    total += j;
  }
  require(std::abs(total - 1.0) <= 1e-12, "distribution jumps must sum to 1 within 1e-12");
  std::vector<double> locs;
  std::vector<double> vals;
  double acc = 0.0;
  for (std::size_t i : order) {
    acc += jumps[i];
    if (!locs.empty() && locs.back() == locations[i]) {
      vals.back() = acc;
    } else {
      locs.push_back(locations[i]);
      vals.push_back(acc);
    }
  }
  vals.back() = 1.0;
  return DistFn(std::move(locs), std::move(vals));
}

double DistFn::operator()(double s) const {
  const auto it = std::upper_bound(locations_.begin(), locations_.end(), s);
  if (it == locations_.begin()) return 0.0;
  return values_[static_cast<std::size_t>(it - locations_.begin()) - 1];
}

double DistFn::t_zeta_integral() const {
  double s = 0.0;
  for (std::size_t k = 0; k < locations_.size(); ++k)
    s += jump(k) * 0.5 * (1.0 - locations_[k] * locations_[k]);
  return s;
}

PiecewisePath DistFn::to_path() const {
  std::vector<double> zetas(values_.begin(), values_.end() - 1);
  return PiecewisePath(std::move(zetas), locations_);
}

namespace {

std::vector<double> merged_cuts(const PiecewisePath& q, const PiecewisePath& q2) {
  std::vector<double> cuts{0.0, 1.0};
  cuts.insert(cuts.end(), q.zetas().begin(), q.zetas().end());
  cuts.insert(cuts.end(), q2.zetas().begin(), q2.zetas().end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

}  // namespace

PiecewisePath path_sum(const PiecewisePath& q, const PiecewisePath& q2) {
  const std::vector<double> cuts = merged_cuts(q, q2);
  std::vector<double> levels;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) levels.push_back(q(cuts[i]) + q2(cuts[i]));
  return PiecewisePath(std::vector<double>(cuts.begin() + 1, cuts.end() - 1), std::move(levels));
}

double path_l1_distance(const PiecewisePath& q, const PiecewisePath& q2) {
  const std::vector<double> cuts = merged_cuts(q, q2);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double u = cuts[i];
    total += std::abs(q(u) - q2(u)) * (cuts[i + 1] - cuts[i]);
  }
  return total;
}

}  // namespace mfhj
