#include "mfhj/prior.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "mfhj/error.hpp"

namespace mfhj {

Prior Prior::atomic(std::vector<Atom> atoms, std::string name) {
  require(!atoms.empty(), "atomic prior needs at least one atom");
  double total = 0.0;
  for (const Atom& a : atoms) {
    require(std::isfinite(a.value), "atomic prior: support values must be finite");
    require(a.weight > 0.0, "atomic prior: weights must be strictly positive");
    total += a.weight;
  }
  require(std::abs(total - 1.0) <= 1e-12, "atomic prior: weights must sum to 1 within 1e-12");
  return Prior(Kind::atomic, std::move(atoms), std::move(name));
}

Prior Prior::gaussian() { return Prior(Kind::gaussian, {}, "gaussian"); }

Prior Prior::uniform_pm1() { return atomic({{-1.0, 0.5}, {1.0, 0.5}}, "uniform_pm1"); }

Prior Prior::rademacher() { return atomic({{-1.0, 0.5}, {1.0, 0.5}}, "rademacher"); }

Prior Prior::bernoulli_pm1(double p) {
  require(p > 0.0 && p < 1.0, "bernoulli(p) requires p in (0,1)");
  return atomic({{-1.0, 1.0 - p}, {1.0, p}}, "bernoulli(" + std::to_string(p) + ")");
}

Prior Prior::sparse(double p) {
  require(p > 0.0 && p < 1.0, "sparse(p) requires p in (0,1)");
  const double s = 1.0 / std::sqrt(p);
  return atomic({{-s, p / 2.0}, {0.0, 1.0 - p}, {s, p / 2.0}},
                "sparse(" + std::to_string(p) + ")");
}

namespace {

double parse_argument(std::string_view spec, std::string_view head) {
  // spec looks like head(value)
  if (spec.size() < head.size() + 3 || spec.back() != ')' || spec[head.size()] != '(')
    throw ValidationError("malformed prior spec '" + std::string(spec) + "'");
  std::string_view inner = spec.substr(head.size() + 1, spec.size() - head.size() - 2);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(inner.data(), inner.data() + inner.size(), value);
  if (ec != std::errc() || ptr != inner.data() + inner.size())
    throw ValidationError("malformed prior parameter in '" + std::string(spec) + "'");
  return value;
}

}  // namespace

Prior Prior::parse(std::string_view spec) {
  if (spec == "gaussian") return gaussian();
  if (spec == "rademacher") return rademacher();
  if (spec == "uniform_pm1") return uniform_pm1();
  if (spec.starts_with("bernoulli")) return bernoulli_pm1(parse_argument(spec, "bernoulli"));
  if (spec.starts_with("sparse")) return sparse(parse_argument(spec, "sparse"));
  throw ValidationError("unknown prior '" + std::string(spec) + "'");
}

double Prior::mean() const {
  if (kind_ == Kind::gaussian) return 0.0;
  double m = 0.0;
  for (const Atom& a : atoms_) m += a.weight * a.value;
  return m;
}

double Prior::second_moment() const {
  if (kind_ == Kind::gaussian) return 1.0;
  double m = 0.0;
  for (const Atom& a : atoms_) m += a.weight * a.value * a.value;
  return m;
}

double Prior::support_bound() const {
  if (kind_ == Kind::gaussian) return std::numeric_limits<double>::infinity();
  double a = 0.0;
  for (const Atom& atom : atoms_) a = std::max(a, atom.value * atom.value);
  return a;
}

}  // namespace mfhj
