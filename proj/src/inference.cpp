#include "mfhj/inference.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <limits>

#include "mfhj/error.hpp"
#include "mfhj/numerics.hpp"

namespace mfhj {

ScalarChannel::ScalarChannel(const InferenceProblem& prob)
    : prior_(prob.prior), gh_(gauss_hermite_nodes(prob.quad_nodes)) {
  for (const Atom& a : prior_.atoms()) log_w_.push_back(std::log(a.weight));
}

double ScalarChannel::psi(double h) const {
  require(h >= 0.0, "psi is defined for h >= 0");
  if (h == 0.0) return 0.0;
  const double s = std::sqrt(2.0 * h);
  double total = 0.0;
  if (!prior_.is_atomic()) {
    // log int exp(a x - h x^2) dN(x) = a^2 / (2(1+2h)) - log(1+2h)/2 is
    // quadratic in a = sqrt(2h) z + 2h xbar, and E a^2 = 2h + 4h^2.
    return h - 0.5 * std::log1p(2.0 * h);
  }
  const auto& atoms = prior_.atoms();
  std::vector<double> expo(atoms.size());
  for (const Atom& xb : atoms) {
    double inner = 0.0;
    for (const QuadNode& z : gh_) {
      for (std::size_t k = 0; k < atoms.size(); ++k) {
        const double x = atoms[k].value;
        expo[k] = log_w_[k] + s * x * z.x + 2.0 * h * x * xb.value - h * x * x;
      }
      inner += z.w * log_sum_exp(expo);
    }
    total += xb.weight * inner;
  }
  return total;
}

double ScalarChannel::psi_derivative(double h) const {
  require(h > 0.0, "psi derivative is evaluated at h > 0");
  const double s = std::sqrt(2.0 * h);
  if (!prior_.is_atomic()) {
    return 2.0 * h / (1.0 + 2.0 * h);
  }
  // d/dh of the exponent is x z / sqrt(2h) + 2 x xbar - x^2, averaged under
  // the posterior weights at each (xbar, z).
  const auto& atoms = prior_.atoms();
  std::vector<double> expo(atoms.size());
  double total = 0.0;
  for (const Atom& xb : atoms) {
    double inner = 0.0;
    for (const QuadNode& z : gh_) {
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < atoms.size(); ++k) {
        const double x = atoms[k].value;
        expo[k] = log_w_[k] + s * x * z.x + 2.0 * h * x * xb.value - h * x * x;
        mx = std::max(mx, expo[k]);
      }
      double num = 0.0, den = 0.0;
      for (std::size_t k = 0; k < atoms.size(); ++k) {
        const double x = atoms[k].value;
        const double e = std::exp(expo[k] - mx);
        den += e;
        num += e * (x * z.x / s + 2.0 * x * xb.value - x * x);
      }
      inner += z.w * num / den;
    }
    total += xb.weight * inner;
  }
  return total;
}

double psi_initial(const InferenceProblem& prob, double h) { return ScalarChannel(prob).psi(h); }

PenalizedSup penalized_sup(const ScalarChannel& ch, double h, double penalty_denominator, double h_max,
                           std::size_t nodes) {
  auto objective = [&](double hp) { return ch.psi(h + hp) - hp * hp / penalty_denominator; };
  const ScanResult r = scan_maximize(objective, 0.0, h_max, nodes, false);
  PenalizedSup best{r.value, r.x};
  // Polish on the first-order condition psi'(h + h') = 2h' / penalty_denominator
  // inside the neighbouring cells; a flat sup only pins h' to ~sqrt(eps).
  const double dx = h_max / static_cast<double>(nodes - 1);
  auto slope = [&](double hp) { return ch.psi_derivative(h + hp) - 2.0 * hp / penalty_denominator; };
  const double a = std::max(0.0, r.x - dx);
  const double b = std::min(h_max, r.x + dx);
  if (h + a <= 0.0) {
    // psi' at 0 is the limit from the right; a positive slope there means
    // the maximizer is interior.
    if (!(slope(std::min(b, 1e-12 * std::max(1.0, h_max))) > 0.0)) return best;
  }
  const double lo = h + a > 0.0 ? a : std::min(b, 1e-12 * std::max(1.0, h_max));
  const double s_lo = slope(lo), s_hi = slope(b);
  if (!(s_lo > 0.0 && s_hi < 0.0)) return best;
  std::uintmax_t max_iter = 200;
  const auto root = boost::math::tools::toms748_solve(slope, lo, b, s_lo, s_hi,
                                                      boost::math::tools::eps_tolerance<double>(52), max_iter);
  const double x = 0.5 * (root.first + root.second);
  const double v = objective(x);
  // Same acceptance rule as scan_maximize: a node maximizer (h' = 0) is kept
  // unless the polished point beats it by more than rounding.
  if (v > best.value + 1e-15 * std::max(1.0, std::abs(best.value))) best = {v, x};
  return best;
}

PenalizedSup limit_free_energy_inf(const ScalarChannel& ch, double t, double h) {
  require(t >= 0.0, "t must be non-negative");
  require(h >= 0.0, "h must be non-negative");
  if (t == 0.0) return {ch.psi(h), 0.0};
  // psi is Lipschitz with constant E xbar^2, so the quadratic penalty wins
  // beyond 4t E xbar^2.
  const double h_max = 4.0 * t * ch.prior().second_moment() + 1.0;
  return penalized_sup(ch, h, 4.0 * t, h_max);
}

PenalizedSup limit_free_energy_inf(const InferenceProblem& prob, double t, double h) {
  return limit_free_energy_inf(ScalarChannel(prob), t, h);
}

double mmse(const ScalarChannel& ch, double t) {
  require(t > 0.0, "mmse requires t > 0");
  const double m2 = ch.prior().second_moment();
  const double hs = limit_free_energy_inf(ch, t, 0.0).h_star;
  return m2 * m2 - hs * hs / (4.0 * t * t);
}

double mmse(const InferenceProblem& prob, double t) { return mmse(ScalarChannel(prob), t); }

double mutual_information(const ScalarChannel& ch, double t) {
  require(t >= 0.0, "t must be non-negative");
  if (t == 0.0) return 0.0;
  const double m2 = ch.prior().second_moment();
  return t * m2 * m2 - limit_free_energy_inf(ch, t, 0.0).value;
}

double mutual_information(const InferenceProblem& prob, double t) {
  return mutual_information(ScalarChannel(prob), t);
}

double pca_mse(double t) {
  require(t >= 0.0, "t must be non-negative");
  if (t <= 0.25) return 1.0;
  const double r = 1.0 / (4.0 * t);
  return r * (2.0 - r);
}

double critical_snr(const InferenceProblem& prob) {
  const ScalarChannel ch(prob);
  auto ordered = [&](double t) { return limit_free_energy_inf(ch, t, 0.0).value > 1e-9; };
  double lo = 1e-3, hi = 1e3;
  if (!ordered(hi)) throw NumericalError("no transition detected");
  if (ordered(lo)) return lo;
  while (hi - lo > 1e-4) {
    const double mid = 0.5 * (lo + hi);
    (ordered(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double sbm_mutual_information(const SbmParams& sbm, std::size_t quad_nodes) {
  require(sbm.p > 0.0 && sbm.p < 1.0, "SBM requires p in (0,1)");
  require(sbm.lambda >= 0.0, "SBM requires lambda >= 0");
  if (sbm.lambda == 0.0) return 0.0;
  const ScalarChannel ch(InferenceProblem{Prior::bernoulli_pm1(sbm.p), quad_nodes});
  const double sup = penalized_sup(ch, 0.0, sbm.lambda, sbm.lambda + 1.0).value;
  return sbm.lambda / 4.0 - sup;
}

}  // namespace mfhj
