#include "mfhj/convex_hj.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "mfhj/error.hpp"
#include "mfhj/numerics.hpp"

namespace mfhj {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double conjugate_with_lip(const GridFunction& f, double lip, double lambda, const RealFn& exact) {
  std::size_t best_i = f.first_finite();
  double best = lambda * f.x(best_i) - f.raw(best_i);
  for (std::size_t i = best_i + 1; i <= f.last_finite(); ++i) {
    const double v = lambda * f.x(i) - f.raw(i);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  const bool on_boundary = best_i == f.first_finite() || best_i == f.last_finite();
  if (on_boundary && std::abs(lambda) > lip + 1e-9 * std::max(1.0, lip)) return kInf;
  if (exact) {
    const double a = f.x(best_i == f.first_finite() ? best_i : best_i - 1);
    const double b = f.x(best_i == f.last_finite() ? best_i : best_i + 1);
    if (a < b) {
      auto neg = [&](double x) { return -(lambda * x - exact(x)); };
      const auto [xr, fr] = boost::math::tools::brent_find_minima(neg, a, b, 52);
      if (-fr > best) best = -fr;
    }
  }
  return best;
}

}  // namespace

void verify_convex(const GridFunction& f, const std::string& what) {
  double scale = 0.0;
  for (std::size_t i = f.first_finite(); i <= f.last_finite(); ++i) scale = std::max(scale, std::abs(f.raw(i)));
  scale = std::max(scale, 1.0);
  for (std::size_t i = f.first_finite() + 1; i < f.last_finite(); ++i) {
    const double d2 = f.raw(i - 1) - 2.0 * f.raw(i) + f.raw(i + 1);
    if (d2 < -1e-9 * scale) {
      std::ostringstream msg;
      msg << what << " is not convex: second difference " << d2 << " at node " << i << " (x = " << f.x(i)
          << ")";
      throw ValidationError(msg.str());
    }
  }
}

UniformGrid default_dual_grid(const GridFunction& f, std::size_t n) {
  const double lip = std::max(f.lipschitz(), 1e-6);
  return UniformGrid(-1.5 * lip, 1.5 * lip, n);
}

double conjugate_at(const GridFunction& f, double lambda, const RealFn& exact) {
  return conjugate_with_lip(f, f.lipschitz(), lambda, exact);
}

GridFunction legendre_dual(const GridFunction& f, const UniformGrid& dual_grid, const RealFn& exact) {
  const double lip = f.lipschitz();
  std::vector<double> values(dual_grid.n);
  std::vector<std::uint8_t> finite(dual_grid.n);
  for (std::size_t j = 0; j < dual_grid.n; ++j) {
    values[j] = conjugate_with_lip(f, lip, dual_grid.x(j), exact);
    finite[j] = std::isfinite(values[j]) ? 1 : 0;
  }
  return GridFunction(dual_grid, std::move(values), std::move(finite));
}

GridFunction legendre_dual(const GridFunction& f) { return legendre_dual(f, default_dual_grid(f)); }

double dual_grid_tolerance(const UniformGrid& primal, const UniformGrid& dual) {
  return primal.spacing() * dual.spacing();
}

HjProblem HjProblem::from_functions(RealFn psi, UniformGrid psi_grid, RealFn H, UniformGrid H_grid,
                                    bool H_convex, bool psi_convex) {
  return HjProblem{GridFunction::sample(psi_grid, psi), GridFunction::sample(H_grid, H), psi, H, H_convex,
                   psi_convex};
}

double HjProblem::eval_psi(double x) const {
  if (psi_exact) return psi_exact(x);
  const auto v = psi.interpolate(x);
  if (!v) throw ValidationError("query point outside the initial-condition grid");
  return *v;
}

double HjProblem::eval_H(double p) const {
  if (H_exact) return H_exact(p);
  return H.interpolate(p).value_or(kInf);
}

HopfLaxSolver::HopfLaxSolver(HjProblem prob, std::size_t dual_nodes)
    : prob_(std::move(prob)),
      h_star_([&] {
        require(prob_.H_convex, "Hopf-Lax formula requires a convex non-linearity H");
        verify_convex(prob_.H, "H");
        require(prob_.psi.all_finite(), "initial condition must be finite on its whole grid");
        return legendre_dual(prob_.H, default_dual_grid(prob_.H, dual_nodes), prob_.H_exact);
      }()),
      v_lo_(h_star_.x(h_star_.first_finite())),
      v_hi_(h_star_.x(h_star_.last_finite())) {}

double HopfLaxSolver::h_star_eval(double v) const { return h_star_.interpolate(v).value_or(kInf); }

double HopfLaxSolver::operator()(double t, double x) const {
  require(t >= 0.0, "time must be non-negative");
  if (t < 1e-12) return prob_.eval_psi(x);
  const UniformGrid& g = prob_.psi.grid();
  const double a = std::max(g.lo, x + t * v_lo_);
  const double b = std::min(g.hi, x + t * v_hi_);
  require(a < b, "query point has no admissible foot inside the initial-condition grid");
  const auto n = static_cast<std::size_t>((b - a) / g.spacing()) + 3;
  auto objective = [&](double y) {
    const double hs = h_star_eval((y - x) / t);
    if (!std::isfinite(hs)) return -kInf;
    return prob_.eval_psi(y) - t * hs;
  };
  return scan_maximize(objective, a, b, n).value;
}

HopfSolver::HopfSolver(HjProblem prob, std::size_t dual_nodes)
    : prob_(std::move(prob)),
      psi_star_([&] {
        require(prob_.psi_convex, "Hopf formula requires a convex initial condition");
        verify_convex(prob_.psi, "psi");
        require(prob_.psi.all_finite(), "initial condition must be finite on its whole grid");
        return legendre_dual(prob_.psi, default_dual_grid(prob_.psi, dual_nodes), prob_.psi_exact);
      }()),
      p_lim_(prob_.psi.lipschitz()) {}

double HopfSolver::psi_star_eval(double p) const { return psi_star_.interpolate(p).value_or(kInf); }

double HopfSolver::operator()(double t, double x) const {
  require(t >= 0.0, "time must be non-negative");
  const double a = -p_lim_;
  const double b = p_lim_;
  if (!(a < b)) return prob_.eval_psi(x);
  const auto n = static_cast<std::size_t>((b - a) / psi_star_.grid().spacing()) + 3;
  auto objective = [&](double p) {
    const double ps = psi_star_eval(p);
    const double hp = t == 0.0 ? 0.0 : prob_.eval_H(p);
    if (!std::isfinite(ps) || !std::isfinite(hp)) return -kInf;
    return p * x + t * hp - ps;
  };
  return scan_maximize(objective, a, b, n).value;
}

double hopf_lax(const HjProblem& prob, double t, double x) {
  require(t >= 0.0, "time must be non-negative");
  if (t < 1e-12) return prob.eval_psi(x);
  return HopfLaxSolver(prob)(t, x);
}

double hopf(const HjProblem& prob, double t, double x) { return HopfSolver(prob)(t, x); }

std::vector<CharacteristicPoint> characteristics(const HjProblem& prob, double t,
                                                 std::optional<UniformGrid> feet) {
  require(t >= 0.0, "time must be non-negative");
  const UniformGrid g = feet.value_or(prob.psi.grid());
  const double h = g.spacing();
  const double dp = prob.H.grid().spacing();
  std::vector<CharacteristicPoint> out;
  out.reserve(g.n);
  for (std::size_t i = 1; i + 1 < g.n; ++i) {
    const double y = g.x(i);
    const double p = (prob.eval_psi(y + h) - prob.eval_psi(y - h)) / (2.0 * h);
    const double hp = prob.eval_H(p);
    const double dh = (prob.eval_H(p + dp) - prob.eval_H(p - dp)) / (2.0 * dp);
    out.push_back({y, y - t * dh, prob.eval_psi(y) + t * (hp - dh * p)});
  }
  return out;
}

std::vector<double> wavefront_values_at(const std::vector<CharacteristicPoint>& front, double x) {
  std::vector<double> vals;
  for (std::size_t k = 0; k + 1 < front.size(); ++k) {
    const double x0 = front[k].arrival, x1 = front[k + 1].arrival;
    if ((x0 - x) * (x1 - x) > 0.0) continue;
    if (x0 == x1) {
      vals.push_back(front[k].value);
      continue;
    }
    const double w = (x - x0) / (x1 - x0);
    vals.push_back((1.0 - w) * front[k].value + w * front[k + 1].value);
  }
  return vals;
}

}  // namespace mfhj
