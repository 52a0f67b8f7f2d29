#include "mfhj/parisi.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "mfhj/error.hpp"
#include "mfhj/numerics.hpp"
#include "mfhj/quadrature.hpp"
#include "mfhj/rng.hpp"

namespace mfhj {

double single_spin_phi(const Prior& prior, double t, double x) {
  require(prior.is_atomic(), "single-spin phi needs an atomic prior");
  require(t >= 0.0, "single-spin phi needs t >= 0");
  const auto& atoms = prior.atoms();
  std::vector<double> e(atoms.size()), w(atoms.size());
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const double s = atoms[k].value;
    e[k] = x * s - t * s * s;
    w[k] = atoms[k].weight;
  }
  return log_sum_exp_weighted(e, w);
}

namespace {

// Asymptotic slopes of the solution: far to the right the Gibbs measure of
// one spin sits on its largest atom, far to the left on its smallest.
struct Tails {
  double left;
  double right;
};

// Continuation past a grid end at distance d: the slope relaxes
// exponentially from its edge value toward the asymptotic one, at the rate
// that matches the edge curvature. A straight asymptotic line would put a
// kink of size `gap` at the edge, which a thin slab turns into a curvature
// spike of order gap / h.
double relaxed_tail(double edge_value, double edge_slope, double edge_curv, double asym_slope, double d) {
  const double gap = asym_slope - edge_slope;
  if (gap <= 0.0) return edge_value + asym_slope * d;
  const double kappa = std::max(edge_curv, 0.0) / gap;
  const double lag = kappa > 0.0 ? -std::expm1(-kappa * d) / kappa : d;
  return edge_value + asym_slope * d - gap * lag;
}

// Linear interpolation inside the grid, relaxed tails outside. The
// continuation is convex with slopes between the edge slope and the
// asymptotic one, so it keeps the convexity and Lipschitz bounds.
double lerp_grid(const UniformGrid& g, const std::vector<double>& v, double x, Tails tails) {
  const double h = g.spacing();
  const std::size_t n = v.size();
  if (x <= g.lo) {
    const double slope = (v[0] - v[1]) / h;  // in the direction of decreasing x
    const double curv = (v[0] - 2.0 * v[1] + v[2]) / (h * h);
    return relaxed_tail(v[0], slope, curv, -tails.left, g.lo - x);
  }
  if (x >= g.hi) {
    const double slope = (v[n - 1] - v[n - 2]) / h;
    const double curv = (v[n - 1] - 2.0 * v[n - 2] + v[n - 3]) / (h * h);
    return relaxed_tail(v[n - 1], slope, curv, tails.right, x - g.hi);
  }
  const double pos = (x - g.lo) / h;
  const auto j = std::min(static_cast<std::size_t>(pos), n - 2);
  const double f = pos - static_cast<double>(j);
  return v[j] + f * (v[j + 1] - v[j]);
}

// One backward slab: W(x) = zeta^{-1} log E exp(zeta V(x + sqrt(var) Z)), or
// E V(x + sqrt(var) Z) when zeta = 0. With `even`, V is even and only x >= 0
// is computed (the grid is mirror-symmetric).
std::vector<double> slab_step(const UniformGrid& g, const std::function<double(double)>& prev, double var,
                              double zeta, const std::vector<QuadNode>& gh, bool even) {
  const double s = std::sqrt(var);
  double wsum = 0.0;
  std::vector<double> logw(gh.size());
  for (const QuadNode& q : gh) wsum += q.w;
  for (std::size_t j = 0; j < gh.size(); ++j) logw[j] = std::log(gh[j].w / wsum);
  std::vector<double> out(g.n);
  std::vector<double> vals(gh.size());
  const std::size_t first = even ? g.n / 2 : 0;
  for (std::size_t i = first; i < g.n; ++i) {
    const double x = g.x(i);
    double mean = 0.0, lo = INFINITY, hi = -INFINITY;
    for (std::size_t j = 0; j < gh.size(); ++j) {
      vals[j] = prev(x + s * gh[j].x);
      mean += gh[j].w * vals[j];
      lo = std::min(lo, vals[j]);
      hi = std::max(hi, vals[j]);
    }
    mean /= wsum;
    if (zeta * (hi - lo) < 1.0) {
      // mean + zeta^{-1} log1p(E expm1(zeta (V - mean))): accurate as zeta -> 0,
      // where it tends to the heat-slab value E V.
      if (zeta == 0.0) {
        out[i] = mean;
        continue;
      }
      double acc = 0.0;
      for (std::size_t j = 0; j < gh.size(); ++j) acc += gh[j].w * std::expm1(zeta * (vals[j] - mean));
      out[i] = mean + std::log1p(acc / wsum) / zeta;
    } else {
      // zeta is not small here, so the weighted log-sum-exp is well conditioned.
      double m = -INFINITY;
      for (std::size_t j = 0; j < gh.size(); ++j) m = std::max(m, zeta * vals[j] + logw[j]);
      double acc = 0.0;
      for (std::size_t j = 0; j < gh.size(); ++j) acc += std::exp(zeta * vals[j] + logw[j] - m);
      out[i] = (m + std::log(acc)) / zeta;
    }
  }
  if (even)
    for (std::size_t i = 0; i < first; ++i) out[i] = out[g.n - 1 - i];
  return out;
}

void check_derivative_bounds(const UniformGrid& g, const std::vector<double>& v, double lip) {
  const double h = g.spacing();
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double d1 = (v[i + 1] - v[i]) / h;
    if (std::abs(d1) > lip + 1e-6)
      throw NumericalError("Parisi solution slope " + std::to_string(d1) + " exceeds the bound at x = " +
                           std::to_string(g.x(i)));
    if (i == 0) continue;
    const double d2 = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
    if (d2 < -1e-6 || d2 > lip * lip + 1e-6)
      throw NumericalError("Parisi solution curvature " + std::to_string(d2) + " out of range at x = " +
                           std::to_string(g.x(i)));
  }
}

// Backward solve over slabs [times[i], times[i+1]) with weights[i] and
// increment variance 2 * scale * duration, from a closed-form terminal.
ParisiGrid solve_slabs(const UniformGrid& g, const std::function<double(double)>& terminal,
                       const std::vector<double>& times, const std::vector<double>& weights, double scale,
                       std::size_t gh_nodes, double lip, Tails tails, bool even) {
  ParisiGrid out;
  out.grid = g;
  out.times = times;
  out.values.resize(times.size());
  const auto gh = gauss_hermite_nodes(gh_nodes);
  std::vector<double> term(g.n);
  for (std::size_t i = 0; i < g.n; ++i) term[i] = terminal(g.x(i));
  check_derivative_bounds(g, term, lip);
  out.values.back() = term;
  bool exact_prev = true;  // the slab above still has its closed form
  for (std::size_t k = times.size() - 1; k-- > 0;) {
    const double var = 2.0 * scale * (times[k + 1] - times[k]);
    if (var <= 0.0) {
      out.values[k] = out.values[k + 1];
      continue;
    }
    const std::vector<double>& above = out.values[k + 1];
    std::function<double(double)> prev;
    if (exact_prev)
      prev = terminal;
    else
      prev = [&](double x) { return lerp_grid(g, above, x, tails); };
    out.values[k] = slab_step(g, prev, var, weights[k], gh, even);
    check_derivative_bounds(g, out.values[k], lip);
    exact_prev = false;
  }
  out.tails_left = tails.left;
  out.tails_right = tails.right;
  out.phi00 = times.size() == 1 ? terminal(0.0) : lerp_grid(g, out.values[0], 0.0, tails);
  return out;
}

UniformGrid parisi_grid(const ParisiGridSpec& spec, double total_var) {
  require(spec.n_x >= 3 && spec.n_x % 2 == 1, "Parisi grid needs an odd node count >= 3");
  require(spec.gh_nodes >= 1, "Parisi grid needs Gauss-Hermite nodes");
  require(spec.x_max_query >= 0.0, "x_max_query must be >= 0");
  const double needed = spec.x_max_query + 4.0 * std::sqrt(total_var);
  double half = spec.half_width;
  if (half == 0.0)
    half = std::max(needed, 1.0);
  else
    require(half >= needed, "Parisi grid half-width " + std::to_string(half) + " is narrower than x_max_query + " +
                                "4 sqrt(2 q(1)) = " + std::to_string(needed));
  return UniformGrid(-half, half, spec.n_x);
}

}  // namespace

double ParisiGrid::at(std::size_t i, double x) const {
  return lerp_grid(grid, values.at(i), x, {tails_left, tails_right});
}

ParisiGrid parisi_pde_solve(const PiecewisePath& q_in, const Prior& prior, const ParisiGridSpec& spec) {
  require(prior.is_atomic(), "Parisi PDE needs an atomic prior");
  const PiecewisePath q = q_in.canonical();
  const double q1 = q.q1();
  const UniformGrid g = parisi_grid(spec, 2.0 * q1);
  // q^{-1} = 0 on [0, q_0) and zeta_{k+1} on [q_k, q_{k+1}).
  std::vector<double> times{0.0};
  std::vector<double> weights;
  const auto& lv = q.levels();
  if (lv[0] > 0.0) {
    times.push_back(lv[0]);
    weights.push_back(0.0);
  }
  for (std::size_t k = 0; k + 1 < lv.size(); ++k) {
    times.push_back(lv[k + 1]);
    weights.push_back(q.zetas()[k]);
  }
  const double lip = prior.support_bound();
  double lo = INFINITY, hi = -INFINITY;
  for (const Atom& a : prior.atoms()) {
    lo = std::min(lo, a.value);
    hi = std::max(hi, a.value);
  }
  // A prior symmetric under sigma -> -sigma gives an even solution.
  bool even = true;
  const auto& atoms = prior.atoms();
  for (const Atom& a : atoms)
    even = even && std::any_of(atoms.begin(), atoms.end(),
                               [&](const Atom& b) { return b.value == -a.value && b.weight == a.weight; });
  auto terminal = [&](double x) { return single_spin_phi(prior, q1, x); };
  return solve_slabs(g, terminal, times, weights, 1.0, spec.gh_nodes, lip, {lo, hi}, even);
}

double psi_path(const PiecewisePath& q, const Prior& prior, const ParisiGridSpec& spec) {
  return -parisi_pde_solve(q, prior, spec).phi00;
}

namespace {

// Pool-adjacent-violators projection onto non-decreasing vectors, then
// clipped to [0, hi].
std::vector<double> monotone_projection(const std::vector<double>& v, double hi) {
  std::vector<double> val;
  std::vector<std::size_t> cnt;
  for (double x : v) {
    val.push_back(x);
    cnt.push_back(1);
    while (val.size() > 1 && val[val.size() - 2] > val.back()) {
      const std::size_t n = cnt.back() + cnt[cnt.size() - 2];
      const double m = (val.back() * cnt.back() + val[val.size() - 2] * cnt[cnt.size() - 2]) / n;
      val.pop_back();
      cnt.pop_back();
      val.back() = m;
      cnt.back() = n;
    }
  }
  std::vector<double> out;
  for (std::size_t b = 0; b < val.size(); ++b)
    for (std::size_t i = 0; i < cnt[b]; ++i) out.push_back(std::clamp(val[b], 0.0, hi));
  return out;
}

PiecewisePath uniform_step_path(const std::vector<double>& levels) {
  const std::size_t K = levels.size() - 1;
  std::vector<double> z;
  for (std::size_t k = 1; k <= K; ++k) z.push_back(static_cast<double>(k) / static_cast<double>(K + 1));
  return PiecewisePath(std::move(z), levels);
}

double maximize_1d(const std::function<double(double)>& f, double lo, double hi) {
  auto neg = [&](double x) { return -f(x); };
  std::uintmax_t it = 100;
  const auto r = boost::math::tools::brent_find_minima(neg, lo, hi, 20, it);
  return r.first;
}

}  // namespace

HopfLaxPathResult hopf_lax_path(double t, const PiecewisePath& q, std::size_t K, const Prior& prior,
                                const ParisiGridSpec& spec) {
  require(t >= 0.0, "hopf_lax_path needs t >= 0");
  if (t == 0.0) return {psi_path(q, prior, spec), PiecewisePath(0.0)};
  const double s2 = prior.support_bound() * prior.support_bound();
  // psi moves by at most s2 / (K+1) per unit change of one level while the
  // penalty grows like 2 v / (4t (K+1)), so optimal levels lie in [0, 2 t s2].
  const double hi = 2.0 * t * s2;
  const double pen = 1.0 / (4.0 * t * static_cast<double>(K + 1));
  auto objective = [&](const std::vector<double>& v) {
    double sq = 0.0;
    for (double x : v) sq += x * x;
    return psi_path(path_sum(q, uniform_step_path(v)), prior, spec) - pen * sq;
  };

  RngStream rng(42, "hopf-lax-path-starts");
  std::vector<double> best_v(K + 1, 0.0);
  double best = objective(best_v);
  for (std::size_t start = 0; start < 8; ++start) {
    std::vector<double> v(K + 1, 0.0);
    if (start > 0) {
      for (double& x : v) x = hi * rng.uniform() * 0.5;
      std::sort(v.begin(), v.end());
    }
    double cur = objective(v);
    for (int sweep = 0; sweep < 30; ++sweep) {
      const double before = cur;
      for (std::size_t k = 0; k <= K; ++k) {
        auto moved = [&](double s) {
          std::vector<double> w = v;
          w[k] = s;
          return monotone_projection(w, hi);
        };
        const double s = maximize_1d([&](double s) { return objective(moved(s)); }, 0.0, hi);
        const std::vector<double> w = moved(s);
        const double val = objective(w);
        if (val > cur) {
          cur = val;
          v = w;
        }
      }
      if (cur - before <= 1e-10) break;
    }
    if (cur > best) {
      best = cur;
      best_v = v;
    }
  }
  return {best, uniform_step_path(best_v).canonical()};
}

double parisi_phi(const DistFn& zeta, double beta, const ParisiGridSpec& spec) {
  require(beta >= 0.0, "beta must be >= 0");
  if (beta == 0.0) return 0.0;  // log cosh(0)
  const UniformGrid g = parisi_grid(spec, 2.0 * beta * beta);
  // zeta = 0 on [0, a_0), value_k on [a_k, a_{k+1}), 1 on [a_K, 1].
  const auto& a = zeta.locations();
  const auto& c = zeta.values();
  std::vector<double> times{0.0};
  std::vector<double> weights;
  if (a[0] > 0.0) {
    times.push_back(a[0]);
    weights.push_back(0.0);
  }
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double end = k + 1 < a.size() ? a[k + 1] : 1.0;
    if (end > times.back()) {
      times.push_back(end);
      weights.push_back(c[k]);
    }
  }
  if (times.back() < 1.0) {
    times.push_back(1.0);
    weights.push_back(1.0);
  }
  auto terminal = [](double x) {
    const double ax = std::abs(x);
    return ax + std::log1p(std::exp(-2.0 * ax)) - std::numbers::ln2;
  };
  return solve_slabs(g, terminal, times, weights, beta * beta, spec.gh_nodes, 1.0, {-1.0, 1.0}, true).phi00;
}

double parisi_functional(const DistFn& zeta, double beta, const ParisiGridSpec& spec) {
  return parisi_phi(zeta, beta, spec) - beta * beta * zeta.t_zeta_integral() + std::numbers::ln2;
}

namespace {

double softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }

// 2K+1 unconstrained parameters -> K+1 atoms: locations 1 - exp(-cumulative
// softplus) (non-decreasing in [0,1]) and softmax jumps with the first logit 0.
DistFn decode_zeta(const std::vector<double>& p, std::size_t K) {
  std::vector<double> loc(K + 1), logit(K + 1, 0.0);
  double s = 0.0;
  for (std::size_t k = 0; k <= K; ++k) {
    s += softplus(std::clamp(p[k], -60.0, 60.0));
    loc[k] = -std::expm1(-s);
  }
  for (std::size_t k = 1; k <= K; ++k) logit[k] = std::clamp(p[K + k], -30.0, 30.0);
  const double mx = *std::max_element(logit.begin(), logit.end());
  std::vector<double> jumps(K + 1);
  double tot = 0.0;
  for (std::size_t k = 0; k <= K; ++k) tot += jumps[k] = std::exp(logit[k] - mx);
  // Jumps below 1e-14 cannot move a cumulative value off its neighbour in
  // double precision; those atoms are dropped.
  std::vector<double> keep_loc, keep_jump;
  double kept = 0.0;
  for (std::size_t k = 0; k <= K; ++k) {
    if (jumps[k] / tot < 1e-14) continue;
    keep_loc.push_back(loc[k]);
    keep_jump.push_back(jumps[k]);
    kept += jumps[k];
  }
  for (double& j : keep_jump) j /= kept;
  return DistFn::from_jumps(keep_loc, keep_jump);
}

std::vector<double> encode_zeta(const std::vector<double>& loc, const std::vector<double>& jumps) {
  const std::size_t K = loc.size() - 1;
  std::vector<double> p(2 * K + 1);
  double prev = 0.0;
  for (std::size_t k = 0; k <= K; ++k) {
    const double s = -std::log1p(-std::min(loc[k], 1.0 - 1e-12));
    const double d = std::max(s - prev, 1e-12);
    p[k] = d > 30.0 ? d : std::log(std::expm1(d));  // inverse softplus
    prev += d;
  }
  for (std::size_t k = 1; k <= K; ++k) p[K + k] = std::log(jumps[k] / jumps[0]);
  return p;
}

}  // namespace

std::vector<ParisiResult> parisi_formula_chain(double beta, std::size_t K, const ParisiGridSpec& spec) {
  require(beta >= 0.0, "beta must be >= 0");
  const DistFn rs({0.0}, {1.0});
  if (beta == 0.0) return std::vector<ParisiResult>(K + 1, ParisiResult{std::numbers::ln2, rs});
  std::vector<ParisiResult> chain;
  ParisiResult best{parisi_functional(rs, beta, spec), rs};
  {
    // One atom: only its location is free.
    const double a = maximize_1d(
        [&](double a) { return -parisi_functional(DistFn({a}, {1.0}), beta, spec); }, 0.0, 1.0);
    const DistFn z({a}, {1.0});
    const double v = parisi_functional(z, beta, spec);
    if (v < best.value) best = {v, z};
  }
  chain.push_back(best);
  RngStream rng(42, "parisi-starts");
  for (std::size_t k_atoms = 1; k_atoms <= K; ++k_atoms) {
    // The previous optimum stays a candidate, so the chain never increases.
    auto objective = [&](const std::vector<double>& p) {
      return parisi_functional(decode_zeta(p, k_atoms), beta, spec);
    };
    for (std::size_t start = 0; start < 8; ++start) {
      std::vector<double> loc, jumps;
      if (start == 0) {
        // warm start: previous atoms plus a light one halfway to 1
        loc = best.zeta_star.locations();
        const std::vector<double>& cum = best.zeta_star.values();
        for (std::size_t j = 0; j < cum.size(); ++j) jumps.push_back(cum[j] - (j == 0 ? 0.0 : cum[j - 1]));
        while (loc.size() < k_atoms + 1) {
          loc.push_back(0.5 * (loc.back() + 1.0));
          jumps.push_back(0.05);
        }
        loc.resize(k_atoms + 1);
        jumps.resize(k_atoms + 1);
      } else {
        loc.resize(k_atoms + 1);
        jumps.resize(k_atoms + 1);
        for (std::size_t k = 0; k <= k_atoms; ++k) {
          if (start == 1) {
            loc[k] = static_cast<double>(k + 1) / static_cast<double>(k_atoms + 2);
            jumps[k] = 1.0 / static_cast<double>(k_atoms + 1);
          } else {
            loc[k] = rng.uniform();
            jumps[k] = 0.05 + rng.uniform();
          }
        }
        std::sort(loc.begin(), loc.end());
      }
      const MinimizeResult r = nelder_mead(objective, encode_zeta(loc, jumps), 0.5, 1e-4, 600);
      if (r.value < best.value) best = {r.value, decode_zeta(r.x, k_atoms)};
    }
    chain.push_back(best);
  }
  return chain;
}

ParisiResult parisi_formula(double beta, std::size_t K, const ParisiGridSpec& spec) {
  return parisi_formula_chain(beta, K, spec).back();
}

ParisiHjReport parisi_hj_equivalence(double beta, std::size_t K, const ParisiGridSpec& spec,
                                     const ParisiResult* rhs) {
  require(beta >= 0.0, "beta must be >= 0");
  const double t = 0.5 * beta * beta;
  ParisiHjReport r;
  r.lhs = hopf_lax_path(t, PiecewisePath(0.0), K, Prior::rademacher(), spec).value;
  r.lhs_composed = -r.lhs + std::numbers::ln2 + t;
  r.rhs = rhs ? rhs->value : parisi_formula(beta, K, spec).value;
  r.gap = std::abs(r.lhs_composed - r.rhs);
  return r;
}

RemQuantities rem_quantities(double t) {
  require(t > 0.0, "REM needs t > 0");
  const double l2 = std::numbers::ln2;
  return {std::sqrt(l2 / t), t <= l2 ? l2 + t : 2.0 * std::sqrt(t * l2)};
}

}  // namespace mfhj
