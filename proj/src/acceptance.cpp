#include "mfhj/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <tuple>

#include "mfhj/convex_hj.hpp"
#include "mfhj/curie_weiss.hpp"
#include "mfhj/error.hpp"
#include "mfhj/inference.hpp"
#include "mfhj/mc_oracle.hpp"
#include "mfhj/parisi.hpp"
#include "mfhj/point_process.hpp"
#include "mfhj/rng.hpp"

namespace mfhj::acceptance {

bool CriterionResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

Check near(std::string name, double measured, double target, double tolerance) {
  return {std::move(name), Relation::near, measured, target, tolerance, std::abs(measured - target) <= tolerance};
}

Check at_most(std::string name, double measured, double bound) {
  return {std::move(name), Relation::at_most, measured, bound, 0.0, measured <= bound};
}

Check at_least(std::string name, double measured, double bound) {
  return {std::move(name), Relation::at_least, measured, bound, 0.0, measured >= bound};
}

Check info(std::string name, double measured, double reference) {
  return {std::move(name), Relation::info, measured, reference, 0.0, true};
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

double max3sigma(double floor, double stderr_) { return std::max(floor, 3.0 * stderr_); }

double logcosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

RngStream stream_for(const Config& cfg, int id) {
  return RngStream(cfg.seed, "acceptance-c" + std::to_string(id));
}

// Criterion bodies append checks; runtime limits are added by the caller.
using Body = std::function<void(const Config&, std::vector<Check>&)>;

void curie_weiss_convergence(const Config&, std::vector<Check>& out) {
  for (double t : {0.2, 0.5, 1.0}) {
    for (double h : {0.0, 0.1}) {
      CwParams p;
      p.t = t;
      p.h = h;
      out.push_back(near("F_4000 - f at t=" + num(t) + " h=" + num(h), finite_free_energy(4000, p),
                         limit_free_energy(p).value, 0.01));
    }
  }
}

void curie_weiss_transition(const Config&, std::vector<Check>& out) {
  const auto sub = magnetization_fixed_points(0.4, 0.0);
  out.push_back(near("roots at t=0.4", static_cast<double>(sub.size()), 1.0, 0.0));
  if (!sub.empty()) out.push_back(near("root at t=0.4", sub.front().m, 0.0, 0.0));
  const auto sup = magnetization_fixed_points(0.6, 0.0);
  std::vector<double> maxima;
  double residual = 0.0;
  for (const auto& fp : sub) residual = std::max(residual, fp.residual);
  for (const auto& fp : sup) {
    residual = std::max(residual, fp.residual);
    if (fp.type == FixedPoint::Type::max) maxima.push_back(fp.m);
  }
  out.push_back(near("maxima at t=0.6", static_cast<double>(maxima.size()), 2.0, 0.0));
  if (maxima.size() == 2) {
    out.push_back(near("symmetry m+ + m-", maxima[0] + maxima[1], 0.0, 1e-12));
    out.push_back(at_least("m0 at t=0.6", maxima[1], std::sqrt(1.0 / 6.0)));
  }
  out.push_back(at_most("max fixed-point residual", residual, 1e-10));
}

void critical_exponents_check(const Config&, std::vector<Check>& out) {
  const double slope = critical_exponents(ExponentProbe::delta);
  out.push_back(near("delta", 1.0 / (slope - 1.0), 3.0, 0.15));
  out.push_back(near("beta", critical_exponents(ExponentProbe::beta), 0.5, 0.03));
}

void hopf_agreement(const Config&, std::vector<Check>& out) {
  const HjProblem p = HjProblem::from_functions(logcosh, UniformGrid(-12, 12, 4001), [](double q) { return q * q; },
                                                UniformGrid(-3, 3, 2001), true, true);
  const HopfSolver hs(p);
  const HopfLaxSolver hl(p);
  double worst = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double t = 0.1 * i;
    for (int j = 0; j <= 60; ++j) {
      const double x = -3.0 + 0.1 * j;
      worst = std::max(worst, std::abs(hs(t, x) - hl(t, x)));
    }
  }
  out.push_back(at_most("sup |hopf - hopf_lax| on [0,2]x[-3,3]", worst, 1e-4));

  // psi = |h|, H = -q^2: h^2/4t for |h| <= 2t, |h| - t beyond.
  const HjProblem abs_prob = HjProblem::from_functions([](double h) { return std::abs(h); },
                                                       UniformGrid(-12, 12, 4001), [](double q) { return -q * q; },
                                                       UniformGrid(-3, 3, 2001), false, true);
  const HopfSolver ha(abs_prob);
  double inner = 0.0, outer = 0.0;
  for (double t : {0.5, 1.0, 2.0}) {
    for (double s : {-1.0, -0.5, 0.0, 0.3, 1.0}) {
      const double h = 2.0 * t * s;
      inner = std::max(inner, std::abs(ha(t, h) - h * h / (4.0 * t)));
    }
    for (double d : {0.25, 1.0, 2.5}) {
      for (double sign : {-1.0, 1.0}) {
        const double h = sign * (2.0 * t + d);
        outer = std::max(outer, std::abs(ha(t, h) - (std::abs(h) - t)));
      }
    }
  }
  out.push_back(at_most("max error h^2/4t branch", inner, 1e-6));
  out.push_back(at_most("max error |h|-t branch", outer, 1e-6));
}

// Gaussian-prior mmse: 1 below t = 1/4, r(2 - r) with r = 1/(4t) above.
double gaussian_mmse_closed(double t) {
  if (t <= 0.25) return 1.0;
  const double r = 1.0 / (4.0 * t);
  return r * (2.0 - r);
}

void gaussian_closed_forms(const Config&, std::vector<Check>& out) {
  const InferenceProblem gauss{Prior::gaussian(), 64};
  double worst = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double h = 0.05 * i;
    worst = std::max(worst, std::abs(psi_initial(gauss, h) - (h - 0.5 * std::log1p(2.0 * h))));
  }
  out.push_back(at_most("max |psi - (h - log(1+2h)/2)| on [0,10]", worst, 1e-8));
  const ScalarChannel ch(gauss);
  for (double t : {0.1, 0.25, 1.0, 3.0})
    out.push_back(near("mmse at t=" + num(t), mmse(ch, t), gaussian_mmse_closed(t), 1e-6));
  double gap = 0.0;
  for (int i = 1; i <= 40; ++i) {
    const double t = 0.05 * i;
    gap = std::max(gap, std::abs(pca_mse(t) - mmse(ch, t)));
  }
  out.push_back(at_most("max |pca_mse - mmse| on t in (0,2]", gap, 1e-6));
}

void rademacher_prior(const Config&, std::vector<Check>& out) {
  const InferenceProblem rad{Prior::rademacher(), 64};
  const ScalarChannel ch(rad);
  for (double t : {0.1, 0.24}) {
    out.push_back(near("mmse at t=" + num(t), mmse(ch, t), 1.0, 0.0));
    out.push_back(near("h_star at t=" + num(t), limit_free_energy_inf(ch, t, 0.0).h_star, 0.0, 0.0));
  }
  out.push_back(near("critical_snr", critical_snr(rad), 0.25, 1e-3));
  const double hs = limit_free_energy_inf(ch, 4.0, 0.0).h_star;
  out.push_back(near("h_star at t=4", hs, 8.0, std::exp(-1.0)));
  // |h* - 8| <= 1/e caps mmse = 1 - h*^2/64 below this.
  const double cap = 1.0 - std::pow(8.0 - std::exp(-1.0), 2) / 64.0;
  const double m4 = mmse(ch, 4.0);
  out.push_back(at_most("mmse at t=4 against the h* bound", m4, cap));
  out.push_back(at_most("mmse at t=4 against pca_mse", m4, pca_mse(4.0)));
}

void sparse_prior(const Config&, std::vector<Check>& out) {
  out.push_back(at_most("critical_snr sparse(0.05)", critical_snr({Prior::sparse(0.05), 64}), 0.25));
}

void sbm_consistency(const Config&, std::vector<Check>& out) {
  const ScalarChannel ch({Prior::rademacher(), 64});
  for (double lambda : {0.5, 1.0, 2.0, 4.0})
    out.push_back(near("sbm I at lambda=" + num(lambda), sbm_mutual_information({0.5, lambda}),
                       mutual_information(ch, lambda / 4.0), 1e-6));
}

void finite_n_inference(const Config& cfg, std::vector<Check>& out) {
  const RngStream base = stream_for(cfg, 9);
  const Prior rad = Prior::rademacher();
  const std::size_t draws = cfg.reduced ? 1000 : 4000;
  const McReport f = rankone_free_energy(8, 0.1, 0.2, rad, draws, base.substream(0));
  const double limit = limit_free_energy_inf(InferenceProblem{rad, 64}, 0.1, 0.2).value;
  out.push_back(near("F_8(0.1, 0.2) vs limit", f.estimate, limit, max3sigma(0.05, f.stderr_)));

  const NishimoriReport n = nishimori_check(6, 0.2, 0.3, rad, cfg.reduced ? 2000 : 10000, base.substream(1));
  out.push_back(near("E<x.xbar> - E<x.x'>", n.first.diff, 0.0, 3.0 * n.first.diff_stderr));
  out.push_back(near("E<(x.xbar)^2> - E<(x.x')^2>", n.second.diff, 0.0, 3.0 * n.second.diff_stderr));
  out.push_back(at_least("E<x.xbar>", n.first.lhs.estimate, -3.0 * n.first.lhs.stderr_));

  const RankOneDerivatives d = rankone_derivatives(8, 0.3, 0.5, rad, draws, base.substream(2));
  out.push_back(at_least("dF/dt - (dF/dh)^2 at (0.3, 0.5)", d.gap, -3.0 * d.gap_stderr));
}

// |S(2c) - S(c)| below the stderr of S(c).
Check truncation(const std::string& name, double at_c, double at_2c, double stderr_) {
  return at_most("cutoff doubling " + name, std::abs(at_2c - at_c), stderr_);
}

void pdp_identities(const Config& cfg, std::vector<Check>& out) {
  const RngStream base = stream_for(cfg, 10);
  const double shift = cfg.pdp_zeta_shift;
  const std::size_t n_mc = cfg.reduced ? 10000 : 100000;
  const std::size_t cutoff = 1000;
  const OverlapFunction one = named_overlap_function("one");
  const OverlapFunction r12 = named_overlap_function("r12");
  std::uint64_t k = 0;
  for (double zeta : {0.3, 0.5, 0.7}) {
    const bool gg = zeta == 0.5;
    const RngStream s = base.substream(k++);
    const GgReport a = gg_identity_check(zeta + shift, gg ? 2 : 1, gg ? r12 : one, n_mc, cutoff, s);
    const GgReport b = gg_identity_check(zeta + shift, gg ? 2 : 1, gg ? r12 : one, n_mc, 2 * cutoff, s);
    out.push_back(near("E<R12> at zeta=" + num(zeta), a.mean_r12, 1.0 - zeta, 3.0 * a.mean_r12_stderr));
    out.push_back(truncation("E<R12> at zeta=" + num(zeta), a.mean_r12, b.mean_r12, a.mean_r12_stderr));
    if (gg) {
      out.push_back(near("gg n=2 f=R12 lhs - rhs", a.lhs - a.rhs, 0.0, 3.0 * a.diff_stderr));
      out.push_back(truncation("gg n=2 lhs - rhs", a.lhs - a.rhs, b.lhs - b.rhs, a.diff_stderr));
    }
  }
  const double zeta = 0.5;
  const std::size_t reps = cfg.reduced ? 5000 : 20000;
  const RngStream s = base.substream(k++);
  const auto a = check_pdp_invariance(zeta + shift, lognormal_mark(zeta), reps, cutoff, s);
  const auto b = check_pdp_invariance(zeta + shift, lognormal_mark(zeta), reps, 2 * cutoff, s);
  out.push_back(near("E log<X> lognormal, zeta=0.5", a.lhs, 0.0, 3.0 * a.stderr_));
  out.push_back(truncation("E log<X>", a.lhs, b.lhs, a.stderr_));
}

std::vector<std::size_t> doubled(std::vector<std::size_t> c) {
  for (auto& x : c) x *= 2;
  return c;
}

void cascade_recursion_check(const Config& cfg, std::vector<Check>& out) {
  const RngStream base = stream_for(cfg, 11);
  const std::size_t n_fun = cfg.reduced ? 2000 : 10000;

  const CascadeIntegrand last{[](const std::vector<double>& w) { return w[1]; }, 1.0};
  const auto c1 = default_cascade_cutoffs(1);
  const auto k1 = cascade_functional({0.5}, c1, last, n_fun, base.substream(0));
  const auto k1d = cascade_functional({0.5}, doubled(c1), last, n_fun, base.substream(0));
  const double closed = 2.0 * std::log(2.0 * (std::exp(0.5) - 1.0));
  out.push_back(near("K=1 recursion vs closed form", k1.rhs, closed, 1e-12));
  out.push_back(near("K=1 functional vs recursion", k1.lhs, k1.rhs, max3sigma(0.02, k1.stderr_)));
  out.push_back(truncation("K=1 functional", k1.lhs, k1d.lhs, k1.stderr_));

  const CascadeIntegrand mid{[](const std::vector<double>& w) { return 0.5 * (w[1] + w[2]); }, 1.0};
  const std::vector<double> z2{0.3, 0.7};
  const auto c2 = default_cascade_cutoffs(2);
  const std::size_t n_fun2 = cfg.reduced ? 1000 : 4000;
  const auto k2 = cascade_functional(z2, c2, mid, n_fun2, base.substream(1));
  const auto k2d = cascade_functional(z2, doubled(c2), mid, n_fun2, base.substream(1));
  out.push_back(near("K=2 functional vs recursion", k2.lhs, k2.rhs, max3sigma(0.02, k2.stderr_)));
  out.push_back(truncation("K=2 functional", k2.lhs, k2d.lhs, k2.stderr_));

  const std::size_t n_law = cfg.reduced ? 10000 : 100000;
  const auto law = cascade_overlap_mc(z2, c2, n_law, base.substream(2));
  const auto lawd = cascade_overlap_mc(z2, doubled(c2), n_law, base.substream(2));
  for (std::size_t j = 0; j < law.freq.size(); ++j) {
    const std::string nm = "P(meet=" + std::to_string(j) + ")";
    out.push_back(near(nm, law.freq[j], law.target[j], 3.0 * law.stderr_[j]));
    out.push_back(truncation(nm, law.freq[j], lawd.freq[j], law.stderr_[j]));
  }
}

// Same counts in both modes: the KS tolerances sit close to the sampling
// noise of 2000 replicas, so a reduced run would be a different experiment.
void extreme_values(const Config& cfg, std::vector<Check>& out) {
  const RngStream base = stream_for(cfg, 12);
  const std::size_t n = 100000;
  const std::size_t reps = 2000;
  out.push_back(at_most("KS Frechet, pareto zeta=1",
                        extreme_value_check(ExtremeLaw::pareto, 1.0, n, reps, base.substream(0)).ks, 0.02));
  out.push_back(at_most("KS Gumbel, gaussian",
                        extreme_value_check(ExtremeLaw::gaussian, 0.0, n, reps, base.substream(1)).ks, 0.05));
  out.push_back(at_most("KS exp(-|x|), uniform on [-1,0]",
                        extreme_value_check(ExtremeLaw::bounded_poly, 1.0, n, reps, base.substream(2)).ks, 0.02));
}

ParisiGridSpec parisi_spec(const Config& cfg) {
  ParisiGridSpec s;
  if (cfg.reduced) {
    s.n_x = 513;
    s.gh_nodes = 24;
  }
  return s;
}

std::size_t parisi_levels(const Config& cfg) { return cfg.reduced ? 1 : 2; }

// Chains are shared between the Parisi and SK criteria within one process.
const std::vector<ParisiResult>& parisi_chain(double beta, const Config& cfg) {
  static std::map<std::tuple<double, bool>, std::vector<ParisiResult>> cache;
  const auto key = std::make_tuple(beta, cfg.reduced);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, parisi_formula_chain(beta, parisi_levels(cfg), parisi_spec(cfg))).first;
  return it->second;
}

void parisi_check(const Config& cfg, std::vector<Check>& out) {
  const double l2 = std::numbers::ln2;
  const std::size_t K = parisi_levels(cfg);
  out.push_back(near("P(beta=0)", parisi_formula(0.0, K).value, l2, 1e-12));
  for (double beta : {0.8, 1.5}) {
    const auto& chain = parisi_chain(beta, cfg);
    const double annealed = l2 + 0.5 * beta * beta;
    const std::string b = " at beta=" + num(beta);
    if (beta == 0.8) out.push_back(near("P" + b + " vs annealed", chain.back().value, annealed, 1e-3));
    bool monotone = true;
    for (std::size_t i = 1; i < chain.size(); ++i) monotone = monotone && chain[i].value <= chain[i - 1].value;
    out.push_back(near("K-chain non-increasing" + b, monotone ? 1.0 : 0.0, 1.0, 0.0));
    out.push_back(at_most("P" + b + " vs annealed bound", chain.front().value, annealed));
    const ParisiHjReport hj = parisi_hj_equivalence(beta, K, parisi_spec(cfg), &chain.back());
    out.push_back(at_most("HJ gap" + b, hj.gap, beta == 0.8 ? 2e-3 : 5e-3));
  }
}

void sk_trend(const Config& cfg, std::vector<Check>& out) {
  const RngStream base = stream_for(cfg, 14);
  const std::size_t pairs = cfg.reduced ? 500 : 2000;
  std::uint64_t k = 0;
  for (double beta : {0.5, 1.5}) {
    const McReport f = sk_free_energy(12, beta, pairs, base.substream(k++));
    out.push_back(near("F_12 at beta=" + num(beta) + " vs Parisi", f.estimate, parisi_chain(beta, cfg).back().value,
                       max3sigma(0.1, f.stderr_)));
  }
  const McReport fn = sk_normalized_free_energy(12, 1.125, pairs, base.substream(k++));
  out.push_back(at_least("normalized F_12 at t=1.125", fn.estimate, -3.0 * fn.stderr_));
  if (cfg.reduced) return;
  // Finite-size trend: least squares F_N = F_inf - c N^{-2/3} over N = 8..14.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t N = 8; N <= 14; ++N, ++m) {
    const double x = std::pow(static_cast<double>(N), -2.0 / 3.0);
    const double y = sk_free_energy(N, 1.5, 1000, base.substream(100 + N)).estimate;
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  out.push_back(info("F_inf extrapolated from N=8..14 at beta=1.5", (sy - slope * sx) / m,
                     parisi_chain(1.5, cfg).back().value));
}

void rem_check(const Config& cfg, std::vector<Check>& out) {
  const RngStream base = stream_for(cfg, 15);
  const std::size_t N = 20;
  const std::size_t draws = cfg.reduced ? 40 : 200;
  std::uint64_t k = 0;
  for (double t : {0.3, 2.0}) {
    const RemReport r = rem_free_energy(N, t, draws, base.substream(k++));
    const RemQuantities q = rem_quantities(t);
    out.push_back(near("F_20 at t=" + num(t) + " vs limit", r.free_energy.estimate, q.limit_free_energy,
                       max3sigma(0.05, r.free_energy.stderr_)));
    if (t == 2.0) {
      out.push_back(near("mean count of Lambda in [0,inf)", r.positive_count.estimate, 1.0,
                         3.0 * r.positive_count.stderr_));
      // Low temperature: log Z = sqrt(2N log 2) a_N / zeta + log of a zeta-stable sum.
      const double z = q.zeta;
      const double nd = static_cast<double>(N);
      const double pred = (std::sqrt(2.0 * nd * std::numbers::ln2) * rem_centring(N) / z + std::lgamma(1.0 - z) / z +
                           std::numbers::egamma * (1.0 / z - 1.0)) /
                          nd;
      out.push_back(info("F_20 at t=2 vs finite-N expansion", r.free_energy.estimate, pred));
    }
  }
}

void identity_batteries(const Config& cfg, std::vector<Check>& out) {
  const RngStream base = stream_for(cfg, 16);
  const std::size_t n = cfg.reduced ? 100000 : 1000000;
  std::uint64_t k = 0;
  for (const char* name : {"identity", "square", "tanh", "cos"}) {
    const IdentityCheck c = gibp_check(parse_gibp_function(name), 1.0, n, base.substream(k++));
    out.push_back(near(std::string("gibp ") + name, c.diff, 0.0, 3.0 * c.diff_stderr));
  }
  RngStream rng = base.substream(k++);
  const UniformGrid g(-5, 5, 1001);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double a1 = rng.uniform() * 2, c1 = rng.uniform() * 6 - 3;
    const double a2 = rng.uniform() * 2, c2 = rng.uniform() * 6 - 3;
    const double b = 0.1 + 0.9 * rng.uniform();
    const double s = rng.uniform() * 2 - 1;
    const double kk = rng.uniform() * 3;
    const GridFunction f = GridFunction::sample(g, [&](double x) {
      return a1 * std::abs(x - c1) + a2 * std::abs(x - c2) + b * x * x + s * x + kk * logcosh(x);
    });
    const GridFunction fs = legendre_dual(f);
    const GridFunction fss = legendre_dual(fs, g);
    const double tol = dual_grid_tolerance(g, fs.grid());
    for (std::size_t i = 0; i < g.n; ++i) {
      if (std::abs(g.x(i)) > 4.5) continue;
      const double err = fss.is_finite(i) ? std::abs(fss.raw(i) - f.raw(i)) : INFINITY;
      worst = std::max(worst, err / tol);
    }
  }
  out.push_back(at_most("Fenchel-Moreau max |f** - f| / grid tolerance, 50 functions", worst, 2.0));
}

struct Entry {
  const char* title;
  Body body;
  double time_limit;  // seconds, 0 = none
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> r{
      {"curie-weiss convergence", curie_weiss_convergence, 1.0},
      {"curie-weiss phase transition", curie_weiss_transition, 0.0},
      {"critical exponents", critical_exponents_check, 5.0},
      {"hopf and hopf-lax agreement", hopf_agreement, 0.0},
      {"gaussian prior closed forms", gaussian_closed_forms, 0.0},
      {"rademacher prior", rademacher_prior, 0.0},
      {"sparse prior transition", sparse_prior, 10.0},
      {"sbm consistency", sbm_consistency, 0.0},
      {"finite-N inference oracle", finite_n_inference, 60.0},
      {"pdp identities", pdp_identities, 0.0},
      {"cascade recursion", cascade_recursion_check, 120.0},
      {"extreme values", extreme_values, 0.0},
      {"parisi formula", parisi_check, 300.0},
      {"sk finite-N trend", sk_trend, 0.0},
      {"random energy model", rem_check, 0.0},
      {"identity batteries", identity_batteries, 0.0},
  };
  return r;
}

const char* relation_text(Relation r) {
  switch (r) {
    case Relation::near:
      return "|m-t|<=tol";
    case Relation::at_most:
      return "m<=t";
    case Relation::at_least:
      return "m>=t";
    case Relation::info:
      return "info";
  }
  return "";
}

}  // namespace

std::string criterion_title(int id) {
  if (id < 1 || id > kCriterionCount) throw ValidationError("criterion id must be in 1.." + std::to_string(kCriterionCount));
  return registry()[id - 1].title;
}

CriterionResult run_criterion(int id, const Config& cfg) {
  CriterionResult r;
  r.id = id;
  r.title = criterion_title(id);
  const Entry& e = registry()[id - 1];
  const auto t0 = Clock::now();
  e.body(cfg, r.checks);
  r.seconds = seconds_since(t0);
  if (e.time_limit > 0.0) r.checks.push_back(at_most("runtime seconds", r.seconds, e.time_limit));
  return r;
}

std::string format_result(const CriterionResult& r) {
  char head[160];
  std::snprintf(head, sizeof head, "%s C%02d %s (%.1f s)\n", r.pass() ? "PASS" : "FAIL", r.id, r.title.c_str(),
                r.seconds);
  std::string s = head;
  for (const Check& c : r.checks) {
    s += "    ";
    s += c.relation == Relation::info ? "info" : (c.pass ? "ok  " : "FAIL");
    s += "  " + c.name + ": measured " + num(c.measured) + (c.relation == Relation::info ? ", reference " : ", target ") +
         num(c.target);
    if (c.relation == Relation::near) s += ", tolerance " + num(c.tolerance);
    s += std::string(" [") + relation_text(c.relation) + "]\n";
  }
  return s;
}

}  // namespace mfhj::acceptance
