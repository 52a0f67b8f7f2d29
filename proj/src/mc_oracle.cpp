#include "mfhj/mc_oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "mfhj/error.hpp"
#include "mfhj/numerics.hpp"

namespace mfhj {

namespace {

McReport make_report(const std::vector<double>& samples, const RngStream& stream, std::string model,
                     std::map<std::string, double> inputs) {
  require(samples.size() >= 2, "a Monte Carlo report needs at least 2 samples");
  const MeanStderr ms = mean_stderr(samples);
  McReport r;
  r.estimate = ms.mean;
  r.stderr_ = ms.stderr_;
  r.n_samples = ms.n;
  r.seed = stream.master_seed();
  r.label = stream.label();
  r.index = stream.index();
  r.model = std::move(model);
  r.inputs = std::move(inputs);
  r.samples = samples;
  return r;
}

IdentityCheck make_check(const std::vector<double>& lhs, const std::vector<double>& rhs, const RngStream& stream,
                         const std::string& model, const std::map<std::string, double>& inputs) {
  IdentityCheck c;
  c.lhs = make_report(lhs, stream, model + ":lhs", inputs);
  c.rhs = make_report(rhs, stream, model + ":rhs", inputs);
  std::vector<double> d(lhs.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = lhs[i] - rhs[i];
  const MeanStderr ms = mean_stderr(d);
  c.diff = ms.mean;
  c.diff_stderr = ms.stderr_;
  return c;
}

// log of the mean of exp(v): exactly 0 when every v is 0.
double log_mean_exp(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double a : v) m = std::max(m, a);
  double s = 0.0;
  for (double a : v) s += std::exp(a - m);
  return m + std::log(s / static_cast<double>(v.size()));
}

// (1/N) log sum_sigma exp(beta H) - log 2 from the half energies.
double sk_excess(const std::vector<double>& half, std::size_t N, double beta) {
  std::vector<double> v(half.size());
  for (std::size_t k = 0; k < half.size(); ++k) v[k] = beta * half[k];
  return log_mean_exp(v) / static_cast<double>(N);
}

std::vector<double> negated(std::vector<double> v) {
  for (double& a : v) a = -a;
  return v;
}

void check_sk_size(std::size_t N, std::size_t max_n) {
  require(N >= 1 && N <= max_n, "SK enumeration needs 1 <= N <= " + std::to_string(max_n));
}

}  // namespace

bool IdentityCheck::within(double sigmas) const { return std::abs(diff) <= sigmas * diff_stderr; }

std::vector<double> sk_couplings(std::size_t N, RngStream& stream) { return rng_draw_gaussian(stream, N * N); }

std::vector<double> sk_half_energies(const std::vector<double>& g, std::size_t N) {
  require(N >= 1 && g.size() == N * N, "coupling matrix must be N x N");
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  std::vector<double> J(N * N, 0.0);
  double diag = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    diag += g[i * N + i];
    for (std::size_t j = 0; j < N; ++j)
      if (i != j) J[i * N + j] = g[i * N + j] + g[j * N + i];
  }
  std::vector<int> s(N, 1);
  std::vector<double> field(N, 0.0);  // sum_{j != k} J_kj s_j
  double e = diag;
  for (std::size_t k = 0; k < N; ++k) {
    for (std::size_t j = 0; j < N; ++j) field[k] += J[k * N + j];
    for (std::size_t j = k + 1; j < N; ++j) e += J[k * N + j];
  }
  const std::size_t M = std::size_t{1} << (N - 1);
  std::vector<double> out(M);
  out[0] = e * scale;
  for (std::size_t step = 1; step < M; ++step) {
    const auto k = static_cast<std::size_t>(std::countr_zero(step));
    const double sk = s[k];
    e -= 2.0 * sk * field[k];
    for (std::size_t j = 0; j < N; ++j) field[j] -= 2.0 * sk * J[j * N + k];
    s[k] = -s[k];
    out[step] = e * scale;
  }
  return out;
}

double sk_log_partition_per_spin(const std::vector<double>& g, std::size_t N, double beta) {
  return std::numbers::ln2 + sk_excess(sk_half_energies(g, N), N, beta);
}

double sk_log_partition_per_spin_naive(const std::vector<double>& g, std::size_t N, double beta) {
  require(N >= 1 && N < 31 && g.size() == N * N, "coupling matrix must be N x N");
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  std::vector<double> v(std::size_t{1} << N);
  std::vector<double> s(N);
  for (std::size_t c = 0; c < v.size(); ++c) {
    for (std::size_t i = 0; i < N; ++i) s[i] = ((c >> i) & 1U) ? -1.0 : 1.0;
    double e = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) e += g[i * N + j] * s[i] * s[j];
    v[c] = beta * e * scale;
  }
  return log_sum_exp(v) / static_cast<double>(N);
}

McReport sk_free_energy(std::size_t N, double beta, std::size_t n_disorder, const RngStream& stream) {
  check_sk_size(N, 16);
  std::vector<double> samples(n_disorder);
  for (std::size_t d = 0; d < n_disorder; ++d) {
    RngStream s = stream.substream(d);
    const std::vector<double> half = sk_half_energies(sk_couplings(N, s), N);
    const double a = sk_excess(half, N, beta);
    const double b = sk_excess(negated(half), N, beta);
    samples[d] = std::numbers::ln2 + 0.5 * (a + b);
  }
  return make_report(samples, stream, "sk",
                     {{"N", static_cast<double>(N)}, {"beta", beta}, {"n_disorder", static_cast<double>(n_disorder)}});
}

McReport sk_normalized_free_energy(std::size_t N, double t, std::size_t n_disorder, const RngStream& stream) {
  check_sk_size(N, 16);
  require(t >= 0.0, "t must be non-negative");
  const double beta = std::sqrt(2.0 * t);
  std::vector<double> samples(n_disorder);
  for (std::size_t d = 0; d < n_disorder; ++d) {
    RngStream s = stream.substream(d);
    const std::vector<double> half = sk_half_energies(sk_couplings(N, s), N);
    const double a = sk_excess(half, N, beta);
    const double b = sk_excess(negated(half), N, beta);
    samples[d] = t - 0.5 * (a + b);
  }
  return make_report(samples, stream, "sk-normalized",
                     {{"N", static_cast<double>(N)}, {"t", t}, {"n_disorder", static_cast<double>(n_disorder)}});
}

McReport overlap_variance(std::size_t N, double t, std::size_t n_disorder, const RngStream& stream) {
  check_sk_size(N, 14);
  require(t >= 0.0, "t must be non-negative");
  const double beta = std::sqrt(2.0 * t);
  const std::size_t M = std::size_t{1} << (N - 1);
  // spins of the half configurations, Gray-code order
  Eigen::MatrixXd S(M, N);
  for (std::size_t k = 0; k < M; ++k) {
    const std::size_t gray = k ^ (k >> 1);
    for (std::size_t i = 0; i < N; ++i) S(k, i) = ((gray >> i) & 1U) ? -1.0 : 1.0;
  }
  std::vector<double> second(n_disorder);
  for (std::size_t d = 0; d < n_disorder; ++d) {
    RngStream s = stream.substream(d);
    const std::vector<double> half = sk_half_energies(sk_couplings(N, s), N);
    double m = -std::numeric_limits<double>::infinity();
    for (double e : half) m = std::max(m, beta * e);
    Eigen::VectorXd w(M);
    for (std::size_t k = 0; k < M; ++k) w[k] = std::exp(beta * half[k] - m);
    w /= w.sum();
    // <sigma_i sigma_j> over Sigma_N equals the half-space average since H is
    // even; by the same symmetry <sigma_i> = 0, so E<R12> = 0 and
    // Var(R12) = E<R12^2> = E N^-2 sum_ij <sigma_i sigma_j>^2.
    const Eigen::MatrixXd C = S.transpose() * w.asDiagonal() * S;
    second[d] = C.squaredNorm() / static_cast<double>(N * N);
  }
  return make_report(second, stream, "sk-overlap-variance",
                     {{"N", static_cast<double>(N)}, {"t", t}, {"n_disorder", static_cast<double>(n_disorder)}});
}

double rem_centring(std::size_t N) {
  const double n = static_cast<double>(N);
  return std::sqrt(2.0 * n * std::numbers::ln2 - std::log(n) - std::log(std::numbers::ln2) -
                   std::log(4.0 * std::numbers::pi));
}

RemReport rem_free_energy(std::size_t N, double t, std::size_t n_disorder, const RngStream& stream, bool normalized) {
  require(N >= 2 && N <= 22, "REM enumeration needs 2 <= N <= 22");
  require(t >= 0.0, "t must be non-negative");
  const double n = static_cast<double>(N);
  const std::size_t M = std::size_t{1} << N;
  const double amp = std::sqrt(2.0 * t * n);
  const double root = std::sqrt(2.0 * n * std::numbers::ln2);  // zeta sqrt(2tN)
  const double shift = root * rem_centring(N);
  RemReport rep;
  std::vector<double> fe(n_disorder), counts(n_disorder);
  std::vector<double> v(M);
  for (std::size_t d = 0; d < n_disorder; ++d) {
    RngStream s = stream.substream(d);
    std::vector<double> pts;
    double positive = 0.0;
    for (std::size_t k = 0; k < M; ++k) {
      const double e = s.normal();
      v[k] = amp * e;
      const double p = root * e - shift;
      if (p >= rep.point_floor) pts.push_back(p);
      if (p >= 0.0) positive += 1.0;
    }
    std::sort(pts.begin(), pts.end(), std::greater<>());
    rep.extreme_points.push_back(std::move(pts));
    counts[d] = positive;
    // log mean exp(sqrt(2tN) E) / N, exactly 0 at t = 0
    const double excess = log_mean_exp(v) / n;
    fe[d] = normalized ? t - excess : std::numbers::ln2 + excess;
  }
  const std::map<std::string, double> inputs{
      {"N", n}, {"t", t}, {"n_disorder", static_cast<double>(n_disorder)}, {"normalized", normalized ? 1.0 : 0.0}};
  rep.free_energy = make_report(fe, stream, normalized ? "rem-normalized" : "rem", inputs);
  rep.positive_count = make_report(counts, stream, "rem-positive-count", inputs);
  return rep;
}

namespace {

// Per-draw sufficient statistics of every configuration x in support^N.
struct RankOneDraw {
  std::size_t N;
  std::vector<double> log_p;  // log P_N(x)
  std::vector<double> xwx;    // x.Wx
  std::vector<double> m;      // x.xbar
  std::vector<double> zx;     // z.x
  std::vector<double> r2;     // |x|^2
};

std::size_t configuration_count(std::size_t N, const Prior& prior, std::size_t max_n) {
  require(prior.is_atomic(), "rank-one enumeration needs an atomic prior");
  require(N >= 1 && N <= max_n, "rank-one enumeration needs 1 <= N <= " + std::to_string(max_n));
  const double count = std::pow(static_cast<double>(prior.atoms().size()), static_cast<double>(N));
  require(count <= 1e6, "support^N enumeration exceeds 1e6 configurations");
  return static_cast<std::size_t>(count);
}

double sample_atom(const Prior& prior, RngStream& s) {
  const double u = s.uniform();
  double c = 0.0;
  for (const Atom& a : prior.atoms()) {
    c += a.weight;
    if (u < c) return a.value;
  }
  return prior.atoms().back().value;
}

void configuration(const Prior& prior, std::size_t N, std::size_t c, std::vector<double>& x,
                   double* log_p = nullptr) {
  const std::size_t base = prior.atoms().size();
  double lp = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const Atom& a = prior.atoms()[c % base];
    c /= base;
    x[i] = a.value;
    lp += std::log(a.weight);
  }
  if (log_p) *log_p = lp;
}

// Draw (xbar, W, z) and tabulate; the antithetic partner flips xwx and zx.
RankOneDraw rankone_draw(std::size_t N, const Prior& prior, std::size_t count, RngStream& s) {
  std::vector<double> xbar(N);
  for (double& a : xbar) a = sample_atom(prior, s);
  const std::vector<double> W = rng_draw_gaussian(s, N * N);
  const std::vector<double> z = rng_draw_gaussian(s, N);
  RankOneDraw d{N, std::vector<double>(count), std::vector<double>(count), std::vector<double>(count),
                std::vector<double>(count), std::vector<double>(count)};
  std::vector<double> x(N);
  for (std::size_t c = 0; c < count; ++c) {
    configuration(prior, N, c, x, &d.log_p[c]);
    double q = 0.0, m = 0.0, zx = 0.0, r2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < N; ++j) row += W[i * N + j] * x[j];
      q += x[i] * row;
      m += x[i] * xbar[i];
      zx += z[i] * x[i];
      r2 += x[i] * x[i];
    }
    d.xwx[c] = q;
    d.m[c] = m;
    d.zx[c] = zx;
    d.r2[c] = r2;
  }
  return d;
}

// log P_N(x) + H_N(t,h,x) for every configuration; sign = -1 for the partner.
std::vector<double> rankone_log_weights(const RankOneDraw& d, double t, double h, double sign) {
  const double n = static_cast<double>(d.N);
  const double a = std::sqrt(2.0 * t / n) * sign;
  const double b = std::sqrt(2.0 * h) * sign;
  std::vector<double> v(d.log_p.size());
  for (std::size_t c = 0; c < v.size(); ++c) {
    const double m = d.m[c];
    const double r2 = d.r2[c];
    v[c] = d.log_p[c] + a * d.xwx[c] + 2.0 * t / n * m * m - t / n * r2 * r2 + 2.0 * h * m + b * d.zx[c] -
           h * r2;
  }
  return v;
}

double rankone_pair_value(const RankOneDraw& d, double t, double h) {
  const double n = static_cast<double>(d.N);
  return 0.5 * (log_sum_exp(rankone_log_weights(d, t, h, 1.0)) + log_sum_exp(rankone_log_weights(d, t, h, -1.0))) /
         n;
}

std::map<std::string, double> rankone_inputs(std::size_t N, double t, double h, std::size_t n_disorder) {
  return {{"N", static_cast<double>(N)}, {"t", t}, {"h", h}, {"n_disorder", static_cast<double>(n_disorder)}};
}

}  // namespace

McReport rankone_free_energy(std::size_t N, double t, double h, const Prior& prior, std::size_t n_disorder,
                             const RngStream& stream) {
  require(t >= 0.0 && h >= 0.0, "t and h must be non-negative");
  const std::size_t count = configuration_count(N, prior, 12);
  std::vector<double> samples(n_disorder);
  for (std::size_t d = 0; d < n_disorder; ++d) {
    RngStream s = stream.substream(d);
    samples[d] = rankone_pair_value(rankone_draw(N, prior, count, s), t, h);
  }
  return make_report(samples, stream, "rankone(" + prior.name() + ")", rankone_inputs(N, t, h, n_disorder));
}

RankOneDerivatives rankone_derivatives(std::size_t N, double t, double h, const Prior& prior,
                                       std::size_t n_disorder, const RngStream& stream, double step) {
  require(step > 0.0 && t > step && h > step, "central differences need t, h > step > 0");
  const std::size_t count = configuration_count(N, prior, 12);
  std::vector<double> dt(n_disorder), dh(n_disorder);
  for (std::size_t d = 0; d < n_disorder; ++d) {
    RngStream s = stream.substream(d);
    const RankOneDraw draw = rankone_draw(N, prior, count, s);
    dt[d] = (rankone_pair_value(draw, t + step, h) - rankone_pair_value(draw, t - step, h)) / (2.0 * step);
    dh[d] = (rankone_pair_value(draw, t, h + step) - rankone_pair_value(draw, t, h - step)) / (2.0 * step);
  }
  auto inputs = rankone_inputs(N, t, h, n_disorder);
  inputs["step"] = step;
  RankOneDerivatives r;
  r.dt = make_report(dt, stream, "rankone-dt(" + prior.name() + ")", inputs);
  r.dh = make_report(dh, stream, "rankone-dh(" + prior.name() + ")", inputs);
  r.gap = r.dt.estimate - r.dh.estimate * r.dh.estimate;
  std::vector<double> lin(n_disorder);
  for (std::size_t d = 0; d < n_disorder; ++d) lin[d] = dt[d] - 2.0 * r.dh.estimate * dh[d];
  r.gap_stderr = mean_stderr(lin).stderr_;
  return r;
}

NishimoriReport nishimori_check(std::size_t N, double t, double h, const Prior& prior, std::size_t n_disorder,
                                const RngStream& stream) {
  require(t >= 0.0 && h >= 0.0, "t and h must be non-negative");
  const std::size_t count = configuration_count(N, prior, 8);
  std::vector<double> a1(n_disorder), b1(n_disorder), a2(n_disorder), b2(n_disorder);
  Eigen::MatrixXd X(count, N);
  std::vector<double> x(N);
  for (std::size_t c = 0; c < count; ++c) {
    configuration(prior, N, c, x);
    for (std::size_t i = 0; i < N; ++i) X(c, i) = x[i];
  }
  for (std::size_t d = 0; d < n_disorder; ++d) {
    RngStream s = stream.substream(d);
    const RankOneDraw draw = rankone_draw(N, prior, count, s);
    const std::vector<double> lw = rankone_log_weights(draw, t, h, 1.0);
    const double lz = log_sum_exp(lw);
    Eigen::VectorXd w(count);
    for (std::size_t c = 0; c < count; ++c) w[c] = std::exp(lw[c] - lz);
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t c = 0; c < count; ++c) {
      m1 += w[c] * draw.m[c];
      m2 += w[c] * draw.m[c] * draw.m[c];
    }
    const Eigen::VectorXd mean_x = X.transpose() * w;
    const Eigen::MatrixXd C = X.transpose() * w.asDiagonal() * X;
    a1[d] = m1;
    b1[d] = mean_x.squaredNorm();
    a2[d] = m2;
    b2[d] = C.squaredNorm();
  }
  const auto inputs = rankone_inputs(N, t, h, n_disorder);
  return {make_check(a1, b1, stream, "nishimori-overlap", inputs),
          make_check(a2, b2, stream, "nishimori-overlap-squared", inputs)};
}

GibpFunction parse_gibp_function(const std::string& name) {
  if (name == "identity") return GibpFunction::identity;
  if (name == "square") return GibpFunction::square;
  if (name == "tanh") return GibpFunction::tanh;
  if (name == "cos") return GibpFunction::cos;
  throw ValidationError("unknown function '" + name + "' (identity, square, tanh, cos)");
}

IdentityCheck gibp_check(GibpFunction F, double v, std::size_t n_mc, const RngStream& stream) {
  require(v > 0.0, "v must be positive");
  RngStream s = stream;
  std::vector<double> lhs(n_mc), rhs(n_mc);
  for (std::size_t i = 0; i < n_mc; ++i) {
    const double g = v * s.normal();
    double f = 0.0, df = 0.0;
    switch (F) {
      case GibpFunction::identity:
        f = g;
        df = 1.0;
        break;
      case GibpFunction::square:
        f = g * g;
        df = 2.0 * g;
        break;
      case GibpFunction::tanh: {
        f = std::tanh(g);
        df = 1.0 - f * f;
        break;
      }
      case GibpFunction::cos:
        f = std::cos(g);
        df = -std::sin(g);
        break;
    }
    lhs[i] = g * f;
    rhs[i] = v * v * df;
  }
  return make_check(lhs, rhs, stream, "gibp", {{"v", v}, {"n_mc", static_cast<double>(n_mc)}});
}

}  // namespace mfhj
