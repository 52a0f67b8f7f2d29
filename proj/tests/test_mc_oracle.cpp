#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mfhj/error.hpp"
#include "mfhj/mc_oracle.hpp"
#include "mfhj/numerics.hpp"
#include "mfhj/quadrature.hpp"

using namespace mfhj;

namespace {

const RngStream kBase(42, "test-mc-oracle");

}  // namespace

TEST_CASE("gray-code enumeration matches direct enumeration") {
  for (std::size_t N = 1; N <= 6; ++N) {
    RngStream s = kBase.substream(N);
    const std::vector<double> g = sk_couplings(N, s);
    for (double beta : {0.0, 0.3, 1.0, 2.5}) {
      const double a = sk_log_partition_per_spin(g, N, beta);
      const double b = sk_log_partition_per_spin_naive(g, N, beta);
      CHECK(std::abs(a - b) <= 1e-13 * std::max(1.0, std::abs(b)));
    }
    // The half energies together with their mirror images are the 2^N
    // energies, as multisets.
    std::vector<double> half = sk_half_energies(g, N);
    std::vector<double> direct;
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    for (std::size_t c = 0; c < (std::size_t{1} << N); ++c) {
      if ((c >> (N - 1)) & 1U) continue;  // sigma_{N-1} = +1 half
      double e = 0.0;
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
          e += g[i * N + j] * (((c >> i) & 1U) ? -1.0 : 1.0) * (((c >> j) & 1U) ? -1.0 : 1.0);
      direct.push_back(e * scale);
    }
    std::sort(half.begin(), half.end());
    std::sort(direct.begin(), direct.end());
    REQUIRE(half.size() == direct.size());
    for (std::size_t k = 0; k < half.size(); ++k) CHECK(half[k] == doctest::Approx(direct[k]).epsilon(1e-12));
  }
}

TEST_CASE("sk free energy") {
  const McReport zero = sk_free_energy(10, 0.0, 20, kBase.substream(100));
  CHECK(zero.stderr_ == 0.0);
  for (double v : zero.samples) CHECK(v == std::numbers::ln2);
  CHECK(zero.estimate == std::numbers::ln2);
  CHECK(zero.n_samples == 20);
  CHECK(zero.seed == 42);
  CHECK(zero.label == "test-mc-oracle");

  CHECK_THROWS_AS(sk_free_energy(17, 1.0, 10, kBase), ValidationError);
  CHECK_THROWS_AS(sk_free_energy(8, 1.0, 1, kBase), ValidationError);

  // Annealed bound E log Z <= log E Z = N (log 2 + beta^2 / 2).
  const McReport f = sk_free_energy(8, 1.0, 400, kBase.substream(101));
  CHECK(f.estimate <= std::numbers::ln2 + 0.5 + 3.0 * f.stderr_);

  // Same draws: F_N(sqrt(2t)) = -F0_N(t) + log 2 + t draw by draw.
  const double t = 0.7;
  const McReport fn = sk_normalized_free_energy(8, t, 400, kBase.substream(101));
  const McReport fb = sk_free_energy(8, std::sqrt(2.0 * t), 400, kBase.substream(101));
  CHECK(fb.estimate == doctest::Approx(-fn.estimate + std::numbers::ln2 + t).epsilon(1e-13));
  CHECK(fn.estimate >= -3.0 * fn.stderr_);
}

TEST_CASE("mc reports are reproducible from the stream key") {
  const RngStream key(7, "repro", 3);
  const McReport a = sk_free_energy(9, 1.2, 50, key);
  const McReport b = sk_free_energy(9, 1.2, 50, key);
  CHECK(a.estimate == b.estimate);
  CHECK(a.stderr_ == b.stderr_);
  CHECK(a.samples == b.samples);
  CHECK(a.seed == 7);
  CHECK(a.index == 3);
  CHECK(a.inputs.at("beta") == 1.2);
  const McReport c = sk_free_energy(9, 1.2, 50, RngStream(8, "repro", 3));
  CHECK(c.estimate != a.estimate);

  const McReport r1 = rankone_free_energy(5, 0.4, 0.2, Prior::rademacher(), 30, key);
  const McReport r2 = rankone_free_energy(5, 0.4, 0.2, Prior::rademacher(), 30, key);
  CHECK(r1.samples == r2.samples);
  const RemReport m1 = rem_free_energy(10, 1.0, 20, key);
  const RemReport m2 = rem_free_energy(10, 1.0, 20, key);
  CHECK(m1.free_energy.samples == m2.free_energy.samples);
  CHECK(m1.extreme_points == m2.extreme_points);
}

TEST_CASE("overlap variance") {
  for (std::size_t N : {4u, 9u}) {
    const McReport v0 = overlap_variance(N, 0.0, 5, kBase.substream(200));
    CHECK(v0.estimate == doctest::Approx(1.0 / static_cast<double>(N)).epsilon(1e-12));
  }
  const McReport small = overlap_variance(12, 0.1, 100, kBase.substream(201));
  CHECK(small.estimate <= 2.0 / 12.0);
  // Var(R12) <= 1 saturates near 0.58 at t = 2 while the t = 0.1 value decays
  // like 1/N; the factor 5 separation is reached from N = 14 on.
  const McReport lo = overlap_variance(14, 0.1, 100, kBase.substream(201));
  const McReport hi = overlap_variance(14, 2.0, 100, kBase.substream(201));
  CHECK(lo.estimate <= 2.0 / 14.0);
  CHECK(hi.estimate >= 5.0 * lo.estimate);
  CHECK_THROWS_AS(overlap_variance(15, 0.1, 10, kBase), ValidationError);
}

TEST_CASE("rem free energy and extreme points") {
  const RemReport zero = rem_free_energy(12, 0.0, 10, kBase.substream(300));
  for (double v : zero.free_energy.samples) CHECK(v == std::numbers::ln2);
  const RemReport zero_n = rem_free_energy(12, 0.0, 10, kBase.substream(300), true);
  for (double v : zero_n.free_energy.samples) CHECK(v == 0.0);
  CHECK_THROWS_AS(rem_free_energy(23, 1.0, 10, kBase), ValidationError);

  const std::size_t N = 14;
  const RemReport r = rem_free_energy(N, 0.3, 400, kBase.substream(301));
  CHECK(r.free_energy.estimate <= std::numbers::ln2 + 0.3 + 3.0 * r.free_energy.stderr_);

  // Exact finite-N mean count in [0, inf): 2^N P(E >= a_N).
  const double a = rem_centring(N);
  const double expected = std::ldexp(0.5 * std::erfc(a / std::numbers::sqrt2), static_cast<int>(N));
  CHECK(std::abs(r.positive_count.estimate - expected) <= 3.0 * r.positive_count.stderr_);
  for (std::size_t d = 0; d < r.extreme_points.size(); ++d) {
    const auto& pts = r.extreme_points[d];
    CHECK(std::is_sorted(pts.begin(), pts.end(), std::greater<>()));
    CHECK(std::count_if(pts.begin(), pts.end(), [](double p) { return p >= 0.0; }) ==
          static_cast<long>(r.positive_count.samples[d]));
    if (!pts.empty()) CHECK(pts.back() >= r.point_floor);
  }
}

TEST_CASE("rank-one free energy") {
  const McReport zero = rankone_free_energy(6, 0.0, 0.0, Prior::rademacher(), 10, kBase.substream(400));
  for (double v : zero.samples) CHECK(v == 0.0);
  CHECK_THROWS_AS(rankone_free_energy(13, 0.1, 0.1, Prior::rademacher(), 10, kBase), ValidationError);
  CHECK_THROWS_AS(rankone_free_energy(4, 0.1, 0.1, Prior::gaussian(), 10, kBase), ValidationError);
  const Prior five = Prior::atomic({{-2, 0.2}, {-1, 0.2}, {0, 0.2}, {1, 0.2}, {2, 0.2}});
  CHECK_THROWS_AS(rankone_free_energy(9, 0.1, 0.1, five, 10, kBase), ValidationError);

  // N = 1, Rademacher: x^2 = 1 makes every x-free term drop out, leaving
  // t - h + E log cosh(2h + sqrt(2h) z) after the antithetic pairing cancels W.
  const double t = 0.3, h = 0.4;
  double oracle = t - h;
  for (const QuadNode& q : gauss_hermite_nodes(80)) oracle += q.w * std::log(std::cosh(2 * h + std::sqrt(2 * h) * q.x));
  const McReport one = rankone_free_energy(1, t, h, Prior::rademacher(), 4000, kBase.substream(401));
  CHECK(std::abs(one.estimate - oracle) <= 3.0 * one.stderr_);

  // Convexity of E F in (t, h) via common random numbers on a 3x3 stencil.
  const double step = 0.1, t0 = 0.4, h0 = 0.4;
  const RngStream crn = kBase.substream(402);
  auto F = [&](double a, double b) { return rankone_free_energy(5, a, b, Prior::rademacher(), 400, crn); };
  const McReport c = F(t0, h0);
  const McReport tp = F(t0 + step, h0), tm = F(t0 - step, h0);
  const McReport hp = F(t0, h0 + step), hm = F(t0, h0 - step);
  std::vector<double> dtt(c.samples.size()), dhh(c.samples.size());
  for (std::size_t i = 0; i < dtt.size(); ++i) {
    dtt[i] = tp.samples[i] - 2 * c.samples[i] + tm.samples[i];
    dhh[i] = hp.samples[i] - 2 * c.samples[i] + hm.samples[i];
  }
  const MeanStderr stt = mean_stderr(dtt), shh = mean_stderr(dhh);
  CHECK(stt.mean >= -3.0 * stt.stderr_);
  CHECK(shh.mean >= -3.0 * shh.stderr_);
}

TEST_CASE("nishimori identity and derivative bound") {
  const Prior rad = Prior::rademacher();
  const NishimoriReport null = nishimori_check(4, 0.0, 0.0, rad, 500, kBase.substream(500));
  CHECK(std::abs(null.first.lhs.estimate) <= 3.0 * null.first.lhs.stderr_);
  CHECK(std::abs(null.first.rhs.estimate) <= 1e-12);

  const NishimoriReport n = nishimori_check(5, 0.2, 0.3, rad, 3000, kBase.substream(501));
  CHECK(n.first.within(3.0));
  CHECK(n.second.within(3.0));
  CHECK(n.first.lhs.estimate >= -3.0 * n.first.lhs.stderr_);
  CHECK_THROWS_AS(nishimori_check(9, 0.2, 0.3, rad, 10, kBase), ValidationError);

  const RankOneDerivatives d = rankone_derivatives(5, 0.3, 0.5, rad, 1500, kBase.substream(502));
  CHECK(d.gap >= -3.0 * d.gap_stderr);
  CHECK(d.dh.estimate >= -3.0 * d.dh.stderr_);
  // d_h F = E<x.xbar> / N on independent draws.
  const NishimoriReport at = nishimori_check(5, 0.3, 0.5, rad, 1500, kBase.substream(503));
  const double se = std::hypot(d.dh.stderr_, at.first.lhs.stderr_ / 5.0);
  CHECK(std::abs(d.dh.estimate - at.first.lhs.estimate / 5.0) <= 3.0 * se);
  CHECK_THROWS_AS(rankone_derivatives(5, 0.0, 0.5, rad, 10, kBase), ValidationError);
}

TEST_CASE("gaussian integration by parts") {
  const IdentityCheck id = gibp_check(GibpFunction::identity, 1.7, 20000, kBase.substream(600));
  CHECK(id.rhs.estimate == doctest::Approx(1.7 * 1.7).epsilon(1e-12));
  CHECK(id.rhs.stderr_ <= 1e-12);
  CHECK(std::abs(id.lhs.estimate - 1.7 * 1.7) <= 3.0 * id.lhs.stderr_);

  const IdentityCheck sq = gibp_check(GibpFunction::square, 1.0, 20000, kBase.substream(601));
  CHECK(std::abs(sq.lhs.estimate) <= 3.0 * sq.lhs.stderr_);
  CHECK(std::abs(sq.rhs.estimate) <= 3.0 * sq.rhs.stderr_);

  for (auto F : {GibpFunction::tanh, GibpFunction::cos}) {
    const IdentityCheck c = gibp_check(F, 0.8, 100000, kBase.substream(602));
    CHECK(c.within(3.0));
  }
  // E tanh'(g) is far from 0, so the tanh check is not passing vacuously.
  const IdentityCheck th = gibp_check(GibpFunction::tanh, 1.0, 100000, kBase.substream(603));
  CHECK(th.rhs.estimate > 0.5);
  CHECK(parse_gibp_function("cos") == GibpFunction::cos);
  CHECK_THROWS_AS(parse_gibp_function("sin"), ValidationError);
  CHECK_THROWS_AS(gibp_check(GibpFunction::tanh, 0.0, 10, kBase), ValidationError);
}
