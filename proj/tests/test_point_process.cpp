#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "mfhj/error.hpp"
#include "mfhj/numerics.hpp"
#include "mfhj/point_process.hpp"

using namespace mfhj;

namespace {

const RngStream kBase(42, "test-point-process");

bool within(double a, double b, double sigma, double k = 3.0) { return std::abs(a - b) <= k * sigma; }

}  // namespace

TEST_CASE("poisson point process counts") {
  RngStream rs = kBase.substream(1);
  auto unif = [](RngStream& r) { return r.uniform(); };
  CHECK(sample_ppp(0.0, unif, rs).empty());
  CHECK_THROWS_AS(sample_ppp(INFINITY, unif, rs), ValidationError);

  const std::size_t reps = 100000;
  std::vector<double> count(reps), left(reps), right(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    RngStream s = kBase.substream(1000 + r);
    const auto pts = sample_ppp(3.0, unif, s);
    count[r] = static_cast<double>(pts.size());
    left[r] = static_cast<double>(std::count_if(pts.begin(), pts.end(), [](double x) { return x < 0.4; }));
    right[r] = static_cast<double>(std::count_if(pts.begin(), pts.end(), [](double x) { return x >= 0.4; }));
  }
  const MeanStderr m = mean_stderr(count);
  CHECK(within(m.mean, 3.0, m.stderr_));

  // Counts in disjoint regions are independent: sample correlation ~ N(0, 1/reps).
  const MeanStderr ml = mean_stderr(left), mr = mean_stderr(right);
  double cov = 0.0, vl = 0.0, vr = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    cov += (left[r] - ml.mean) * (right[r] - mr.mean);
    vl += (left[r] - ml.mean) * (left[r] - ml.mean);
    vr += (right[r] - mr.mean) * (right[r] - mr.mean);
  }
  CHECK(std::abs(cov / std::sqrt(vl * vr)) <= 3.0 / std::sqrt(static_cast<double>(reps)));
}

TEST_CASE("pdp sampling") {
  RngStream rs = kBase.substream(2);
  CHECK_THROWS_AS(sample_pdp(0.0, 10, rs), ValidationError);
  CHECK_THROWS_AS(sample_pdp(1.0, 10, rs), ValidationError);
  CHECK_THROWS_AS(sample_pdp(1.2, 10, rs), ValidationError);
  CHECK_THROWS_AS(sample_pdp(0.5, 0, rs), ValidationError);

  for (double zeta : {0.2, 0.5, 0.9}) {
    const PdpSample s = sample_pdp(zeta, 1000, rs);
    REQUIRE(s.points.size() == 1000);
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      CHECK(s.points[i] > 0.0);
      if (i > 0) CHECK(s.points[i] < s.points[i - 1]);
    }
    const auto v = s.weights();
    double sum = 0.0;
    for (double x : v) sum += x;
    CHECK(sum <= 1.0);
    CHECK(std::abs(sum + s.dust_weight() - 1.0) <= 1e-12);
    CHECK(1.0 - sum <= s.tail_bound / s.retained_sum() + 1e-15);
  }
}

TEST_CASE("pdp pushforward of the arrival-time construction") {
  // E #{u_n >= a} = int_a^inf zeta x^{-zeta-1} dx = a^{-zeta}
  const double zeta = 0.5;
  const std::size_t reps = 10000;
  for (double a : {0.5, 1.0, 2.0}) {
    std::vector<double> c(reps);
    for (std::size_t r = 0; r < reps; ++r) {
      RngStream s = kBase.substream(20000 + r);
      const PdpSample p = sample_pdp(zeta, 1000, s);
      c[r] = static_cast<double>(std::count_if(p.points.begin(), p.points.end(), [a](double u) { return u >= a; }));
    }
    const MeanStderr m = mean_stderr(c);
    CHECK(within(m.mean, std::pow(a, -zeta), m.stderr_));
  }
}

TEST_CASE("pdp moment is stable under the cutoff") {
  // E (sum u_n)^{0.3}: the same arrival times, truncated at 1e3 and 1e4.
  const std::size_t reps = 4000;
  std::vector<double> small(reps), large(reps), diff(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    RngStream a = kBase.substream(40000 + r), b = kBase.substream(40000 + r);
    const PdpSample p = sample_pdp(0.5, 1000, a);
    const PdpSample q = sample_pdp(0.5, 10000, b);
    small[r] = std::pow(p.retained_sum() + p.tail_mass, 0.3);
    large[r] = std::pow(q.retained_sum() + q.tail_mass, 0.3);
    diff[r] = large[r] - small[r];
  }
  const MeanStderr ms = mean_stderr(small), ml = mean_stderr(large), md = mean_stderr(diff);
  CHECK(std::isfinite(ms.mean));
  CHECK(std::abs(ms.mean - ml.mean) <= ms.stderr_);
  CHECK(std::abs(md.mean) <= 1e-3);
}

TEST_CASE("alias table reproduces its weights") {
  const std::vector<double> w{0.5, 0.0, 0.2, 0.3};
  const AliasTable t(w);
  RngStream rs = kBase.substream(3);
  std::vector<double> c(4, 0.0);
  const int n = 200000;
  for (int i = 0; i < n; ++i) c[t.sample(rs)] += 1.0;
  CHECK(c[1] == 0.0);
  for (std::size_t i = 0; i < 4; ++i) CHECK(within(c[i] / n, w[i], std::sqrt(w[i] * (1 - w[i]) / n) + 1e-12));
  CHECK_THROWS_AS(AliasTable(std::vector<double>{0.0, 0.0}), ValidationError);
}

TEST_CASE("cumulative table reproduces its weights") {
  const std::vector<double> w{0.5, 0.0, 0.2, 0.3};
  const CumulativeTable t(w);
  CHECK(t.size() == 4);
  RngStream rs = kBase.substream(4);
  std::vector<double> c(4, 0.0);
  const int n = 200000;
  for (int i = 0; i < n; ++i) c[t.sample(rs)] += 1.0;
  CHECK(c[1] == 0.0);
  for (std::size_t i = 0; i < 4; ++i) CHECK(within(c[i] / n, w[i], std::sqrt(w[i] * (1 - w[i]) / n) + 1e-12));
  CHECK_THROWS_AS(CumulativeTable(std::vector<double>{}), ValidationError);
  CHECK_THROWS_AS(CumulativeTable(std::vector<double>{1.0, -0.1}), ValidationError);
}

TEST_CASE("cumulative table draws survive refining the last cell") {
  // Splitting the final weight into several pieces of the same total leaves
  // every draw that lands before it unchanged. This is what couples replica
  // picks across cutoffs.
  RngStream gen = kBase.substream(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(gen.uniform() * 20);
    std::vector<double> coarse(n);
    for (double& x : coarse) x = gen.exponential();
    const double dust = gen.exponential();
    coarse.push_back(dust);
    std::vector<double> fine(coarse.begin(), coarse.end() - 1);
    const double cut = gen.uniform();
    fine.push_back(cut * dust);
    fine.push_back((1.0 - cut) * dust);
    const CumulativeTable a(coarse), b(fine);
    RngStream ra = kBase.substream(600 + trial), rb = kBase.substream(600 + trial);
    for (int k = 0; k < 200; ++k) {
      const std::size_t ia = a.sample(ra), ib = b.sample(rb);
      if (ia < n) CHECK(ia == ib);
      else CHECK(ib >= n);
    }
  }
}

TEST_CASE("a larger cutoff keeps the points of the smaller one") {
  for (double zeta : {0.3, 0.5, 0.8}) {
    RngStream a = kBase.substream(700), b = kBase.substream(700);
    const PdpSample p = sample_pdp(zeta, 100, a);
    const PdpSample q = sample_pdp(zeta, 400, b);
    REQUIRE(q.points.size() >= p.points.size());
    for (std::size_t i = 0; i < p.points.size(); ++i) CHECK(p.points[i] == q.points[i]);
    CHECK(q.tail_mass < p.tail_mass);
  }
}

TEST_CASE("pdp invariance of the log mean") {
  {
    const auto r = check_pdp_invariance(0.4, constant_mark(2.5), 50, 1000, kBase.substream(4));
    CHECK(std::abs(r.lhs - std::log(2.5)) <= 1e-12);
    CHECK(std::abs(r.rhs - std::log(2.5)) <= 1e-15);
  }
  CHECK(std::abs(lognormal_mark(0.3).moment(0.3) - 1.0) <= 1e-15);
  {
    const auto r = check_pdp_invariance(0.5, lognormal_mark(0.5), 10000, 1000, kBase.substream(5));
    CHECK(r.rhs == 0.0);
    CHECK(within(r.lhs, r.rhs, r.stderr_));
  }
  {
    const auto r = check_pdp_invariance(0.5, uniform_mark(1.0, 2.0), 10000, 1000, kBase.substream(6));
    // int_1^2 sqrt(x) dx = (2/3)(2^{1.5} - 1)
    CHECK(std::abs(r.rhs - 2.0 * std::log(2.0 / 3.0 * (std::pow(2.0, 1.5) - 1.0))) <= 1e-14);
    CHECK(within(r.lhs, r.rhs, r.stderr_));
  }
}

TEST_CASE("ghirlanda-guerra identities for the pdp") {
  {
    const auto r = gg_identity_check(0.3, 1, named_overlap_function("one"), 20000, 1000, kBase.substream(7));
    CHECK(r.lhs == r.rhs);
    CHECK(within(r.mean_r12, 0.7, r.mean_r12_stderr));
  }
  {
    const auto r = gg_identity_check(0.5, 2, named_overlap_function("r12"), 100000, 1000, kBase.substream(8));
    CHECK(within(r.lhs, r.rhs, r.diff_stderr));
    // E sum v^3 = (1 - zeta)(2 - zeta)/2
    CHECK(within(r.lhs, 0.375, std::sqrt(0.375 * 0.625 / 100000.0)));
  }
  {
    const auto r = gg_identity_check(0.4, 3, named_overlap_function("r12_r23"), 20000, 1000, kBase.substream(9));
    CHECK(within(r.lhs, r.rhs, r.diff_stderr));
  }
  CHECK_THROWS_AS(named_overlap_function("r99"), ValidationError);
}

TEST_CASE("cascade structure") {
  RngStream rs = kBase.substream(10);
  CHECK_THROWS_AS(sample_cascade({0.7, 0.3}, {10, 10}, rs), ValidationError);
  CHECK_THROWS_AS(sample_cascade({0.3, 0.3}, {10, 10}, rs), ValidationError);
  CHECK_THROWS_AS(sample_cascade({0.3, 1.0}, {10, 10}, rs), ValidationError);

  // One level is exactly the PDP weights.
  {
    RngStream a = kBase.substream(11), b = kBase.substream(11).substream(kCascadeRootId);
    const CascadeTree t = sample_cascade({0.4}, {500}, a);
    const PdpSample p = sample_pdp(0.4, 500, b);
    const auto tv = t.normalized_weights();
    const auto pv = p.weights();
    REQUIRE(tv.size() == pv.size() + 1);
    for (std::size_t i = 0; i < pv.size(); ++i) CHECK(std::abs(tv[i] - pv[i]) <= 1e-14 * pv[0]);
    CHECK(std::abs(tv.back() - p.dust_weight()) <= 1e-14);
  }

  const std::vector<double> z{0.2, 0.5, 0.8};
  const std::vector<std::size_t> cut{8, 6, 30};
  RngStream replay = rs;
  const CascadeTree t = sample_cascade(z, cut, rs);
  REQUIRE(t.levels[2].size() == 8 * 6 * 30);
  // w_alpha is the product of u along the path: replay the per-node draws
  // (root, then level-1 nodes, then level-2 nodes) from their id streams.
  auto node_pdp = [&](double zeta, std::size_t c, std::uint64_t id) {
    RngStream s = replay.substream(id);
    return sample_pdp(zeta, c, s);
  };
  std::vector<PdpSample> per_node{node_pdp(z[0], cut[0], kCascadeRootId)};
  for (const CascadeNode& n : t.levels[0]) per_node.push_back(node_pdp(z[1], cut[1], n.id));
  for (const CascadeNode& n : t.levels[1]) per_node.push_back(node_pdp(z[2], cut[2], n.id));
  for (std::size_t leaf = 0; leaf < t.levels[2].size(); ++leaf) {
    const CascadeNode& n = t.levels[2][leaf];
    const std::size_t a1 = t.ancestor(leaf, 1), a2 = t.ancestor(leaf, 2);
    CHECK(a2 == n.parent);
    CHECK(t.levels[1][a2].parent == a1);
    const double w = per_node[0].points[a1] * per_node[1 + a1].points[t.levels[1][a2].child] *
                     per_node[9 + a2].points[n.child];
    CHECK(std::abs(n.log_w - std::log(w)) <= 1e-12 * std::max(1.0, std::abs(n.log_w)));
  }
  const auto v = t.normalized_weights();
  double leaves = 0.0;
  for (std::size_t i = 0; i < t.levels[2].size(); ++i) leaves += v[i];
  CHECK(std::abs(leaves + t.weight_sum_deficit() - 1.0) <= 1e-12);
  CHECK(t.internal_deficit >= 0.0);
  CHECK(t.internal_deficit < 0.5);

  const auto law = overlap_law(t);
  double s = 0.0;
  for (double x : law) {
    CHECK(x >= -1e-15);
    s += x;
  }
  CHECK(std::abs(s - 1.0) <= 1e-12);
  CHECK(t.meet_depth(0, 0) == 3);
  CHECK(t.meet_depth(0, 1) == 2);
}

TEST_CASE("cascade overlap statistics ignore sibling labels") {
  RngStream rs = kBase.substream(12);
  const CascadeTree t = sample_cascade({0.3, 0.6, 0.9}, {10, 7, 40}, rs);
  const auto law = overlap_law(t);
  for (int rep = 0; rep < 5; ++rep) {
    const CascadeTree u = relabel_cascade(t, rs);
    CHECK(u.log_total == t.log_total);
    CHECK(overlap_law(u) == law);
    // The relabeled tree is really permuted, yet leaf ancestry is preserved.
    std::vector<std::uint64_t> a, b;
    for (const auto& n : t.levels[2]) a.push_back(n.id);
    for (const auto& n : u.levels[2]) b.push_back(n.id);
    CHECK(a != b);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
}

TEST_CASE("cascade overlap law") {
  // Reduced count; the full 1e5 run lives in the acceptance suite.
  const auto r = cascade_overlap_mc({0.3, 0.7}, default_cascade_cutoffs(2), 10000, kBase.substream(13));
  double s = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(within(r.freq[k], r.target[k], r.stderr_[k]));
    s += r.freq[k];
  }
  CHECK(s == 1.0);
  CHECK(r.target == std::vector<double>{0.3, 0.7 - 0.3, 1.0 - 0.7});
}

TEST_CASE("cascade recursion and functional") {
  const CascadeIntegrand constant{[](const std::vector<double>&) { return 0.7; }, 1.0};
  CHECK(std::abs(cascade_recursion({0.3, 0.6}, constant) - 0.7) <= 1e-13);
  const auto c = cascade_functional({0.3, 0.6}, {20, 10}, constant, 20, kBase.substream(14));
  CHECK(std::abs(c.lhs - 0.7) <= 1e-12);

  const CascadeIntegrand last{[](const std::vector<double>& w) { return w[1]; }, 1.0};
  const double exact = 2.0 * std::log(2.0 * (std::exp(0.5) - 1.0));
  CHECK(std::abs(cascade_recursion({0.5}, last) - exact) <= 1e-13);
  const auto r1 = cascade_functional({0.5}, default_cascade_cutoffs(1), last, 10000, kBase.substream(15));
  CHECK(within(r1.lhs, exact, r1.stderr_));

  const CascadeIntegrand mid{[](const std::vector<double>& w) { return 0.5 * (w[1] + w[2]); }, 1.0};
  const auto r2 = cascade_functional({0.3, 0.7}, default_cascade_cutoffs(2), mid, 2000, kBase.substream(16));
  CHECK(std::abs(r2.lhs - r2.rhs) <= std::max(0.02, 3.0 * r2.stderr_));

  const CascadeIntegrand liar{[](const std::vector<double>& w) { return 5.0 * w[1]; }, 1.0};
  CHECK_THROWS_AS(cascade_recursion({0.5}, liar), ValidationError);
  const CascadeIntegrand unbounded{[](const std::vector<double>& w) { return w[1]; }, INFINITY};
  CHECK_THROWS_AS(cascade_recursion({0.5}, unbounded), ValidationError);
}

TEST_CASE("extreme value limits at reduced counts") {
  CHECK_THROWS_AS(extreme_value_check(ExtremeLaw::pareto, 1.0, 999, 10, kBase), ValidationError);
  CHECK(std::abs(gaussian_extreme_scale(1e5) -
                 std::sqrt(2 * std::log(1e5) - std::log(std::log(1e5)) - std::log(4 * M_PI))) <= 1e-15);
  // 400 replicas: the KS statistic of a correct law is below 1.63/sqrt(400) ~ 0.08 with 99% probability.
  const auto p = extreme_value_check(ExtremeLaw::pareto, 1.0, 10000, 400, kBase.substream(17));
  CHECK(p.ks <= 0.08);
  const auto b = extreme_value_check(ExtremeLaw::bounded_poly, 1.0, 10000, 400, kBase.substream(18));
  CHECK(b.ks <= 0.08);
  for (double y : b.rescaled_maxima) CHECK(y <= 0.0);
  const auto g = extreme_value_check(ExtremeLaw::gaussian, 0.0, 10000, 400, kBase.substream(19));
  CHECK(g.ks <= 0.1);
}
