#include <cmath>
#include <numeric>

#include "doctest.h"
#include "mfhj/error.hpp"
#include "mfhj/grid.hpp"
#include "mfhj/numerics.hpp"
#include "mfhj/path.hpp"
#include "mfhj/prior.hpp"
#include "mfhj/quadrature.hpp"
#include "mfhj/rng.hpp"

using namespace mfhj;

TEST_CASE("prior presets") {
  const Prior u = Prior::uniform_pm1();
  CHECK(u.mean() == 0.0);
  CHECK(u.second_moment() == 1.0);
  CHECK(u.support_bound() == 1.0);
  for (double p : {0.01, 0.05, 0.3, 0.9}) {
    const Prior s = Prior::sparse(p);
    CHECK(std::abs(s.mean()) < 1e-15);
    CHECK(s.second_moment() == doctest::Approx(1.0).epsilon(1e-14));
  }
  const Prior b = Prior::bernoulli_pm1(0.7);
  CHECK(b.mean() == doctest::Approx(0.4));
  CHECK(std::isinf(Prior::gaussian().support_bound()));
}

TEST_CASE("prior validation and parsing") {
  CHECK_THROWS_AS(Prior::atomic({{1.0, 0.5}, {-1.0, 0.4}}), ValidationError);
  CHECK_THROWS_AS(Prior::atomic({{1.0, 1.0}, {-1.0, 0.0}}), ValidationError);
  CHECK_NOTHROW(Prior::atomic({{1.0, 0.5}, {-1.0, 0.5 + 1e-13}}));
  CHECK(Prior::parse("sparse(0.05)").atoms().size() == 3);
  CHECK(Prior::parse("bernoulli(0.25)").mean() == doctest::Approx(-0.5));
  CHECK(Prior::parse("gaussian").kind() == Prior::Kind::gaussian);
  CHECK_THROWS_AS(Prior::parse("sparse(abc)"), ValidationError);
  CHECK_THROWS_AS(Prior::parse("laplace"), ValidationError);
  CHECK_THROWS_AS(Prior::parse("bernoulli(1.5)"), ValidationError);
}

TEST_CASE("gauss-hermite examples") {
  CHECK_THROWS_AS(gauss_hermite_nodes(0), ValidationError);
  const auto one = gauss_hermite_nodes(1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].x == 0.0);
  CHECK(one[0].w == 1.0);

  const auto r20 = gauss_hermite_nodes(20);
  double wsum = 0.0, m2 = 0.0;
  for (auto [x, w] : r20) {
    wsum += w;
    m2 += w * x * x;
  }
  CHECK(std::abs(wsum - 1.0) <= 1e-12);
  CHECK(std::abs(m2 - 1.0) <= 1e-12);

  double c = 0.0;
  for (auto [x, w] : gauss_hermite_nodes(40)) c += w * std::cosh(x);
  CHECK(std::abs(c - std::exp(0.5)) <= 1e-10);
}

TEST_CASE("gauss-hermite is exact on polynomials of degree <= 2n-1") {
  // E Z^{2k} = (2k-1)!!
  for (std::size_t n : {3u, 8u, 16u, 40u, 64u}) {
    const auto rule = gauss_hermite_nodes(n);
    for (std::size_t d = 0; d <= 2 * n - 1 && d <= 24; ++d) {
      double s = 0.0, scale = 0.0;
      for (auto [x, w] : rule) {
        s += w * std::pow(x, static_cast<double>(d));
        scale += w * std::pow(std::abs(x), static_cast<double>(d));
      }
      double exact = 0.0;
      if (d % 2 == 0) {
        exact = 1.0;
        for (std::size_t k = 1; k < d; k += 2) exact *= static_cast<double>(k);
      }
      // relative to E|Z|^d so that odd-degree cancellation roundoff is not counted
      CHECK(std::abs(s - exact) <= 1e-10 * std::max(1.0, scale));
    }
  }
}

TEST_CASE("gauss-legendre on the unit interval") {
  for (std::size_t n : {1u, 5u, 20u}) {
    const auto rule = gauss_legendre_unit(n);
    for (std::size_t d = 0; d <= 2 * n - 1; ++d) {
      double s = 0.0;
      for (auto [x, w] : rule) s += w * std::pow(x, static_cast<double>(d));
      CHECK(std::abs(s - 1.0 / static_cast<double>(d + 1)) <= 1e-13);
    }
  }
}

TEST_CASE("path_l1_distance examples") {
  const PiecewisePath q({0.3, 0.6}, {0.1, 0.5, 0.9});
  CHECK(path_l1_distance(q, q) == 0.0);
  CHECK(path_l1_distance(PiecewisePath(1.0), PiecewisePath(0.0)) == 1.0);
  CHECK(path_l1_distance(PiecewisePath({0.5}, {0.0, 2.0}), PiecewisePath(1.0)) ==
        doctest::Approx(1.0).epsilon(1e-15));
}

namespace {

PiecewisePath random_path(RngStream& rng, std::size_t max_breaks) {
  const std::size_t k = static_cast<std::size_t>(rng.uniform() * static_cast<double>(max_breaks + 1));
  std::vector<double> z(k), l(k + 1);
  for (double& v : z) v = rng.uniform();
  for (double& v : l) v = 2.0 * rng.uniform();
  std::sort(z.begin(), z.end());
  std::sort(l.begin(), l.end());
  z.erase(std::unique(z.begin(), z.end()), z.end());
  l.resize(z.size() + 1);
  return PiecewisePath(z, l);
}

}  // namespace

TEST_CASE("path_l1_distance is a metric on random paths") {
  RngStream rng(42, "path-metric");
  for (int trial = 0; trial < 300; ++trial) {
    const PiecewisePath a = random_path(rng, 4);
    const PiecewisePath b = random_path(rng, 4);
    const PiecewisePath c = random_path(rng, 4);
    const double ab = path_l1_distance(a, b);
    CHECK(ab == path_l1_distance(b, a));
    CHECK(ab >= 0.0);
    CHECK(ab <= path_l1_distance(a, c) + path_l1_distance(c, b) + 1e-14);
    CHECK(path_l1_distance(a, a.canonical()) == 0.0);
    if (ab == 0.0) CHECK(a.canonical() == b.canonical());
  }
}

TEST_CASE("path validation, inverse and canonical form") {
  CHECK_THROWS_AS(PiecewisePath({0.5, 0.4}, {0, 1, 2}), ValidationError);
  CHECK_THROWS_AS(PiecewisePath({0.5}, {1.0, 0.5}), ValidationError);
  CHECK_THROWS_AS(PiecewisePath({1.0}, {0.0, 0.5}), ValidationError);
  CHECK_THROWS_AS(PiecewisePath({0.5}, {-0.1, 0.5}), ValidationError);

  const PiecewisePath q({0.2, 0.5, 0.8}, {0.1, 0.1, 0.4, 0.7});
  const PiecewisePath c = q.canonical();
  CHECK(c.zetas() == std::vector<double>{0.5, 0.8});
  CHECK(c.levels() == std::vector<double>{0.1, 0.4, 0.7});
  CHECK(q.q1() == 0.7);
  // inverse: 0 below q_0, zeta_{k+1} on [q_k, q_{k+1}), 1 past q_K
  CHECK(c.inverse(0.05) == 0.0);
  CHECK(c.inverse(0.1) == 0.5);
  CHECK(c.inverse(0.3) == 0.5);
  CHECK(c.inverse(0.4) == 0.8);
  CHECK(c.inverse(0.7) == 1.0);
  CHECK(q(0.0) == 0.1);
  CHECK(q(0.5) == 0.4);
  CHECK(q(0.99) == 0.7);
}

TEST_CASE("path round trip through DistFn is the identity") {
  RngStream rng(42, "path-roundtrip");
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> z, l;
    const std::size_t k = 1 + static_cast<std::size_t>(rng.uniform() * 4);
    for (std::size_t i = 0; i < k; ++i) z.push_back(rng.uniform());
    for (std::size_t i = 0; i <= k; ++i) l.push_back(rng.uniform());
    std::sort(z.begin(), z.end());
    std::sort(l.begin(), l.end());
    const PiecewisePath q(z, l);
    const DistFn d = q.to_distfn();
    const PiecewisePath back = d.to_path();
    CHECK(back == q);
    // zeta is right-continuous inverse of q
    for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) CHECK(d(s) == q.inverse(s));
  }
  const DistFn d = DistFn::from_jumps({0.7, 0.2}, {0.25, 0.75});
  CHECK(d.locations() == std::vector<double>{0.2, 0.7});
  CHECK(d(0.1) == 0.0);
  CHECK(d(0.2) == 0.75);
  CHECK(d(1.0) == 1.0);
  // int_0^1 s zeta(s) ds = 0.75 (1 - 0.04)/2 + 0.25 (1 - 0.49)/2
  CHECK(d.t_zeta_integral() == doctest::Approx(0.75 * 0.48 + 0.25 * 0.255));
}

TEST_CASE("grid function flags and interpolation") {
  const UniformGrid g(-1.0, 1.0, 5);
  CHECK(g.x(2) == 0.0);
  const double inf = std::numeric_limits<double>::infinity();
  GridFunction f(g, {inf, 1.0, 0.0, 1.0, inf}, {0, 1, 1, 1, 0});
  CHECK(f.first_finite() == 1);
  CHECK(f.last_finite() == 3);
  CHECK(!f.value(0).has_value());
  CHECK(*f.interpolate(0.25) == doctest::Approx(0.5));
  CHECK(!f.interpolate(-0.75).has_value());
  CHECK(!f.interpolate(2.0).has_value());
  CHECK(f.lipschitz() == doctest::Approx(2.0));
  CHECK_THROWS_AS(GridFunction(g, {1, inf, 1, 1, 1}, {1, 0, 1, 1, 1}), ValidationError);
  CHECK_THROWS_AS(GridFunction(g, {1, 1, 1, 1, 1}, {0, 0, 0, 0, 0}), ValidationError);
  CHECK_THROWS_AS(UniformGrid(1.0, 1.0, 4), ValidationError);
}

TEST_CASE("rng determinism and moments") {
  RngStream a(42, "gauss", 3);
  RngStream b(42, "gauss", 3);
  CHECK(rng_draw_gaussian(a, 1000) == rng_draw_gaussian(b, 1000));
  RngStream c(42, "gauss", 4);
  RngStream d(42, "gauss", 3);
  CHECK(rng_draw_gaussian(c, 10) != rng_draw_gaussian(d, 10));

  RngStream s(42, "moments");
  const auto v = rng_draw_gaussian(s, 1000000);
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= static_cast<double>(v.size() - 1);
  CHECK(std::abs(mean) <= 4e-3);
  CHECK(std::abs(var - 1.0) <= 1e-2);
}

TEST_CASE("rng streams are uncorrelated and poisson has the right mean") {
  RngStream a(42, "corr", 0);
  RngStream b(42, "corr", 1);
  const std::size_t n = 200000;
  double sab = 0.0;
  for (std::size_t i = 0; i < n; ++i) sab += a.normal() * b.normal();
  CHECK(std::abs(sab / static_cast<double>(n)) <= 4.0 / std::sqrt(static_cast<double>(n)));

  RngStream p(42, "poisson");
  for (double mean : {0.5, 3.0, 40.0}) {
    double s = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double k = static_cast<double>(p.poisson(mean));
      s += k;
      ss += k * k;
    }
    const double m = s / static_cast<double>(n);
    const double var = ss / static_cast<double>(n) - m * m;
    CHECK(std::abs(m - mean) <= 4.0 * std::sqrt(mean / static_cast<double>(n)));
    CHECK(var == doctest::Approx(mean).epsilon(0.03));
  }
}

TEST_CASE("scan_maximize keeps endpoint maximizers exact and refines interior ones") {
  const auto r = scan_maximize([](double x) { return -x; }, 0.0, 3.0, 101);
  CHECK(r.x == 0.0);
  const auto s = scan_maximize([](double x) { return -(x - 0.123456) * (x - 0.123456); }, -1.0, 1.0, 101);
  CHECK(std::abs(s.x - 0.123456) < 1e-7);
  // ties resolve to the smallest node
  const auto t = scan_maximize([](double) { return 1.0; }, -2.0, 2.0, 11);
  CHECK(t.x == -2.0);
}

TEST_CASE("nelder-mead and statistics helpers") {
  const auto r = nelder_mead(
      [](const std::vector<double>& x) { return (x[0] - 1) * (x[0] - 1) + 3 * (x[1] + 2) * (x[1] + 2); },
      {0.0, 0.0}, 0.5, 1e-9, 2000);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.x[1] == doctest::Approx(-2.0).epsilon(1e-6));
  const std::vector<double> v{1, 2, 3, 4};
  const auto ms = mean_stderr(v);
  CHECK(ms.mean == 2.5);
  CHECK(ms.stderr_ == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(ks_statistic({0.5}, [](double x) { return x; }) == 0.5);
  const std::vector<double> lv{1, 2, 3};
  CHECK(log_sum_exp(lv) == doctest::Approx(std::log(std::exp(1) + std::exp(2) + std::exp(3))));
}
