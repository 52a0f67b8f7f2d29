#include <cmath>

#include "doctest.h"
#include "mfhj/curie_weiss.hpp"
#include "mfhj/error.hpp"

using namespace mfhj;

namespace {

CwParams cw(double t, double h) {
  CwParams p;
  p.t = t;
  p.h = h;
  return p;
}

}  // namespace

TEST_CASE("finite free energy examples") {
  for (std::size_t N : {1u, 7u, 100u, 5000u})
    for (double h : {0.0, 0.3, -1.2}) CHECK(finite_free_energy(N, cw(0.0, h)) == doctest::Approx(std::log(std::cosh(h))).epsilon(1e-12));
  for (double t : {0.2, 1.0})
    for (double h : {0.0, 0.5}) CHECK(finite_free_energy(1, cw(t, h)) == doctest::Approx(t + std::log(std::cosh(h))));
  CHECK_THROWS_AS(finite_free_energy(10'000'001, cw(1, 0)), ValidationError);
  CHECK_THROWS_AS(finite_free_energy(0, cw(1, 0)), ValidationError);
  CHECK(std::abs(finite_free_energy(4000, cw(1.0, 0.0)) - limit_free_energy(cw(1.0, 0.0)).value) <= 0.01);
}

TEST_CASE("finite free energy matches brute-force enumeration for small N") {
  // generalized xi(x) = x^3 + x^2/2 summed over all 2^N configurations
  CwParams p = cw(0.7, -0.2);
  p.xi_tag = CwParams::Xi::custom;
  p.xi = [](double x) { return x * x * x + 0.5 * x * x; };
  p.xi_even = false;
  const std::size_t N = 10;
  double z = 0.0;
  for (unsigned mask = 0; mask < (1u << N); ++mask) {
    const double s = (2.0 * __builtin_popcount(mask) - N) / N;
    z += std::exp(N * (p.t * p.xi_eval(s) + p.h * s));
  }
  CHECK(finite_free_energy(N, p) == doctest::Approx(std::log(z / (1u << N)) / N).epsilon(1e-13));
}

TEST_CASE("limit free energy examples") {
  for (double h : {0.0, 0.1, -0.7, 2.5}) CHECK(std::abs(limit_free_energy(cw(0.0, h)).value - std::log(std::cosh(h))) <= 1e-8);
  const CwLimit sub = limit_free_energy(cw(0.4, 0.0));
  CHECK(sub.value == 0.0);
  CHECK(sub.maximizer == 0.0);
  const CwLimit at1 = limit_free_energy(cw(1.0, 0.0));
  CHECK(at1.value > 0.0);
  double m0 = 0.0;
  for (const auto& fp : magnetization_fixed_points(1.0, 0.0)) m0 = std::max(m0, fp.m);
  CHECK(at1.value == doctest::Approx(m0 * m0 - binary_entropy_dual(m0)).epsilon(1e-12));
  CHECK(std::abs(std::abs(at1.maximizer) - m0) < 1e-6);
  CHECK(limit_free_energy(cw(kCwCriticalT, 0.0)).value == 0.0);
}

TEST_CASE("binary entropy dual endpoints") {
  CHECK(binary_entropy_dual(1.0) == std::log(2.0));
  CHECK(binary_entropy_dual(-1.0) == std::log(2.0));
  CHECK(binary_entropy_dual(0.0) == 0.0);
  CHECK(std::abs(binary_entropy_dual(1.0 - 1e-15) - std::log(2.0)) < 1e-12);
}

TEST_CASE("fixed points and phase transition") {
  const auto sub = magnetization_fixed_points(0.4, 0.0);
  REQUIRE(sub.size() == 1);
  CHECK(sub[0].m == 0.0);
  CHECK(sub[0].type == FixedPoint::Type::max);

  const auto sup = magnetization_fixed_points(0.6, 0.0);
  REQUIRE(sup.size() == 3);
  int maxima = 0;
  for (const auto& fp : sup) {
    CHECK(fp.residual <= 1e-12);
    if (fp.type == FixedPoint::Type::max) {
      ++maxima;
      CHECK(std::abs(fp.m) > std::sqrt(1.0 / 6.0));
    }
  }
  CHECK(maxima == 2);
  CHECK(sup[0].m == doctest::Approx(-sup[2].m).epsilon(1e-12));

  const auto field = magnetization_fixed_points(0.6, 0.01);
  double best_m = 0.0, best = -1e300;
  for (const auto& fp : field) {
    const double v = 0.6 * fp.m * fp.m + 0.01 * fp.m - binary_entropy_dual(fp.m);
    if (fp.type == FixedPoint::Type::max && v > best) {
      best = v;
      best_m = fp.m;
    }
  }
  CHECK(best_m > 0.0);
  CHECK(limit_free_energy(cw(0.6, 0.01)).maximizer == doctest::Approx(best_m).epsilon(1e-6));
}

TEST_CASE("critical exponents") {
  const double slope = critical_exponents(ExponentProbe::delta);
  CHECK(std::abs(slope - 4.0 / 3.0) <= 0.05);
  CHECK(std::abs(critical_exponents(ExponentProbe::beta) - 0.5) <= 0.05);
}

TEST_CASE("convergence, magnetization bounds, first-order condition, symmetry") {
  for (double t : {0.2, 0.5, 1.0, 1.4}) {
    for (double h : {0.0, 0.1, 0.6}) {
      const CwLimit lim = limit_free_energy(cw(t, h));
      double prev = 1e300;
      for (std::size_t N : {250u, 1000u, 4000u}) {
        const double gap = std::abs(finite_free_energy(N, cw(t, h)) - lim.value);
        CHECK(gap <= prev + 1e-3);
        prev = gap;
        const double e = 1e-5;
        const double d = (finite_free_energy(N, cw(t, h + e)) - finite_free_energy(N, cw(t, h - e))) / (2 * e);
        CHECK(d >= -1.0);
        CHECK(d <= 1.0);
      }
      CHECK(std::abs(lim.maximizer - std::tanh(h + 2 * t * lim.maximizer)) <= 1e-6);
      CHECK(limit_free_energy(cw(t, -h)).value == lim.value);
    }
  }
}
