#include "mfhj/curie_weiss.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mfhj/error.hpp"
#include "mfhj/grid.hpp"
#include "mfhj/numerics.hpp"

namespace mfhj {

double binary_entropy_dual(double m) {
  if (m >= 1.0 || m <= -1.0) return std::numbers::ln2;
  // (1+m)/2 log(1+m) + (1-m)/2 log(1-m), log1p for accuracy near 0
  return 0.5 * (1.0 + m) * std::log1p(m) + 0.5 * (1.0 - m) * std::log1p(-m);
}

double finite_free_energy(std::size_t N, const CwParams& p) {
  require(N >= 1, "N must be at least 1");
  require(N <= 10'000'000, "N above 1e7 rejected (cost guard)");
  require(p.t >= 0.0, "t must be non-negative");
  const double n = static_cast<double>(N);
  std::vector<double> terms(N + 1);
  const double lg_n1 = std::lgamma(n + 1.0);
  for (std::size_t k = 0; k <= N; ++k) {
    const double kk = static_cast<double>(k);
    const double m = (2.0 * kk - n) / n;
    const double log_binom = lg_n1 - std::lgamma(kk + 1.0) - std::lgamma(n - kk + 1.0);
    terms[k] = log_binom - n * std::numbers::ln2 + n * (p.t * p.xi_eval(m) + p.h * m);
  }
  return log_sum_exp(terms) / n;
}

CwLimit limit_free_energy(const CwParams& p, std::size_t nodes) {
  require(p.t >= 0.0, "t must be non-negative");
  const bool flip = p.even() && p.h < 0.0;
  const double h = flip ? -p.h : p.h;
  auto objective = [&](double m) { return p.t * p.xi_eval(m) + h * m - binary_entropy_dual(m); };
  const ScanResult r = scan_maximize(objective, -1.0, 1.0, nodes);
  return {r.value, flip ? -r.x : r.x};
}

std::vector<FixedPoint> magnetization_fixed_points(double t, double h, std::size_t nodes) {
  require(t >= 0.0, "t must be non-negative");
  auto g = [&](double m) { return m - std::tanh(h + 2.0 * t * m); };
  auto dg = [&](double m) {
    const double th = std::tanh(h + 2.0 * t * m);
    return 1.0 - 2.0 * t * (1.0 - th * th);
  };
  const UniformGrid grid(-1.0, 1.0, nodes);
  std::vector<double> roots;
  double x_prev = grid.x(0);
  double g_prev = g(x_prev);
  if (g_prev == 0.0) roots.push_back(x_prev);
  for (std::size_t i = 1; i < grid.n; ++i) {
    const double x = grid.x(i);
    const double gx = g(x);
    if (gx == 0.0) {
      roots.push_back(x);
    } else if ((g_prev < 0.0 && gx > 0.0) || (g_prev > 0.0 && gx < 0.0)) {
      double a = x_prev, b = x, ga = g_prev;
      for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        const double mid = 0.5 * (a + b);
        const double gm = g(mid);
        if (gm == 0.0) {
          a = b = mid;
          break;
        }
        if ((gm < 0.0) == (ga < 0.0)) {
          a = mid;
          ga = gm;
        } else {
          b = mid;
        }
      }
      double m = 0.5 * (a + b);
      // Newton polish, kept only while it does not increase the residual.
      for (int it = 0; it < 5; ++it) {
        const double d = dg(m);
        if (d == 0.0) break;
        const double cand = m - g(m) / d;
        if (std::abs(g(cand)) >= std::abs(g(m))) break;
        m = cand;
      }
      roots.push_back(m);
    }
    x_prev = x;
    g_prev = gx;
  }
  std::vector<FixedPoint> out;
  for (double m : roots) {
    const double curvature = 2.0 * t - 1.0 / (1.0 - m * m);
    out.push_back({m, curvature < 0.0 ? FixedPoint::Type::max : FixedPoint::Type::min, std::abs(g(m))});
  }
  return out;
}

double critical_exponents(ExponentProbe probe) {
  constexpr int kPoints = 21;
  std::vector<double> lx, ly;
  for (int i = 0; i < kPoints; ++i) {
    const double s = std::pow(10.0, -4.0 + 2.0 * i / (kPoints - 1));
    lx.push_back(std::log(s));
    if (probe == ExponentProbe::delta) {
      CwParams p;
      p.t = kCwCriticalT;
      p.h = s;
      ly.push_back(std::log(limit_free_energy(p).value));
    } else {
      double m0 = 0.0;
      for (const FixedPoint& fp : magnetization_fixed_points(kCwCriticalT + s, 0.0))
        if (fp.type == FixedPoint::Type::max) m0 = std::max(m0, fp.m);
      require(m0 > 0.0, "no positive magnetization found above the critical point");
      ly.push_back(std::log(m0));
    }
  }
  return ls_slope(lx, ly);
}

}  // namespace mfhj
