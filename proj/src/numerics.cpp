#include "mfhj/numerics.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>

#include "mfhj/error.hpp"
#include "mfhj/grid.hpp"

namespace mfhj {

double log_sum_exp(std::span<const double> v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double a : v) m = std::max(m, a);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double a : v) s += std::exp(a - m);
  return m + std::log(s);
}

double log_sum_exp_weighted(std::span<const double> v, std::span<const double> w) {
  double m = -std::numeric_limits<double>::infinity();
  for (double a : v) m = std::max(m, a);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * std::exp(v[i] - m);
  return m + std::log(s);
}

ScanResult scan_maximize(const std::function<double(double)>& f, double lo, double hi, std::size_t n,
                         bool refine) {
  require(n >= 2 && lo < hi, "scan needs lo < hi and at least 2 nodes");
  const UniformGrid grid(lo, hi, n);
  const double h = grid.spacing();
  ScanResult best{lo, f(lo), 0};
  for (std::size_t i = 1; i < n; ++i) {
    const double x = grid.x(i);
    const double v = f(x);
    if (v > best.value) best = {x, v, i};
  }
  if (!refine) return best;
  const double a = std::max(lo, best.x - h);
  const double b = std::min(hi, best.x + h);
  auto neg = [&](double x) { return -f(x); };
  const auto [xr, fr] = boost::math::tools::brent_find_minima(neg, a, b, 52);
  // Gains at rounding level are ignored so exact node maximizers survive.
  if (-fr > best.value + 1e-15 * std::max(1.0, std::abs(best.value))) {
    best.x = xr;
    best.value = -fr;
  }
  return best;
}

namespace {

struct NmContext {
  const std::function<double(const std::vector<double>&)>* f;
  std::vector<double> scratch;
};

double nm_trampoline(const gsl_vector* v, void* params) {
  auto* ctx = static_cast<NmContext*>(params);
  for (std::size_t i = 0; i < ctx->scratch.size(); ++i) ctx->scratch[i] = gsl_vector_get(v, i);
  const double r = (*ctx->f)(ctx->scratch);
  return std::isfinite(r) ? r : std::numeric_limits<double>::max();
}

}  // namespace

MinimizeResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                           std::vector<double> x0, double initial_step, double size_tol,
                           std::size_t max_iter) {
  static const bool handler_off = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)handler_off;
  const std::size_t d = x0.size();
  if (d == 0) return {x0, f(x0), 0};
  NmContext ctx{&f, std::vector<double>(d)};
  gsl_multimin_function fn{&nm_trampoline, d, &ctx};
  gsl_vector* x = gsl_vector_alloc(d);
  gsl_vector* step = gsl_vector_alloc(d);
  for (std::size_t i = 0; i < d; ++i) {
    gsl_vector_set(x, i, x0[i]);
    gsl_vector_set(step, i, initial_step);
  }
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, d);
  gsl_multimin_fminimizer_set(s, &fn, x, step);
  std::size_t iter = 0;
  while (iter < max_iter) {
    ++iter;
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), size_tol) == GSL_SUCCESS) break;
  }
  MinimizeResult out{std::vector<double>(d), s->fval, iter};
  for (std::size_t i = 0; i < d; ++i) out.x[i] = gsl_vector_get(s->x, i);
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(step);
  gsl_vector_free(x);
  return out;
}

MeanStderr mean_stderr(std::span<const double> samples) {
  const std::size_t n = samples.size();
  require(n >= 2, "standard error needs at least 2 samples");
  double sum = 0.0;
  for (double s : samples) sum += s;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  const double var = ss / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n)), n};
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  require(!samples.empty(), "KS statistic needs samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double F = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - F, F - static_cast<double>(i) / n});
  }
  return d;
}

double ls_slope(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace mfhj
