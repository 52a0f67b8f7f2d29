#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mfhj {

double log_sum_exp(std::span<const double> v);
// log sum_i w_i exp(v_i) with w_i > 0.
double log_sum_exp_weighted(std::span<const double> v, std::span<const double> w);

struct ScanResult {
  double x;
  double value;
  std::size_t index;  // winning grid node before refinement
};

// Maximize f over n equispaced nodes of [lo, hi]; the smallest node wins ties.
// The winner is then refined by Brent's method on its two neighbouring cells;
// the refined point replaces the node only if it is better by more than
// rounding (1e-15 relative), so a maximizer sitting exactly on a node (e.g. an
// endpoint) is reported exactly.
ScanResult scan_maximize(const std::function<double(double)>& f, double lo, double hi, std::size_t n,
                         bool refine = true);

struct MinimizeResult {
  std::vector<double> x;
  double value;
  std::size_t iterations;
};

// Derivative-free Nelder-Mead minimization (GSL nmsimplex2).
MinimizeResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                           std::vector<double> x0, double initial_step, double size_tol,
                           std::size_t max_iter);

struct MeanStderr {
  double mean;
  double stderr_;
  std::size_t n;
};

// stderr = sample standard deviation / sqrt(n); fixed-order summation.
MeanStderr mean_stderr(std::span<const double> samples);

// Kolmogorov-Smirnov distance between the empirical law of `samples` and cdf.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

// Least-squares slope of y against x.
double ls_slope(std::span<const double> x, std::span<const double> y);

}  // namespace mfhj
