#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace mfhj {

// Parameters of F_N(t,h) = (1/N) log E exp N(t xi(S_N) + h S_N) with S_N the
// mean of N uniform +-1 spins.
struct CwParams {
  enum class Xi { square, custom };

  double t = 0.0;
  double h = 0.0;
  Xi xi_tag = Xi::square;
  std::function<double(double)> xi;  // used when xi_tag == custom
  bool xi_even = true;               // declared symmetry of a custom xi

  double xi_eval(double m) const { return xi_tag == Xi::square ? m * m : xi(m); }
  bool even() const { return xi_tag == Xi::square || xi_even; }
};

// psi*(m) = (1+m)/2 log(1+m) + (1-m)/2 log(1-m), with psi*(+-1) = log 2.
double binary_entropy_dual(double m);

// Exact F_N via the sum over the N+1 magnetization levels, in log-space.
double finite_free_energy(std::size_t N, const CwParams& p);

struct CwLimit {
  double value;
  double maximizer;
};

// sup_{m in [-1,1]} (t xi(m) + h m - psi*(m)) on a grid with refinement.
// Ties go to the smallest m; for even xi the value is computed at |h| so
// that f(t,-h) = f(t,h) holds exactly.
CwLimit limit_free_energy(const CwParams& p, std::size_t nodes = 20001);

struct FixedPoint {
  enum class Type { max, min };
  double m;
  Type type;
  double residual;  // |m - tanh(h + 2 t m)|
};

// All roots of m = tanh(h + 2 t m) in [-1,1], sorted, classified by the sign
// of 2t - 1/(1 - m^2).
std::vector<FixedPoint> magnetization_fixed_points(double t, double h, std::size_t nodes = 10001);

enum class ExponentProbe { delta, beta };

// delta: slope of log f(1/2, h) against log h over h in [1e-4, 1e-2], i.e. 1 + 1/delta.
// beta: slope of log m0(t) against log(t - 1/2) over t - 1/2 in [1e-4, 1e-2].
double critical_exponents(ExponentProbe probe);

inline constexpr double kCwCriticalT = 0.5;

}  // namespace mfhj
