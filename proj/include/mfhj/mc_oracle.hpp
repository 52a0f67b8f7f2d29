#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mfhj/prior.hpp"
#include "mfhj/rng.hpp"

// Finite-N models: exact enumeration over configurations, Monte Carlo over
// the disorder only. Every draw d uses stream.substream(d), so a report is a
// pure function of the stream key and the inputs.

namespace mfhj {

struct McReport {
  double estimate = 0.0;
  double stderr_ = 0.0;  // sample standard deviation / sqrt(n_samples)
  std::size_t n_samples = 0;
  // seed triple of the stream the report was computed from
  std::uint64_t seed = 0;
  std::string label;
  std::uint64_t index = 0;
  std::string model;
  std::map<std::string, double> inputs;
  std::vector<double> samples;  // per-draw values, for paired comparisons
};

// A quantity estimated two ways on the same draws.
struct IdentityCheck {
  McReport lhs;
  McReport rhs;
  double diff = 0.0;         // lhs - rhs
  double diff_stderr = 0.0;  // from the per-draw differences
  bool within(double sigmas) const;
};

// ---- SK ----------------------------------------------------------------

// Gaussian couplings g (row-major N x N) for one disorder draw.
std::vector<double> sk_couplings(std::size_t N, RngStream& stream);

// H_N(sigma) = N^{-1/2} sum_{ij} g_ij sigma_i sigma_j for the 2^{N-1}
// configurations with sigma_{N-1} = +1, in binary-reflected Gray-code order of
// the remaining spins (bit i of k ^ (k >> 1) set means sigma_i = -1). One
// flip costs O(N). H is even, so this half covers Sigma_N.
std::vector<double> sk_half_energies(const std::vector<double>& g, std::size_t N);

// (1/N) log sum_sigma exp(beta H_N(sigma)) by Gray code, and by direct
// evaluation of every configuration (test oracle).
double sk_log_partition_per_spin(const std::vector<double>& g, std::size_t N, double beta);
double sk_log_partition_per_spin_naive(const std::vector<double>& g, std::size_t N, double beta);

// (1/N) E log sum exp(beta H_N), N <= 16. Each draw is averaged with its
// antithetic partner -g; n_samples counts the pairs.
McReport sk_free_energy(std::size_t N, double beta, std::size_t n_disorder, const RngStream& stream);

// -(1/N) E log int exp(sqrt(2t) H_N - N t) dP_N for the uniform measure on
// Sigma_N; non-negative by Jensen.
McReport sk_normalized_free_energy(std::size_t N, double t, std::size_t n_disorder, const RngStream& stream);

// Var(R12) under E<.> for the Gibbs measure exp(sqrt(2t) H_N), N <= 14.
McReport overlap_variance(std::size_t N, double t, std::size_t n_disorder, const RngStream& stream);

// ---- REM ---------------------------------------------------------------

struct RemReport {
  McReport free_energy;
  // zeta H - sqrt(2N log 2) a_N per draw, only points >= point_floor kept
  std::vector<std::vector<double>> extreme_points;
  double point_floor = -3.0;
  McReport positive_count;  // #points in [0, inf) per draw; Poisson(1) in the limit
};

// a_N = (2N log 2 - log N - log log 2 - log 4 pi)^{1/2}
double rem_centring(std::size_t N);

// (1/N) E log sum_sigma exp(sqrt(2tN) E_sigma), or with normalized = true
// -(1/N) E log 2^{-N} sum_sigma exp(sqrt(2tN) E_sigma - N t). N <= 22.
RemReport rem_free_energy(std::size_t N, double t, std::size_t n_disorder, const RngStream& stream,
                          bool normalized = false);

// ---- rank-one estimation -----------------------------------------------

// (1/N) E log int exp H_N(t,h,x) dP_N(x) with
// H_N = sqrt(2t/N) x.Wx + (2t/N)(x.xbar)^2 - (t/N)|x|^4 + 2h x.xbar + sqrt(2h) z.x - h|x|^2,
// W an N x N matrix of i.i.d. standard Gaussians. Atomic prior, N <= 12,
// |support|^N <= 1e6. Draws are paired with (xbar, -W, -z).
McReport rankone_free_energy(std::size_t N, double t, double h, const Prior& prior, std::size_t n_disorder,
                             const RngStream& stream);

struct RankOneDerivatives {
  McReport dt;  // central difference in t, common random numbers
  McReport dh;
  double gap = 0.0;         // dt - dh^2
  double gap_stderr = 0.0;  // linearized: stderr of dt_i - 2 mean(dh) dh_i
};

RankOneDerivatives rankone_derivatives(std::size_t N, double t, double h, const Prior& prior,
                                       std::size_t n_disorder, const RngStream& stream, double step = 1e-3);

struct NishimoriReport {
  IdentityCheck first;   // E<x.xbar> against E<x.x'>
  IdentityCheck second;  // E<(x.xbar)^2> against E<(x.x')^2>
};

// Exact Gibbs averages per draw, N <= 8.
NishimoriReport nishimori_check(std::size_t N, double t, double h, const Prior& prior, std::size_t n_disorder,
                                const RngStream& stream);

// ---- Gaussian integration by parts -------------------------------------

enum class GibpFunction { identity, square, tanh, cos };

GibpFunction parse_gibp_function(const std::string& name);

// E g F(g) against v^2 E F'(g) for g ~ N(0, v^2).
IdentityCheck gibp_check(GibpFunction F, double v, std::size_t n_mc, const RngStream& stream);

}  // namespace mfhj
