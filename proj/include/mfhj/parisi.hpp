#pragma once

#include <cstddef>
#include <vector>

#include "mfhj/grid.hpp"
#include "mfhj/path.hpp"
#include "mfhj/prior.hpp"

namespace mfhj {

// log int exp(x sigma - t sigma^2) dP1(sigma); for a prior on {-1, 1} this
// is log int exp(x sigma - t) dP1.
double single_spin_phi(const Prior& prior, double t, double x);

struct ParisiGridSpec {
  double x_max_query = 0.0;
  std::size_t n_x = 2049;
  std::size_t gh_nodes = 48;
  // 0 selects the default x_max_query + 4 sqrt(2 q(1)) (at least 1).
  double half_width = 0.0;
};

// Solution of -d_t Phi = d_xx Phi + q^{-1}(t) (d_x Phi)^2 on [0, q(1)],
// Phi(q(1), .) = phi(q(1), .), solved exactly slab by slab: on each interval
// where q^{-1} is a constant zeta, Phi(t) = zeta^{-1} log E exp(zeta Phi(t') at
// x + B_{2(t'-t)}), the expectation by Gauss-Hermite in the increment and
// linear interpolation between grid nodes.
struct ParisiGrid {
  UniformGrid grid;
  std::vector<double> times;                // slab endpoints, increasing, times.back() = q(1)
  std::vector<std::vector<double>> values;  // values[i] = Phi(times[i], grid nodes)
  double phi00 = 0.0;                       // Phi(0, 0)
  double tails_left = -1.0;                 // slopes used past the grid ends
  double tails_right = 1.0;

  // Phi(times[i], x) by linear interpolation.
  double at(std::size_t i, double x) const;
};

ParisiGrid parisi_pde_solve(const PiecewisePath& q, const Prior& prior, const ParisiGridSpec& spec = {});

// psi(q) = -Phi^q(0,0)
double psi_path(const PiecewisePath& q, const Prior& prior, const ParisiGridSpec& spec = {});

struct HopfLaxPathResult {
  double value;
  PiecewisePath q_star;  // the maximizing increment q'
};

// sup over q' with levels 0 <= q'_0 <= ... <= q'_K on the breakpoints k/(K+1)
// of psi(q + q') - (1/4t) int q'^2, by coordinate ascent from 8 starts with a
// monotone-cone projection after every coordinate move.
HopfLaxPathResult hopf_lax_path(double t, const PiecewisePath& q, std::size_t K, const Prior& prior,
                                const ParisiGridSpec& spec = {});

// Phi_zeta(0,0) for -d_t Phi = beta^2 (d_xx Phi + zeta(t) (d_x Phi)^2) on
// [0,1], Phi(1,x) = log cosh x.
double parisi_phi(const DistFn& zeta, double beta, const ParisiGridSpec& spec = {});

// Phi_zeta(0,0) - beta^2 int t zeta(t) dt + log 2
double parisi_functional(const DistFn& zeta, double beta, const ParisiGridSpec& spec = {});

struct ParisiResult {
  double value;
  DistFn zeta_star;
};

// Infimum of parisi_functional over zeta with K+1 atoms (2K+1 free
// parameters). The replica-symmetric zeta = 1 on [0,1] is always evaluated;
// one atom is optimized by Brent, and each further atom count by Nelder-Mead
// from 8 starts, one of them the previous optimum plus a light atom.
ParisiResult parisi_formula(double beta, std::size_t K, const ParisiGridSpec& spec = {});
// Optima for 1, ..., K+1 atoms; non-increasing because each optimum stays a
// candidate for the next atom count.
std::vector<ParisiResult> parisi_formula_chain(double beta, std::size_t K, const ParisiGridSpec& spec = {});

struct ParisiHjReport {
  double lhs;           // f(beta^2/2, 0) by hopf_lax_path
  double lhs_composed;  // -lhs + log 2 + beta^2/2
  double rhs;           // parisi_formula value
  double gap;
};

// `rhs` reuses an already computed parisi_formula(beta, K).
ParisiHjReport parisi_hj_equivalence(double beta, std::size_t K, const ParisiGridSpec& spec = {},
                                     const ParisiResult* rhs = nullptr);

struct RemQuantities {
  double zeta;
  double limit_free_energy;
};

// zeta = sqrt(log 2 / t); limit log 2 + t for t <= log 2 and
// 2 sqrt(t log 2) beyond.
RemQuantities rem_quantities(double t);

}  // namespace mfhj
