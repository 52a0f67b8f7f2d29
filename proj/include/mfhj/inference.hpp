#pragma once

#include <cstddef>
#include <vector>

#include "mfhj/prior.hpp"
#include "mfhj/quadrature.hpp"

namespace mfhj {

struct InferenceProblem {
  Prior prior;
  std::size_t quad_nodes = 64;
};

// psi(h) = E log int exp(sqrt(2h) x z + 2h x xbar - h x^2) dP1(x), the
// free energy of the scalar Gaussian channel. Nodes are built once.
class ScalarChannel {
 public:
  explicit ScalarChannel(const InferenceProblem& prob);
  double psi(double h) const;
  // Exact derivative of the quadrature formula; h > 0.
  double psi_derivative(double h) const;
  const Prior& prior() const { return prior_; }

 private:
  Prior prior_;
  std::vector<QuadNode> gh_;
  std::vector<double> log_w_;  // log prior weights (atomic)
};

double psi_initial(const InferenceProblem& prob, double h);

struct PenalizedSup {
  double value;
  double h_star;
};

// sup_{h' in [0, h_max]} (psi(h + h') - h'^2 / penalty_denominator) on `nodes`
// grid points with refinement; smallest maximizer wins ties.
PenalizedSup penalized_sup(const ScalarChannel& ch, double h, double penalty_denominator, double h_max,
                           std::size_t nodes = 10000);

// f(t,h) = sup_{h' >= 0} (psi(h + h') - h'^2 / 4t); t = 0 gives psi(h).
PenalizedSup limit_free_energy_inf(const InferenceProblem& prob, double t, double h);
PenalizedSup limit_free_energy_inf(const ScalarChannel& ch, double t, double h);

// (E xbar^2)^2 - h*(t)^2 / 4t^2
double mmse(const InferenceProblem& prob, double t);
double mmse(const ScalarChannel& ch, double t);

// t (E xbar^2)^2 - f(t, 0)
double mutual_information(const InferenceProblem& prob, double t);
double mutual_information(const ScalarChannel& ch, double t);

// Error of the top-eigenvector estimator for a normalized prior.
double pca_mse(double t);

// Largest t with f(t,0) = 0, by bisection of f(t,0) > 1e-9 on [1e-3, 1e3]
// to 1e-4. Throws NumericalError("no transition detected").
double critical_snr(const InferenceProblem& prob);

struct SbmParams {
  double p = 0.5;
  double lambda = 0.0;
};

// lambda/4 - sup_{h >= 0} (psi(h) - h^2 / lambda) with psi from the +-1
// prior P{+1} = p.
double sbm_mutual_information(const SbmParams& sbm, std::size_t quad_nodes = 64);

}  // namespace mfhj
