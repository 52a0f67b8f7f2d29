#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mfhj/grid.hpp"

namespace mfhj {

using RealFn = std::function<double(double)>;

// Throws ValidationError naming the first node whose discrete second
// difference is below -1e-9 * (value scale).
void verify_convex(const GridFunction& f, const std::string& what);

// [-1.5 Lip(f), 1.5 Lip(f)] with n nodes (n - 1 a multiple of 6 puts +-Lip on nodes).
UniformGrid default_dual_grid(const GridFunction& f, std::size_t n = 3001);

// sup over finite nodes x of (lambda x - f(x)). If `exact` is given, the
// winner is refined against it on the neighbouring cells. Returns +inf when
// the sup sits on the boundary of dom f and |lambda| exceeds Lip(f).
double conjugate_at(const GridFunction& f, double lambda, const RealFn& exact = {});

GridFunction legendre_dual(const GridFunction& f, const UniformGrid& dual_grid, const RealFn& exact = {});
GridFunction legendre_dual(const GridFunction& f);

// Nodewise error scale of a discrete dual pair: spacing_x * spacing_lambda.
double dual_grid_tolerance(const UniformGrid& primal, const UniformGrid& dual);

// Initial condition psi and non-linearity H of  d_t f - H(d_x f) = 0.
// Grids are always present; optional closed forms are used for off-grid
// evaluation and argmax refinement.
struct HjProblem {
  GridFunction psi;
  GridFunction H;
  RealFn psi_exact;
  RealFn H_exact;
  bool H_convex = false;
  bool psi_convex = false;

  static HjProblem from_functions(RealFn psi, UniformGrid psi_grid, RealFn H, UniformGrid H_grid,
                                  bool H_convex, bool psi_convex);

  double eval_psi(double x) const;
  // +inf outside the H grid.
  double eval_H(double p) const;
};

// sup_y psi(y) - t H*((y - x)/t). Requires H convex; H* is built once.
class HopfLaxSolver {
 public:
  explicit HopfLaxSolver(HjProblem prob, std::size_t dual_nodes = 6001);
  double operator()(double t, double x) const;
  const GridFunction& h_star() const { return h_star_; }
  const HjProblem& problem() const { return prob_; }

 private:
  double h_star_eval(double v) const;

  HjProblem prob_;
  GridFunction h_star_;
  double v_lo_;
  double v_hi_;
};

// sup_{|p| <= Lip psi} (p x + t H(p) - psi*(p)). Requires psi convex.
class HopfSolver {
 public:
  explicit HopfSolver(HjProblem prob, std::size_t dual_nodes = 6001);
  double operator()(double t, double x) const;
  const GridFunction& psi_star() const { return psi_star_; }

 private:
  double psi_star_eval(double p) const;

  HjProblem prob_;
  GridFunction psi_star_;
  double p_lim_;
};

double hopf_lax(const HjProblem& prob, double t, double x);
double hopf(const HjProblem& prob, double t, double x);

struct CharacteristicPoint {
  double foot;
  double arrival;
  double value;
};

// Straight characteristics from each interior foot y of `feet`:
// X = y - t H'(psi'(y)), value psi(y) + t (H(p) - H'(p) p) with p = psi'(y).
// Derivatives are central differences. Crossings are kept as-is.
std::vector<CharacteristicPoint> characteristics(const HjProblem& prob, double t,
                                                 std::optional<UniformGrid> feet = std::nullopt);

// Values of the wavefront at position x: every pair of consecutive feet whose
// arrivals bracket x contributes one linearly interpolated value.
std::vector<double> wavefront_values_at(const std::vector<CharacteristicPoint>& front, double x);

}  // namespace mfhj
