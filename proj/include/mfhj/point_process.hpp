#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mfhj/rng.hpp"

namespace mfhj {

// Poisson process with finite total intensity: Poisson(intensity_total)
// many i.i.d. points from the normalized intensity.
std::vector<double> sample_ppp(double intensity_total, const std::function<double(RngStream&)>& point_sampler,
                               RngStream& stream);

// Points u_n = Gamma_n^{-1/zeta} of the process with intensity
// zeta x^{-zeta-1} dx, Gamma_n the arrival times of a unit-rate process,
// kept for n <= cutoff.
struct PdpSample {
  double zeta = 0.5;
  std::vector<double> points;  // strictly decreasing
  // E[sum_{n > cutoff} u_n | Gamma_cutoff] = Gamma_c^{1-1/zeta} / (1/zeta - 1)
  double tail_mass = 0.0;
  // cutoff^{1-1/zeta} (1/zeta) / (1/zeta - 1), a cutoff-only bound on the same tail
  double tail_bound = 0.0;

  double retained_sum() const;
  // v_n = u_n / (retained + tail_mass); the remainder dust_weight() stands
  // for the discarded small points, none of which carries visible mass.
  std::vector<double> weights() const;
  double dust_weight() const;
};

PdpSample sample_pdp(double zeta, std::size_t cutoff, RngStream& stream);

// Walker/Vose alias table over non-negative weights.
class AliasTable {
 public:
  explicit AliasTable(const std::vector<double>& weights);
  std::size_t sample(RngStream& rng) const;
  std::size_t size() const { return prob_.size(); }

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

// Inverse-cdf sampling in the given weight order, O(log n) per draw. One
// uniform per draw, and the cdf of a leading block barely moves when more
// small weights are appended, so runs at different cutoffs stay coupled.
class CumulativeTable {
 public:
  explicit CumulativeTable(const std::vector<double>& weights);
  std::size_t sample(RngStream& rng) const;
  std::size_t size() const { return cum_.size(); }

 private:
  std::vector<double> cum_;
};

struct MonteCarloComparison {
  double lhs;
  double rhs;
  double stderr_;  // of lhs - rhs (or of lhs when rhs is exact)
  std::size_t samples;
};

// Law of a positive mark X with known E X and E X^zeta.
struct PositiveMark {
  std::string name;
  std::function<double(RngStream&)> sample;
  double mean;
  std::function<double(double)> moment;  // a -> E X^a
};

PositiveMark lognormal_mark(double zeta);  // X = exp(g - zeta/2), E X^zeta = 1
PositiveMark uniform_mark(double lo, double hi);
PositiveMark constant_mark(double c);

// E log <X> against (1/zeta) log E X^zeta. Dust carries mass d with
// <X>_dust = d E X (law of large numbers over its many small atoms).
MonteCarloComparison check_pdp_invariance(double zeta, const PositiveMark& mark, std::size_t n_replicas,
                                          std::size_t cutoff, const RngStream& stream);

// Overlap array R[l][l'] = 1{alpha^l = alpha^l'} of sampled replicas.
using OverlapMatrix = std::vector<std::vector<double>>;
using OverlapFunction = std::function<double(const OverlapMatrix&)>;

// Named functions of the first n replicas: "one", "r12", "r12_r13" (n >= 3), "r12_r23" (n >= 3).
OverlapFunction named_overlap_function(const std::string& name);

struct GgReport {
  double zeta;
  std::size_t n;
  std::size_t samples;
  double mean_r12;  // estimate of E<R12>
  double mean_r12_stderr;
  double lhs;       // E<f(R^n) R_{1,n+1}>
  double rhs;       // (1/n) E<f> E<R12> + (1/n) sum_{l=2}^n E<f R_{1l}>
  double diff_stderr;
};

// Replicas drawn i.i.d. from the PDP weights by inverse cdf; one set of n+1
// replicas per fresh process sample.
GgReport gg_identity_check(double zeta, std::size_t n, const OverlapFunction& f, std::size_t n_mc,
                           std::size_t cutoff, const RngStream& stream);

// Depth-K tree of independent Poisson-Dirichlet processes, zeta_1 < ... < zeta_K.
// Level l < K nodes keep `cutoffs[l]` children; each level-(K-1) node also
// carries the dust of its discarded leaf children (conditional expected mass).
struct CascadeNode {
  std::size_t parent;  // index into the previous level (0 = root for level 1)
  std::size_t child;   // rank among its siblings
  double log_w;        // log of the product of u along the path from the root
  std::uint64_t id;    // stable identifier used to key lazy marks
};

struct CascadeTree {
  std::vector<double> zetas;
  std::vector<std::size_t> cutoffs;
  std::vector<std::vector<CascadeNode>> levels;  // levels[l] holds depth l+1
  std::vector<double> dust_log_mass;             // per depth-(K-1) node (root when K = 1)
  double log_total = 0.0;                        // log(sum leaves + sum dust)
  double internal_deficit = 0.0;                 // estimated relative mass lost above the leaf level
  std::vector<double> weights;                   // normalized: leaves first, then one dust entry per leaf parent

  std::size_t depth() const { return zetas.size(); }
  std::size_t leaf_parent_count() const { return dust_log_mass.size(); }
  // Ancestor index at depth d (1..K) of a leaf.
  std::size_t ancestor(std::size_t leaf, std::size_t d) const;
  const std::vector<double>& normalized_weights() const { return weights; }
  double weight_sum_deficit() const;
  // Depth of the most recent common ancestor of two entries of
  // normalized_weights() (K for the same leaf; a dust entry drawn twice is
  // read as two distinct leaves under the same parent).
  std::size_t meet_depth(std::size_t a, std::size_t b) const;
};

std::vector<std::size_t> default_cascade_cutoffs(std::size_t K);

inline constexpr std::uint64_t kCascadeRootId = 0x6a09e667f3bcc909ULL;

// The children of a node come from stream.substream(node id), the root
// having id kCascadeRootId, so raising a cutoff keeps every point of the
// smaller tree.
CascadeTree sample_cascade(const std::vector<double>& zetas, const std::vector<std::size_t>& cutoffs,
                           RngStream& stream);

// Shuffles the children order at every node; weights, ids and the
// ancestor structure are carried along.
CascadeTree relabel_cascade(const CascadeTree& tree, RngStream& stream);

// Exact per-tree law of alpha^1 ^ alpha^2 under <.>: P(meet = k), k = 0..K.
// Computed from subtree masses summed in sorted order, so it does not depend
// on sibling labels.
std::vector<double> overlap_law(const CascadeTree& tree);

struct OverlapLawReport {
  std::vector<double> freq;    // empirical E<1{meet = k}>
  std::vector<double> stderr_;
  std::vector<double> target;  // zeta_{k+1} - zeta_k
  std::size_t samples;
};

// Two replicas drawn by inverse cdf from each of n_mc fresh cascades.
OverlapLawReport cascade_overlap_mc(const std::vector<double>& zetas, const std::vector<std::size_t>& cutoffs,
                                    std::size_t n_mc, const RngStream& stream);

// X_K(omega_0, ..., omega_K) with a declared bound |X_K| <= bound.
struct CascadeIntegrand {
  std::function<double(const std::vector<double>&)> f;
  double bound;
};

// Mean over fresh cascades (marks drawn lazily per node) of log sum_alpha
// v_alpha exp X_K(marks along alpha).
MonteCarloComparison cascade_functional(const std::vector<double>& zetas, const std::vector<std::size_t>& cutoffs,
                                        const CascadeIntegrand& x, std::size_t n_mc, const RngStream& stream);

// X_{-1} from X_k = (1/zeta_{k+1}) log E exp(zeta_{k+1} X_{k+1}), X_{-1} = E X_0,
// with each E over a uniform mark by Gauss-Legendre.
double cascade_recursion(const std::vector<double>& zetas, const CascadeIntegrand& x, std::size_t gl_nodes = 24);

enum class ExtremeLaw { pareto, gaussian, bounded_poly };

struct ExtremeReport {
  ExtremeLaw law;
  double param;
  std::size_t n;
  std::size_t replicas;
  double ks;
  std::vector<double> rescaled_maxima;
};

// Rescaled maxima of n i.i.d. draws per replica and their KS distance to the
// limit: Frechet exp(-x^-zeta) for Pareto tails P(X > x) = x^-zeta; Gumbel
// exp(-e^-x) for Gaussians under a_n (M_n - a_n); exp(-|x|^alpha) on x <= 0
// for X = -U^{1/alpha} under n^{1/alpha} M_n.
ExtremeReport extreme_value_check(ExtremeLaw law, double param, std::size_t n, std::size_t replicas,
                                  const RngStream& stream);

double gaussian_extreme_scale(double n);  // a_n

// Limit cdf of the rescaled maximum for each law.
double extreme_limit_cdf(ExtremeLaw law, double param, double x);

}  // namespace mfhj
