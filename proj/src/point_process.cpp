#include "mfhj/point_process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "mfhj/error.hpp"
#include "mfhj/numerics.hpp"
#include "mfhj/quadrature.hpp"

namespace mfhj {

namespace {

void require_zeta(double zeta) {
  require(zeta > 0.0 && zeta < 1.0,
          "zeta must lie strictly inside (0,1): the points are summable exactly for zeta in (0,1)");
}

// Sum of non-negative terms in ascending order, so the result depends only on
// the multiset of terms.
double sorted_sum(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

double tail_conditional(double gamma_c, double zeta) {
  const double r = 1.0 / zeta;
  return std::pow(gamma_c, 1.0 - r) / (r - 1.0);
}

}  // namespace

std::vector<double> sample_ppp(double intensity_total, const std::function<double(RngStream&)>& point_sampler,
                               RngStream& stream) {
  require(std::isfinite(intensity_total) && intensity_total >= 0.0, "PPP intensity must be finite and >= 0");
  std::vector<double> pts;
  if (intensity_total == 0.0) return pts;
  const std::uint64_t n = stream.poisson(intensity_total);
  pts.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) pts.push_back(point_sampler(stream));
  return pts;
}

double PdpSample::retained_sum() const {
  double s = 0.0;
  // smallest first
  for (auto it = points.rbegin(); it != points.rend(); ++it) s += *it;
  return s;
}

std::vector<double> PdpSample::weights() const {
  const double total = retained_sum() + tail_mass;
  std::vector<double> v(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) v[i] = points[i] / total;
  return v;
}

double PdpSample::dust_weight() const { return tail_mass / (retained_sum() + tail_mass); }

PdpSample sample_pdp(double zeta, std::size_t cutoff, RngStream& stream) {
  require_zeta(zeta);
  require(cutoff >= 1, "PDP cutoff must be >= 1");
  PdpSample s;
  s.zeta = zeta;
  s.points.reserve(cutoff);
  double gamma = 0.0;
  for (std::size_t n = 0; n < cutoff; ++n) {
    gamma += stream.exponential();
    s.points.push_back(std::exp(-std::log(gamma) / zeta));
  }
  s.tail_mass = tail_conditional(gamma, zeta);
  const double r = 1.0 / zeta;
  s.tail_bound = std::pow(static_cast<double>(cutoff), 1.0 - r) * r / (r - 1.0);
  return s;
}

AliasTable::AliasTable(const std::vector<double>& weights) {
  const std::size_t n = weights.size();
  require(n > 0, "alias table needs at least one weight");
  double total = 0.0;
  for (double w : weights) {
    require(w >= 0.0 && std::isfinite(w), "alias weights must be finite and >= 0");
    total += w;
  }
  require(total > 0.0, "alias weights must not all vanish");
  prob_.assign(n, 0.0);
  alias_.assign(n, 0);
  std::vector<double> scaled(n);
  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = weights[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back(), l = large.back();
    small.pop_back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (std::size_t i : large) prob_[i] = 1.0, alias_[i] = i;
  for (std::size_t i : small) prob_[i] = 1.0, alias_[i] = i;
}

std::size_t AliasTable::sample(RngStream& rng) const {
  const std::size_t n = prob_.size();
  const std::size_t i = std::min(n - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)));
  return rng.uniform() < prob_[i] ? i : alias_[i];
}

CumulativeTable::CumulativeTable(const std::vector<double>& weights) {
  require(!weights.empty(), "cumulative table needs at least one weight");
  cum_.reserve(weights.size());
  double total = 0.0;
  for (double w : weights) {
    require(w >= 0.0 && std::isfinite(w), "table weights must be finite and >= 0");
    total += w;
    cum_.push_back(total);
  }
  require(total > 0.0, "table weights must not all vanish");
}

std::size_t CumulativeTable::sample(RngStream& rng) const {
  const double u = rng.uniform() * cum_.back();
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
  return std::min(static_cast<std::size_t>(it - cum_.begin()), cum_.size() - 1);
}

PositiveMark lognormal_mark(double zeta) {
  return {"lognormal", [zeta](RngStream& r) { return std::exp(r.normal() - zeta / 2.0); },
          std::exp(0.5 - zeta / 2.0), [zeta](double a) { return std::exp(a * a / 2.0 - a * zeta / 2.0); }};
}

PositiveMark uniform_mark(double lo, double hi) {
  require(lo > 0.0 && hi > lo, "uniform mark needs 0 < lo < hi");
  return {"uniform", [lo, hi](RngStream& r) { return lo + (hi - lo) * r.uniform(); }, 0.5 * (lo + hi),
          [lo, hi](double a) { return (std::pow(hi, a + 1.0) - std::pow(lo, a + 1.0)) / ((a + 1.0) * (hi - lo)); }};
}

PositiveMark constant_mark(double c) {
  require(c > 0.0, "constant mark must be positive");
  return {"constant", [c](RngStream&) { return c; }, c, [c](double a) { return std::pow(c, a); }};
}

MonteCarloComparison check_pdp_invariance(double zeta, const PositiveMark& mark, std::size_t n_replicas,
                                          std::size_t cutoff, const RngStream& stream) {
  require_zeta(zeta);
  require(n_replicas >= 2, "need at least two replicas");
  std::vector<double> vals(n_replicas);
  for (std::size_t r = 0; r < n_replicas; ++r) {
    // Points and marks on separate streams: mark n is the same for every
    // cutoff >= n, which couples runs at different cutoffs.
    RngStream rs = stream.substream(2 * r);
    RngStream ms = stream.substream(2 * r + 1);
    const PdpSample s = sample_pdp(zeta, cutoff, rs);
    std::vector<double> x(s.points.size());
    for (double& v : x) v = mark.sample(ms);
    double num = mark.mean * s.tail_mass;
    double den = s.tail_mass;
    for (std::size_t n = s.points.size(); n-- > 0;) {
      num += s.points[n] * x[n];
      den += s.points[n];
    }
    vals[r] = std::log(num) - std::log(den);
  }
  const MeanStderr m = mean_stderr(vals);
  return {m.mean, std::log(mark.moment(zeta)) / zeta, m.stderr_, n_replicas};
}

OverlapFunction named_overlap_function(const std::string& name) {
  if (name == "one") return [](const OverlapMatrix&) { return 1.0; };
  if (name == "r12") return [](const OverlapMatrix& R) { return R.at(0).at(1); };
  if (name == "r12_r13") return [](const OverlapMatrix& R) { return R.at(0).at(1) * R.at(0).at(2); };
  if (name == "r12_r23") return [](const OverlapMatrix& R) { return R.at(0).at(1) * R.at(1).at(2); };
  throw ValidationError("unknown overlap function '" + name + "' (expected one, r12, r12_r13, r12_r23)");
}

namespace {

// Mean of per-sample columns and the delta-method stderr of
// g(means) for a linear-in-gradient g.
double delta_stderr(const std::vector<std::vector<double>>& cols, const std::vector<double>& grad) {
  const std::size_t k = cols.size(), m = cols[0].size();
  std::vector<double> mean(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) mean[j] = std::accumulate(cols[j].begin(), cols[j].end(), 0.0) / m;
  double var = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double lin = 0.0;
    for (std::size_t j = 0; j < k; ++j) lin += grad[j] * (cols[j][i] - mean[j]);
    var += lin * lin;
  }
  var /= static_cast<double>(m - 1);
  return std::sqrt(var / static_cast<double>(m));
}

}  // namespace

GgReport gg_identity_check(double zeta, std::size_t n, const OverlapFunction& f, std::size_t n_mc,
                           std::size_t cutoff, const RngStream& stream) {
  require_zeta(zeta);
  require(n >= 1, "replica count n must be >= 1");
  require(n_mc >= 2, "need at least two MC samples");
  const std::size_t reps = n + 1;
  std::vector<double> colL(n_mc), colF(n_mc), colR(n_mc), colS(n_mc);
  std::vector<std::size_t> idx(reps);
  OverlapMatrix full(reps, std::vector<double>(reps, 0.0));
  OverlapMatrix head(n, std::vector<double>(n, 0.0));
  for (std::size_t r = 0; r < n_mc; ++r) {
    RngStream rs = stream.substream(2 * r);
    RngStream picks = stream.substream(2 * r + 1);
    const PdpSample s = sample_pdp(zeta, cutoff, rs);
    std::vector<double> w = s.weights();
    const std::size_t dust = w.size();
    w.push_back(s.dust_weight());
    const CumulativeTable table(w);
    for (std::size_t l = 0; l < reps; ++l) idx[l] = table.sample(picks);
    // A dust draw is a fresh atom: it never coincides with another replica.
    for (std::size_t a = 0; a < reps; ++a)
      for (std::size_t b = 0; b < reps; ++b)
        full[a][b] = (a == b || (idx[a] == idx[b] && idx[a] != dust)) ? 1.0 : 0.0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) head[a][b] = full[a][b];
    const double fv = f(head);
    colF[r] = fv;
    colL[r] = fv * full[0][n];
    colR[r] = full[0][1];
    double sum = 0.0;
    for (std::size_t l = 1; l < n; ++l) sum += fv * full[0][l];
    colS[r] = sum;
  }
  const double m = static_cast<double>(n_mc);
  const double L = std::accumulate(colL.begin(), colL.end(), 0.0) / m;
  const double F = std::accumulate(colF.begin(), colF.end(), 0.0) / m;
  const double R = std::accumulate(colR.begin(), colR.end(), 0.0) / m;
  const double S = std::accumulate(colS.begin(), colS.end(), 0.0) / m;
  const double nn = static_cast<double>(n);
  GgReport rep;
  rep.zeta = zeta;
  rep.n = n;
  rep.samples = n_mc;
  const MeanStderr r12 = mean_stderr(colR);
  rep.mean_r12 = r12.mean;
  rep.mean_r12_stderr = r12.stderr_;
  rep.lhs = L;
  rep.rhs = F * R / nn + S / nn;
  rep.diff_stderr = delta_stderr({colL, colF, colR, colS}, {1.0, -R / nn, -F / nn, -1.0 / nn});
  return rep;
}

std::vector<std::size_t> default_cascade_cutoffs(std::size_t K) {
  require(K >= 1, "cascade depth must be >= 1");
  std::vector<std::size_t> c(K, 50);
  c.back() = 20;
  return c;
}

std::size_t CascadeTree::ancestor(std::size_t leaf, std::size_t d) const {
  const std::size_t K = depth();
  require(d >= 1 && d <= K, "ancestor depth out of range");
  std::size_t i = leaf;
  for (std::size_t lev = K; lev > d; --lev) i = levels[lev - 1][i].parent;
  return i;
}

double CascadeTree::weight_sum_deficit() const {
  return sorted_sum(std::vector<double>(weights.end() - static_cast<std::ptrdiff_t>(dust_log_mass.size()), weights.end()));
}

std::size_t CascadeTree::meet_depth(std::size_t a, std::size_t b) const {
  const std::size_t K = depth();
  const std::size_t L = levels.back().size();
  if (a == b) return a < L ? K : K - 1;
  // Ancestor at depth K-1 (0 = root when K = 1).
  auto parent_of = [&](std::size_t e) { return e < L ? (K == 1 ? 0 : levels[K - 1][e].parent) : e - L; };
  std::size_t pa = parent_of(a), pb = parent_of(b);
  std::size_t d = K - 1;
  while (d > 0 && pa != pb) {
    pa = levels[d - 1][pa].parent;
    pb = levels[d - 1][pb].parent;
    --d;
  }
  return d;
}

namespace {

std::uint64_t child_id(std::uint64_t parent, std::size_t child) {
  return mix64(parent + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(child) + 1));
}

constexpr std::uint64_t kRootId = kCascadeRootId;

void finish_cascade(CascadeTree& t) {
  double mx = -std::numeric_limits<double>::infinity();
  for (const CascadeNode& n : t.levels.back()) mx = std::max(mx, n.log_w);
  for (double d : t.dust_log_mass) mx = std::max(mx, d);
  std::vector<double>& w = t.weights;
  const auto& leaves = t.levels.back();
  w.clear();
  w.reserve(leaves.size() + t.dust_log_mass.size());
  for (const CascadeNode& n : leaves) w.push_back(std::exp(n.log_w - mx));
  for (double d : t.dust_log_mass) w.push_back(std::exp(d - mx));
  // Sorted sum within each leaf parent (siblings plus dust), then over the
  // parents: invariant under relabeling and cheaper than one global sort.
  // Siblings are contiguous in both sample_cascade and relabel_cascade.
  const std::size_t L = leaves.size();
  const std::size_t K = t.depth();
  std::vector<double> group, sums(t.dust_log_mass.size(), 0.0);
  std::size_t b = 0;
  while (b < L) {
    const std::size_t p = K == 1 ? 0 : leaves[b].parent;
    std::size_t e = b;
    while (e < L && (K == 1 ? 0 : leaves[e].parent) == p) ++e;
    group.assign(w.begin() + static_cast<std::ptrdiff_t>(b), w.begin() + static_cast<std::ptrdiff_t>(e));
    group.push_back(w[L + p]);
    sums[p] = sorted_sum(group);
    b = e;
  }
  const double total = sorted_sum(sums);
  t.log_total = mx + std::log(total);
  for (double& x : w) x /= total;
}

}  // namespace

CascadeTree sample_cascade(const std::vector<double>& zetas, const std::vector<std::size_t>& cutoffs,
                           RngStream& stream) {
  const std::size_t K = zetas.size();
  require(K >= 1, "cascade needs at least one level");
  require(cutoffs.size() == K, "one cutoff per cascade level");
  for (std::size_t k = 0; k < K; ++k) {
    require_zeta(zetas[k]);
    require(cutoffs[k] >= 1, "cascade cutoffs must be >= 1");
    if (k > 0) require(zetas[k] > zetas[k - 1], "cascade zetas must be strictly increasing");
  }
  CascadeTree t;
  t.zetas = zetas;
  t.cutoffs = cutoffs;
  t.levels.resize(K);
  std::vector<CascadeNode> parents{{0, 0, 0.0, kRootId}};
  // Conditional tail mass below each parent, per level, for the deficit estimate.
  std::vector<std::vector<double>> tails(K);
  for (std::size_t d = 0; d < K; ++d) {
    auto& level = t.levels[d];
    level.reserve(parents.size() * cutoffs[d]);
    for (std::size_t p = 0; p < parents.size(); ++p) {
      // The draws of sample_pdp, kept in log space.
      RngStream node = stream.substream(parents[p].id);
      double gamma = 0.0;
      for (std::size_t c = 0; c < cutoffs[d]; ++c) {
        gamma += node.exponential();
        level.push_back({p, c, parents[p].log_w - std::log(gamma) / zetas[d], child_id(parents[p].id, c)});
      }
      const double tail = tail_conditional(gamma, zetas[d]);
      tails[d].push_back(tail);
      if (d + 1 == K) t.dust_log_mass.push_back(parents[p].log_w + std::log(tail));
    }
    parents = level;
  }
  finish_cascade(t);

  // Mass cut above the leaf level: tail of each internal PDP times the mean
  // subtree mass per unit weight among its retained siblings' subtrees.
  if (K > 1) {
    std::vector<double> mass_below(t.levels[K - 2].size(), 0.0);
    const std::size_t L = t.levels.back().size();
    for (std::size_t i = 0; i < L; ++i) mass_below[t.levels.back()[i].parent] += t.weights[i];
    for (std::size_t p = 0; p < t.dust_log_mass.size(); ++p) mass_below[p] += t.weights[L + p];
    double lost = 0.0;
    for (std::size_t d = K - 1; d-- > 0;) {
      // mass_below indexes depth d+1 nodes
      double ratio_sum = 0.0;
      for (std::size_t i = 0; i < t.levels[d].size(); ++i)
        ratio_sum += mass_below[i] / std::exp(t.levels[d][i].log_w - t.log_total);
      const double mean_ratio = ratio_sum / static_cast<double>(t.levels[d].size());
      const auto& ups = d == 0 ? std::vector<CascadeNode>{{0, 0, 0.0, kRootId}} : t.levels[d - 1];
      for (std::size_t p = 0; p < ups.size(); ++p)
        lost += std::exp(ups[p].log_w - t.log_total) * tails[d][p] * mean_ratio;
      if (d > 0) {
        std::vector<double> up(t.levels[d - 1].size(), 0.0);
        for (std::size_t i = 0; i < t.levels[d].size(); ++i) up[t.levels[d][i].parent] += mass_below[i];
        mass_below = std::move(up);
      }
    }
    t.internal_deficit = lost / (1.0 + lost);
  }
  return t;
}

CascadeTree relabel_cascade(const CascadeTree& tree, RngStream& stream) {
  CascadeTree out = tree;
  const std::size_t K = tree.depth();
  std::vector<std::size_t> new_of_old_parent{0};
  for (std::size_t d = 0; d < K; ++d) {
    const auto& old = tree.levels[d];
    const std::size_t n_par = new_of_old_parent.size();
    std::vector<std::vector<std::size_t>> kids(n_par);
    for (std::size_t i = 0; i < old.size(); ++i) kids[new_of_old_parent[old[i].parent]].push_back(i);
    std::vector<std::size_t> new_of_old(old.size());
    auto& level = out.levels[d];
    level.clear();
    for (std::size_t np = 0; np < n_par; ++np) {
      auto& ch = kids[np];
      for (std::size_t i = ch.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(stream.uniform() * static_cast<double>(i));
        std::swap(ch[i - 1], ch[std::min(j, i - 1)]);
      }
      for (std::size_t c = 0; c < ch.size(); ++c) {
        CascadeNode n = old[ch[c]];
        n.parent = np;
        n.child = c;
        new_of_old[ch[c]] = level.size();
        level.push_back(n);
      }
    }
    if (d + 1 == K)
      for (std::size_t p = 0; p < n_par; ++p) out.dust_log_mass[new_of_old_parent[p]] = tree.dust_log_mass[p];
    new_of_old_parent = std::move(new_of_old);
  }
  finish_cascade(out);
  return out;
}

std::vector<double> overlap_law(const CascadeTree& tree) {
  const std::size_t K = tree.depth();
  // P(meet >= d) for d = 0..K
  std::vector<double> at_least(K + 1, 0.0);
  at_least[0] = 1.0;
  std::vector<double> leaf_sq;
  for (const CascadeNode& n : tree.levels.back()) leaf_sq.push_back(std::exp(2.0 * (n.log_w - tree.log_total)));
  at_least[K] = sorted_sum(leaf_sq);
  if (K > 1) {
    // Subtree masses bottom-up, children summed in sorted order.
    std::vector<std::vector<double>> parts(tree.levels[K - 2].size());
    for (const CascadeNode& n : tree.levels.back()) parts[n.parent].push_back(std::exp(n.log_w - tree.log_total));
    for (std::size_t p = 0; p < parts.size(); ++p)
      parts[p].push_back(std::exp(tree.dust_log_mass[p] - tree.log_total));
    for (std::size_t d = K - 1; d >= 1; --d) {
      std::vector<double> mass(parts.size()), sq(parts.size());
      for (std::size_t i = 0; i < parts.size(); ++i) {
        mass[i] = sorted_sum(parts[i]);
        sq[i] = mass[i] * mass[i];
      }
      at_least[d] = sorted_sum(sq);
      if (d == 1) break;
      std::vector<std::vector<double>> up(tree.levels[d - 2].size());
      for (std::size_t i = 0; i < mass.size(); ++i) up[tree.levels[d - 1][i].parent].push_back(mass[i]);
      parts = std::move(up);
    }
  }
  std::vector<double> law(K + 1);
  for (std::size_t k = 0; k <= K; ++k) law[k] = at_least[k] - (k < K ? at_least[k + 1] : 0.0);
  return law;
}

OverlapLawReport cascade_overlap_mc(const std::vector<double>& zetas, const std::vector<std::size_t>& cutoffs,
                                    std::size_t n_mc, const RngStream& stream) {
  require(n_mc >= 2, "need at least two MC samples");
  const std::size_t K = zetas.size();
  std::vector<std::vector<double>> ind(K + 1, std::vector<double>(n_mc, 0.0));
  for (std::size_t r = 0; r < n_mc; ++r) {
    RngStream rs = stream.substream(2 * r);
    RngStream picks = stream.substream(2 * r + 1);
    const CascadeTree t = sample_cascade(zetas, cutoffs, rs);
    const CumulativeTable table(t.normalized_weights());
    const std::size_t a = table.sample(picks), b = table.sample(picks);
    ind[t.meet_depth(a, b)][r] = 1.0;
  }
  OverlapLawReport rep;
  rep.samples = n_mc;
  for (std::size_t k = 0; k <= K; ++k) {
    const MeanStderr m = mean_stderr(ind[k]);
    rep.freq.push_back(m.mean);
    rep.stderr_.push_back(m.stderr_);
    const double hi = k < K ? zetas[k] : 1.0;
    const double lo = k > 0 ? zetas[k - 1] : 0.0;
    rep.target.push_back(hi - lo);
  }
  return rep;
}

namespace {

void require_bounded(const CascadeIntegrand& x) {
  require(static_cast<bool>(x.f), "cascade integrand missing");
  require(std::isfinite(x.bound) && x.bound >= 0.0,
          "cascade integrand needs a finite bound |X_K| <= B so that E exp(zeta X_K) is finite");
}

double eval_bounded(const CascadeIntegrand& x, const std::vector<double>& w) {
  const double v = x.f(w);
  if (!(std::abs(v) <= x.bound))
    throw ValidationError("cascade integrand value " + std::to_string(v) + " exceeds its declared bound " +
                          std::to_string(x.bound));
  return v;
}

}  // namespace

MonteCarloComparison cascade_functional(const std::vector<double>& zetas, const std::vector<std::size_t>& cutoffs,
                                        const CascadeIntegrand& x, std::size_t n_mc, const RngStream& stream) {
  require_bounded(x);
  require(n_mc >= 2, "need at least two MC samples");
  const std::size_t K = zetas.size();
  const auto gl = gauss_legendre_unit(24);
  std::vector<double> vals(n_mc);
  std::vector<double> marks(K + 1);
  std::vector<std::uint64_t> path_ids(K + 1);
  for (std::size_t r = 0; r < n_mc; ++r) {
    RngStream tree_rng = stream.substream(2 * r);
    const RngStream mark_rng = stream.substream(2 * r + 1);
    const CascadeTree t = sample_cascade(zetas, cutoffs, tree_rng);
    auto mark = [&](std::uint64_t id) {
      RngStream m = mark_rng.substream(id);
      return m.uniform();
    };
    // Marks of the ancestors of each leaf parent, cached per parent.
    const std::size_t n_par = t.leaf_parent_count();
    std::vector<std::vector<double>> prefix(n_par, std::vector<double>(K, 0.0));
    for (std::size_t p = 0; p < n_par; ++p) {
      prefix[p][0] = mark(kRootId);
      std::size_t i = p;
      for (std::size_t d = K - 1; d >= 1; --d) {
        prefix[p][d] = mark(t.levels[d - 1][i].id);
        i = t.levels[d - 1][i].parent;
      }
    }
    std::vector<double> terms;
    terms.reserve(t.levels.back().size() + n_par);
    double mx = -std::numeric_limits<double>::infinity();
    for (const CascadeNode& n : t.levels.back()) {
      const std::size_t p = K == 1 ? 0 : n.parent;
      std::copy(prefix[p].begin(), prefix[p].end(), marks.begin());
      marks[K] = mark(n.id);
      terms.push_back(n.log_w + eval_bounded(x, marks));
      mx = std::max(mx, terms.back());
    }
    // Dust: many small leaves whose marks average out to E over the last mark.
    for (std::size_t p = 0; p < n_par; ++p) {
      std::copy(prefix[p].begin(), prefix[p].end(), marks.begin());
      double avg = 0.0;
      for (const QuadNode& q : gl) {
        marks[K] = q.x;
        avg += q.w * std::exp(eval_bounded(x, marks) - x.bound);
      }
      terms.push_back(t.dust_log_mass[p] + x.bound + std::log(avg));
      mx = std::max(mx, terms.back());
    }
    for (double& v : terms) v = std::exp(v - mx);
    vals[r] = mx + std::log(sorted_sum(terms)) - t.log_total;
  }
  const MeanStderr m = mean_stderr(vals);
  return {m.mean, cascade_recursion(zetas, x), m.stderr_, n_mc};
}

double cascade_recursion(const std::vector<double>& zetas, const CascadeIntegrand& x, std::size_t gl_nodes) {
  require_bounded(x);
  const std::size_t K = zetas.size();
  require(K >= 1, "cascade needs at least one level");
  for (std::size_t k = 0; k < K; ++k) {
    require_zeta(zetas[k]);
    if (k > 0) require(zetas[k] > zetas[k - 1], "cascade zetas must be strictly increasing");
  }
  const auto gl = gauss_legendre_unit(gl_nodes);
  std::vector<double> w(K + 1);
  // X_k(w_0..w_k) for k = K down to 0, recursively over the last mark.
  std::function<double(std::size_t)> level = [&](std::size_t k) -> double {
    if (k == K) return eval_bounded(x, w);
    const double z = zetas[k];
    // log E exp(z X_{k+1}) with X_{k+1} in [-B, B]: shift by zB for range.
    double s = 0.0;
    for (const QuadNode& q : gl) {
      w[k + 1] = q.x;
      s += q.w * std::exp(z * (level(k + 1) - x.bound));
    }
    return x.bound + std::log(s) / z;
  };
  double total = 0.0;
  for (const QuadNode& q : gl) {
    w[0] = q.x;
    total += q.w * level(0);
  }
  return total;
}

double gaussian_extreme_scale(double n) {
  require(n > std::exp(1.0), "a_n needs log log n > 0");
  const double ln = std::log(n);
  return std::sqrt(2.0 * ln - std::log(ln) - std::log(4.0 * std::numbers::pi));
}

double extreme_limit_cdf(ExtremeLaw law, double param, double x) {
  switch (law) {
    case ExtremeLaw::pareto:
      return x <= 0.0 ? 0.0 : std::exp(-std::pow(x, -param));
    case ExtremeLaw::gaussian:
      return std::exp(-std::exp(-x));
    case ExtremeLaw::bounded_poly:
      return x >= 0.0 ? 1.0 : std::exp(-std::pow(-x, param));
  }
  return 0.0;
}

ExtremeReport extreme_value_check(ExtremeLaw law, double param, std::size_t n, std::size_t replicas,
                                  const RngStream& stream) {
  require(n >= 1000, "extreme-value check needs n >= 1000");
  require(replicas >= 2, "need at least two replicas");
  if (law != ExtremeLaw::gaussian) require(param > 0.0 && std::isfinite(param), "tail index must be > 0");
  const double nd = static_cast<double>(n);
  const double an = law == ExtremeLaw::gaussian ? gaussian_extreme_scale(nd) : 0.0;
  ExtremeReport rep{law, param, n, replicas, 0.0, {}};
  rep.rescaled_maxima.resize(replicas);
  for (std::size_t r = 0; r < replicas; ++r) {
    RngStream rs = stream.substream(r);
    double y;
    if (law == ExtremeLaw::gaussian) {
      double m = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) m = std::max(m, rs.normal());
      y = an * (m - an);
    } else {
      // Both tail laws are monotone transforms of a uniform, so the maximum
      // comes from the smallest uniform.
      double u = 1.0;
      for (std::size_t i = 0; i < n; ++i) u = std::min(u, rs.uniform());
      if (law == ExtremeLaw::pareto)
        y = std::pow(nd * u, -1.0 / param);  // n^{-1/zeta} U^{-1/zeta}
      else
        y = -std::pow(nd * u, 1.0 / param);  // n^{1/alpha} (-U^{1/alpha})
    }
    rep.rescaled_maxima[r] = y;
  }
  rep.ks = ks_statistic(rep.rescaled_maxima, [law, param](double x) { return extreme_limit_cdf(law, param, x); });
  return rep;
}

}  // namespace mfhj
