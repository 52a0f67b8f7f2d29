#include "mfhj/quadrature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>

#include "mfhj/error.hpp"

namespace mfhj {

namespace {

// Gauss rule from the three-term recurrence of the orthonormal family
//   b_{k+1} p_{k+1}(x) = x p_k(x) - b_k p_{k-1}(x)   (zero diagonal).
// Nodes start from the Jacobi-matrix eigenvalues and are polished by Newton
// on p_n; weights come from the Christoffel function 1 / sum_k p_k(x)^2.
std::vector<QuadNode> symmetric_gauss_rule(std::size_t n, const std::function<double(std::size_t)>& b) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 1; k < n; ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    jacobi(i, i - 1) = jacobi(i - 1, i) = b(k);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& eig = solver.eigenvalues();

  // Returns p_n(x), p_n'(x) and sum_{k<n} p_k(x)^2, with p_0 = 1.
  auto evaluate = [&](double x, double& pn, double& dpn, double& christoffel) {
    double prev = 0.0, cur = 1.0;
    double dprev = 0.0, dcur = 0.0;
    christoffel = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double bk = k == 0 ? 0.0 : b(k);
      const double next = (x * cur - bk * prev) / b(k + 1);
      const double dnext = (cur + x * dcur - bk * dprev) / b(k + 1);
      prev = cur;
      cur = next;
      dprev = dcur;
      dcur = dnext;
      if (k + 1 < n) christoffel += cur * cur;
    }
    pn = cur;
    dpn = dcur;
  };

  std::vector<QuadNode> rule(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double x = eig(static_cast<Eigen::Index>(i));
    double pn = 0.0, dpn = 0.0, c = 0.0;
    for (int it = 0; it < 4; ++it) {
      evaluate(x, pn, dpn, c);
      if (dpn == 0.0) break;
      const double step = pn / dpn;
      x -= step;
      if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    evaluate(x, pn, dpn, c);
    rule[i] = {x, 1.0 / c};
    total += rule[i].w;
  }
  for (QuadNode& q : rule) q.w /= total;
  // Enforce exact symmetry of the rule about 0.
  for (std::size_t i = 0; i < n / 2; ++i) {
    QuadNode& lo = rule[i];
    QuadNode& hi = rule[n - 1 - i];
    const double x = 0.5 * (hi.x - lo.x);
    const double w = 0.5 * (hi.w + lo.w);
    lo = {-x, w};
    hi = {x, w};
  }
  if (n % 2 == 1) rule[n / 2].x = 0.0;
  return rule;
}

}  // namespace

std::vector<QuadNode> gauss_hermite_nodes(std::size_t n) {
  require(n >= 1, "Gauss-Hermite rule needs n >= 1");
  if (n == 1) return {{0.0, 1.0}};
  return symmetric_gauss_rule(n, [](std::size_t k) { return std::sqrt(static_cast<double>(k)); });
}

std::vector<QuadNode> gauss_legendre_unit(std::size_t n) {
  require(n >= 1, "Gauss-Legendre rule needs n >= 1");
  if (n == 1) return {{0.5, 1.0}};
  auto rule = symmetric_gauss_rule(n, [](std::size_t k) {
    const double kk = static_cast<double>(k);
    return kk / std::sqrt(4.0 * kk * kk - 1.0);
  });
  for (QuadNode& q : rule) q.x = 0.5 * (q.x + 1.0);
  return rule;
}

}  // namespace mfhj
