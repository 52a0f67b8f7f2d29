#pragma once

#include <cstddef>
#include <vector>

namespace mfhj {

struct QuadNode {
  double x;
  double w;
};

// Gauss-Hermite rule for E f(Z), Z ~ N(0,1). Weights sum to 1.
std::vector<QuadNode> gauss_hermite_nodes(std::size_t n);

// Gauss-Legendre rule for E f(U), U ~ Uniform[0,1]. Weights sum to 1.
std::vector<QuadNode> gauss_legendre_unit(std::size_t n);

}  // namespace mfhj
