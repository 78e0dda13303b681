#pragma once

#include <Eigen/Dense>

namespace msdg {

struct QuadratureRule {
  Eigen::VectorXd nodes;    // on [-1, 1], ascending
  Eigen::VectorXd weights;  // sum to 2
  int size() const { return static_cast<int>(nodes.size()); }
};

// Gauss-Legendre rule with n points, 1 <= n <= 32; exact to degree 2n-1.
QuadratureRule gauss_legendre(int n);

// Legendre polynomials P_0..P_k at xi, and their derivatives.
void legendre(int k, double xi, double* p, double* dp);

}  // namespace msdg
