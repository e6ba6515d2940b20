#pragma once

#include <Eigen/Dense>

namespace igac {

// Nodes and weights of a one dimensional Gaussian rule. Conventions:
//   gauss_hermite  : weight exp(-x^2) over (-inf, inf)
//   gauss_laguerre : weight exp(-x)   over [0, inf)
//   gauss_legendre : weight 1         over [-1, 1]
struct QuadRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

// Rules are built with the Golub-Welsch eigendecomposition of the Jacobi
// matrix of the three term recurrence, then cached per order. Thread safe.
const QuadRule& gauss_hermite(int n);
const QuadRule& gauss_laguerre(int n);
const QuadRule& gauss_legendre(int n);

}  // namespace igac
