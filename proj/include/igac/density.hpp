#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace igac {

// A parametric sampling density p(x | theta). `score` is the analytic
// gradient of log p with respect to theta (length param_dim). `rule` fills a
// quadrature over x adapted to the density at theta: X gets one sample point
// per row, w the matching weights, with the density measure already folded in
// (so sum w ~ 1 and E[f] ~ sum_i w_i f(X_i)).
struct DensityFamily {
    int sample_dim = 0;
    int param_dim = 0;
    std::function<Eigen::VectorXd(const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& th)> score;
    std::function<void(int order, const Eigen::VectorXd& th,
                       Eigen::MatrixXd& X, Eigen::VectorXd& w)> rule;
    bool valid() const { return sample_dim > 0 && score && rule; }
};

using MeanFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using CovFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;
// Jacobian of the mean: sample_dim x param_dim.
using DMeanFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;
// Partial of the covariance per parameter: param_dim matrices.
using DCovFn = std::function<std::vector<Eigen::MatrixXd>(const Eigen::VectorXd&)>;

// x ~ N(mean(theta), cov(theta)). Quadrature: tensor Gauss-Hermite pushed
// through x = m + sqrt(2) L u with L the Cholesky factor.
DensityFamily gaussian_family(int sample_dim, int param_dim,
                              MeanFn mean, CovFn cov,
                              DMeanFn dmean, DCovFn dcov);

// x ~ Exp with mean theta[idx] (density exp(-x/mu)/mu on x >= 0).
DensityFamily exponential_mean_family(int param_dim, int idx);

// x ~ Exp with rate theta[idx] (density lam exp(-lam x)).
DensityFamily exponential_rate_family(int param_dim, int idx);

// Level spacing surmise (pi s / (2 mu^2)) exp(-pi s^2 / (4 mu^2)) with mean
// spacing theta[idx].
DensityFamily spacing_surmise_family(int param_dim, int idx);

// Independent product: concatenates sample spaces, adds score gradients.
// Every part must share the same param_dim.
DensityFamily product_family(std::vector<DensityFamily> parts);

}  // namespace igac
