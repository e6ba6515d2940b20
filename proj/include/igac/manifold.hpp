#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "igac/density.hpp"

namespace igac {

// Axis aligned open parameter domain. Infinite bounds are fine. Points closer
// than `margin` to a finite edge count as outside; differential operators need
// room for stencils and the metrics blow up on the boundary anyway.
struct DomainBox {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;

    static constexpr double kMargin = 1e-9;

    int dim() const { return static_cast<int>(lo.size()); }
    static DomainBox unbounded(int n);
    bool contains(const Eigen::VectorXd& th, double margin = kMargin) const;
    // index of the first violated coordinate, -1 if inside
    int violation(const Eigen::VectorXd& th, double margin = kMargin) const;
    void require(const Eigen::VectorXd& th, const std::string& what) const;
};

// A statistical manifold: coordinates, domain, metric rule, and optional
// extras. Everything beyond `metric` may be left empty.
struct Model {
    std::string name;
    int dim = 0;
    std::vector<std::string> coord_names;
    DomainBox domain;

    // g(theta), symmetric positive definite inside the domain
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> metric;

    // analytic partial derivatives d g / d theta_k (k-th entry), optional
    std::function<std::vector<Eigen::MatrixXd>(const Eigen::VectorXd&)>
        metric_partials;

    // analytic connection coefficients, optional. Entry k is the matrix
    // Gamma^k_{ij}. When set it wins over finite differences, which matters
    // for trajectories running close to the domain edge.
    std::function<std::vector<Eigen::MatrixXd>(const Eigen::VectorXd&)>
        christoffels;

    // sampling density behind the metric, optional
    DensityFamily family;

    // per-coordinate factorization of det g: det g(theta) equals the product
    // of det_factors[k](theta_k). Empty when the determinant does not split.
    std::vector<std::function<double(double)>> det_factors;

    // optional replacement for the geodesic right hand side; when set the
    // integrator uses a(theta, v) instead of the Levi-Civita acceleration
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>
        flow_accel;

    std::string application;  // one line description for the catalog listing
    std::string params_doc;   // "name in (lo,hi); ..." for the listing
};

// Evaluate the model metric with domain and shape checks.
Eigen::MatrixXd metric_analytic(const Model& m, const Eigen::VectorXd& th);

// Fisher information from the sampling density by Gaussian quadrature,
// order doubling from `order` until successive refinements agree to rel_tol
// in the max norm. Throws QuadratureNotConverged past order 256.
Eigen::MatrixXd metric_numeric(const DensityFamily& fam,
                               const Eigen::VectorXd& th,
                               int order = 16, double rel_tol = 1e-10);

// sqrt(det g); throws NonPositiveDeterminant.
double fisher_density(const Eigen::MatrixXd& g);

// Levi-Civita connection at theta. Entry k of the result is Gamma^k_{ij}.
// Uses the model's analytic coefficients if present, otherwise metric
// partials (analytic if present, else central differences with step
// h_k = step > 0 ? step : cbrt(machine eps) * max(1, |theta_k|); every
// stencil point must stay inside the domain).
std::vector<Eigen::MatrixXd> christoffel(const Model& m,
                                         const Eigen::VectorXd& th,
                                         double step = 0.0);

// Smooth change of coordinates theta = forward(phi) with Jacobian
// d theta / d phi. Used to verify tensor transformation of the metric.
struct Diffeo {
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> forward;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
};

// Largest relative entry mismatch between the quadrature metric of the
// reparametrized family and the pullback J^T G J of the quadrature metric in
// the original coordinates, both at phi. Near zero means the metric
// transforms covariantly. Throws NonInvertibleJacobian on a singular J.
double check_reparam_covariance(const Model& m, const Diffeo& d,
                                const Eigen::VectorXd& phi, int order = 16);

}  // namespace igac
