#pragma once

#include <Eigen/Dense>
#include <vector>

#include "igac/manifold.hpp"

namespace igac {

// Solution of the flow equation on a model, stored at the accepted steps of
// the adaptive integrator. Between nodes the path is evaluated with cubic
// Hermite interpolation (positions from velocities, velocities from the
// stored accelerations), which matches the order of the error control.
struct GeodesicPath {
    int dim = 0;
    std::vector<double> tau;
    std::vector<Eigen::VectorXd> theta;
    std::vector<Eigen::VectorXd> vel;
    std::vector<Eigen::VectorXd> acc;

    // true when integration stopped early because the trajectory reached the
    // edge of the parameter domain; tau_end() is then the truncation time
    bool domain_exit = false;

    double tau_start() const { return tau.front(); }
    double tau_end() const { return tau.back(); }
    size_t nodes() const { return tau.size(); }

    // dense output; t must lie within [tau_start, tau_end] up to roundoff
    void eval(double t, Eigen::VectorXd* th, Eigen::VectorXd* v) const;
    Eigen::VectorXd position(double t) const;
    Eigen::VectorXd velocity(double t) const;
};

// Integrate the geodesic equation (or the model's custom flow) from
// (theta0, v0) over tau in [0, tau_max] with an embedded 5(4) pair,
// absolute and relative tolerance both `tol`. Runs up against the domain
// edge: truncates and flags domain_exit. Throws StepUnderflow when the step
// collapses away from the boundary.
GeodesicPath integrate_ivp(const Model& m, const Eigen::VectorXd& theta0,
                           const Eigen::VectorXd& v0, double tau_max,
                           double tol = 1e-10);

struct BvpResult {
    GeodesicPath path;
    Eigen::VectorXd v0;  // initial velocity that connects the endpoints
    int iterations = 0;
    double residual = 0.0;
};

// Two point problem: find the geodesic from theta0 reaching theta1 at
// tau_total. Shooting on the initial velocity with a damped Newton iteration
// and a finite difference Jacobian; the chord velocity seeds the search.
BvpResult solve_bvp(const Model& m, const Eigen::VectorXd& theta0,
                    const Eigen::VectorXd& theta1, double tau_total,
                    double tol = 1e-10);

// v^T g(theta) v; constant along exact geodesics, so its drift measures
// integration quality.
double squared_speed(const Model& m, const Eigen::VectorXd& th,
                     const Eigen::VectorXd& v);

}  // namespace igac
