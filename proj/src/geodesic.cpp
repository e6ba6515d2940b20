#include "igac/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "igac/errors.hpp"

namespace igac {

namespace {

// Dormand-Prince 5(4) tableau
const double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
const double a21 = 1.0 / 5.0;
const double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
const double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
const double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
             a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
const double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
             a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
             a65 = -5103.0 / 18656.0;
const double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
             b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
const double e1 = 35.0 / 384.0 - 5179.0 / 57600.0, e3 = 500.0 / 1113.0 - 7571.0 / 16695.0,
             e4 = 125.0 / 192.0 - 393.0 / 640.0, e5 = -2187.0 / 6784.0 + 92097.0 / 339200.0,
             e6 = 11.0 / 84.0 - 187.0 / 2100.0, e7 = -1.0 / 40.0;

struct Rhs {
    const Model& m;
    int n;

    // dy/dtau for y = (theta, v); throws OutOfDomain when theta has left the
    // model's parameter box
    Eigen::VectorXd operator()(const Eigen::VectorXd& y) const {
        Eigen::VectorXd th = y.head(n), v = y.tail(n);
        m.domain.require(th, m.name);
        Eigen::VectorXd dy(2 * n);
        dy.head(n) = v;
        if (m.flow_accel) {
            dy.tail(n) = m.flow_accel(th, v);
        } else {
            std::vector<Eigen::MatrixXd> gamma = christoffel(m, th);
            for (int k = 0; k < n; ++k)
                dy(n + k) = -v.dot(gamma[k] * v);
        }
        if (!dy.allFinite())
            throw NonFiniteIntegrand(m.name + ": flow right hand side not finite");
        return dy;
    }
};

double hermite_value(double u, double dt, double y0, double d0, double y1,
                     double d1) {
    double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
    double h10 = u * (1.0 - u) * (1.0 - u);
    double h01 = u * u * (3.0 - 2.0 * u);
    double h11 = u * u * (u - 1.0);
    return h00 * y0 + h10 * dt * d0 + h01 * y1 + h11 * dt * d1;
}

}  // namespace

void GeodesicPath::eval(double t, Eigen::VectorXd* th, Eigen::VectorXd* v) const {
    if (tau.empty()) throw PathTooShort("path has no nodes");
    const double slack = 1e-9 * (1.0 + std::abs(tau.back()));
    if (t < tau.front() - slack || t > tau.back() + slack)
        throw ValidationError("dense output requested outside the path range");
    t = std::clamp(t, tau.front(), tau.back());
    auto it = std::upper_bound(tau.begin(), tau.end(), t);
    size_t i = (it == tau.begin()) ? 0 : static_cast<size_t>(it - tau.begin()) - 1;
    if (i + 1 >= tau.size()) i = tau.size() - 2;
    if (tau.size() == 1) {
        if (th) *th = theta[0];
        if (v) *v = vel[0];
        return;
    }
    double dt = tau[i + 1] - tau[i];
    double u = (t - tau[i]) / dt;
    if (th) {
        th->resize(dim);
        for (int k = 0; k < dim; ++k)
            (*th)(k) = hermite_value(u, dt, theta[i](k), vel[i](k),
                                     theta[i + 1](k), vel[i + 1](k));
    }
    if (v) {
        v->resize(dim);
        for (int k = 0; k < dim; ++k)
            (*v)(k) = hermite_value(u, dt, vel[i](k), acc[i](k),
                                    vel[i + 1](k), acc[i + 1](k));
    }
}

Eigen::VectorXd GeodesicPath::position(double t) const {
    Eigen::VectorXd th;
    eval(t, &th, nullptr);
    return th;
}

Eigen::VectorXd GeodesicPath::velocity(double t) const {
    Eigen::VectorXd v;
    eval(t, nullptr, &v);
    return v;
}

GeodesicPath integrate_ivp(const Model& m, const Eigen::VectorXd& theta0,
                           const Eigen::VectorXd& v0, double tau_max,
                           double tol) {
    if (tau_max < 0.0) throw ValidationError("tau_max must be nonnegative");
    if (v0.size() != m.dim) throw ValidationError("v0 has wrong dimension");
    m.domain.require(theta0, m.name);
    if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");

    const int n = m.dim;
    Rhs f{m, n};

    GeodesicPath path;
    path.dim = n;

    Eigen::VectorXd y(2 * n);
    y.head(n) = theta0;
    y.tail(n) = v0;
    Eigen::VectorXd k1 = f(y);

    double t = 0.0;
    path.tau.push_back(t);
    path.theta.push_back(theta0);
    path.vel.push_back(v0);
    path.acc.push_back(k1.tail(n));

    if (tau_max == 0.0) return path;

    const double h_min = 1e-12 * std::max(1.0, tau_max);
    double h = std::min(1e-3 * tau_max, tau_max);
    const long max_steps = 20'000'000L;

    Eigen::VectorXd k2, k3, k4, k5, k6, k7, y5;
    for (long steps = 0; t < tau_max; ++steps) {
        if (steps > max_steps)
            throw MaxIterations(m.name + ": step budget exceeded in flow integration");
        bool last = false;
        if (t + h >= tau_max) {
            h = tau_max - t;
            last = true;
        }

        bool domain_fail = false;
        double err = 0.0;
        bool ok = true;
        try {
            k2 = f(y + h * (a21 * k1));
            k3 = f(y + h * (a31 * k1 + a32 * k2));
            k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
            k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            k7 = f(y5);
            Eigen::VectorXd e = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 +
                                     e6 * k6 + e7 * k7);
            double acc2 = 0.0;
            for (int i = 0; i < 2 * n; ++i) {
                double sc = tol + tol * std::max(std::abs(y(i)), std::abs(y5(i)));
                double q = e(i) / sc;
                acc2 += q * q;
            }
            err = std::sqrt(acc2 / (2 * n));
            ok = err <= 1.0;
        } catch (const OutOfDomain&) {
            ok = false;
            domain_fail = true;
        }

        if (ok) {
            t = last ? tau_max : t + h;
            y = y5;
            k1 = k7;  // first-same-as-last
            path.tau.push_back(t);
            path.theta.push_back(y.head(n));
            path.vel.push_back(y.tail(n));
            path.acc.push_back(k7.tail(n));
            double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            h *= std::clamp(grow, 0.2, 5.0);
        } else {
            double shrink = domain_fail
                                ? 0.5
                                : std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.5);
            h *= shrink;
            if (h < h_min) {
                if (domain_fail) {
                    path.domain_exit = true;
                    return path;
                }
                throw StepUnderflow(m.name + ": step size collapsed during flow"
                                    " integration", t);
            }
        }
    }
    return path;
}

double squared_speed(const Model& m, const Eigen::VectorXd& th,
                     const Eigen::VectorXd& v) {
    Eigen::MatrixXd g = metric_analytic(m, th);
    return v.dot(g * v);
}

BvpResult solve_bvp(const Model& m, const Eigen::VectorXd& theta0,
                    const Eigen::VectorXd& theta1, double tau_total,
                    double tol) {
    if (!(tau_total > 0.0))
        throw ValidationError("two point problem needs tau_total > 0");
    m.domain.require(theta0, m.name + " (start)");
    m.domain.require(theta1, m.name + " (target)");
    const int n = m.dim;

    const double scale = std::max(1.0, theta1.cwiseAbs().maxCoeff());
    const double resid_tol = std::max(1e-9, 100.0 * tol) * scale;
    const double big = std::numeric_limits<double>::infinity();

    // residual of the shot; domain escapes and blowups count as infinite so
    // the damping backs away from them
    auto shoot = [&](const Eigen::VectorXd& v, GeodesicPath* out) -> double {
        try {
            GeodesicPath p = integrate_ivp(m, theta0, v, tau_total, tol);
            if (p.domain_exit) return big;
            Eigen::VectorXd miss = p.theta.back() - theta1;
            if (out) *out = std::move(p);
            return miss.cwiseAbs().maxCoeff();
        } catch (const Error&) {
            return big;
        }
    };

    Eigen::VectorXd v = (theta1 - theta0) / tau_total;  // chord guess
    GeodesicPath best_path;
    double resid = shoot(v, &best_path);
    if (!std::isfinite(resid))
        throw ShootingDiverged("chord guess leaves the domain; no usable"
                               " starting velocity", resid);

    const int max_newton = 50;
    for (int it = 0; it < max_newton; ++it) {
        if (resid <= resid_tol) {
            BvpResult r;
            r.path = std::move(best_path);
            r.v0 = v;
            r.iterations = it;
            r.residual = resid;
            return r;
        }

        // forward difference Jacobian of the endpoint with respect to v0
        Eigen::VectorXd F = best_path.theta.back() - theta1;
        Eigen::MatrixXd J(n, n);
        for (int j = 0; j < n; ++j) {
            double dv = 1e-7 * std::max(1.0, std::abs(v(j)));
            Eigen::VectorXd vp = v;
            vp(j) += dv;
            GeodesicPath pj;
            if (!std::isfinite(shoot(vp, &pj))) {
                vp(j) = v(j) - dv;
                if (!std::isfinite(shoot(vp, &pj)))
                    throw ShootingDiverged("cannot probe the endpoint"
                                           " sensitivity near the boundary",
                                           resid);
                J.col(j) = -(pj.theta.back() - theta1 - F) / dv;
            } else {
                J.col(j) = (pj.theta.back() - theta1 - F) / dv;
            }
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
        if (!lu.isInvertible())
            throw ShootingDiverged("endpoint sensitivity is singular", resid);
        Eigen::VectorXd dv = lu.solve(-F);

        double alpha = 1.0;
        bool improved = false;
        for (int halves = 0; halves < 30; ++halves) {
            GeodesicPath trial_path;
            double trial = shoot(v + alpha * dv, &trial_path);
            if (trial < resid) {
                v += alpha * dv;
                resid = trial;
                best_path = std::move(trial_path);
                improved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!improved)
            throw ShootingDiverged("line search stalled before reaching the"
                                   " target point", resid);
    }
    throw ShootingDiverged("iteration budget exhausted", resid);
}

}  // namespace igac
