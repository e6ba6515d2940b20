#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "igac/catalog.hpp"
#include "igac/errors.hpp"
#include "igac/geodesic.hpp"

using namespace igac;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<int>(xs.size()));
    int i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

// worst relative spread mismatch against sigma(tau) = exp(tau) on a fine grid
double radial_error(const GeodesicPath& p, double tau_max) {
    double worst = 0.0;
    for (int i = 0; i <= 400; ++i) {
        double t = tau_max * i / 400.0;
        double want = std::exp(t);
        worst = std::max(worst,
                         std::abs(p.position(t)(1) - want) / want);
    }
    return worst;
}

}  // namespace

TEST_CASE("expanding spread line is a geodesic of the gaussian half plane") {
    Model m = build("uncorrelated_gaussian", {{"l", 1.0}});
    GeodesicPath p = integrate_ivp(m, vec({0.0, 1.0}), vec({0.0, 1.0}), 5.0);
    CHECK(!p.domain_exit);
    CHECK(p.tau_end() == doctest::Approx(5.0));
    CHECK(radial_error(p, 5.0) <= 1e-6);
    // the location coordinate never moves
    for (size_t i = 0; i < p.nodes(); ++i)
        CHECK(std::abs(p.theta[i](0)) <= 1e-12);
}

TEST_CASE("squared speed stays constant along the flow") {
    Model m = build("uncorrelated_gaussian", {{"l", 1.0}});
    GeodesicPath p = integrate_ivp(m, vec({0.3, 1.0}), vec({0.5, 1.0}), 5.0);
    double s0 = squared_speed(m, p.theta.front(), p.vel.front());
    for (size_t i = 0; i < p.nodes(); ++i) {
        double s = squared_speed(m, p.theta[i], p.vel[i]);
        CHECK(std::abs(s - s0) / s0 <= 1e-8);
    }
}

TEST_CASE("integrating back recovers the start") {
    Model m = build("spin_integrable");
    Eigen::VectorXd th0 = vec({1.0, 1.0});
    Eigen::VectorXd v0 = vec({1.0, 2.0});
    GeodesicPath fwd = integrate_ivp(m, th0, v0, 3.0);
    Eigen::VectorXd th1 = fwd.position(3.0);
    Eigen::VectorXd v1 = fwd.velocity(3.0);
    GeodesicPath back = integrate_ivp(m, th1, Eigen::VectorXd(-v1), 3.0);
    CHECK((back.position(3.0) - th0).cwiseAbs().maxCoeff() <= 1e-7);
    CHECK((back.velocity(3.0) + v0).cwiseAbs().maxCoeff() <= 1e-7);
}

TEST_CASE("tighter tolerance buys a smaller error") {
    Model m = build("uncorrelated_gaussian", {{"l", 1.0}});
    GeodesicPath coarse =
        integrate_ivp(m, vec({0.0, 1.0}), vec({0.0, 1.0}), 5.0, 1e-4);
    GeodesicPath fine =
        integrate_ivp(m, vec({0.0, 1.0}), vec({0.0, 1.0}), 5.0, 1e-12);
    CHECK(radial_error(fine, 5.0) < radial_error(coarse, 5.0));
    CHECK(radial_error(fine, 5.0) <= 1e-8);
}

TEST_CASE("dense output interpolates the stored nodes exactly") {
    Model m = build("spin_integrable");
    GeodesicPath p = integrate_ivp(m, vec({1.0, 1.0}), vec({1.0, 2.0}), 2.0);
    for (size_t i = 0; i < p.nodes(); ++i) {
        Eigen::VectorXd th, v;
        p.eval(p.tau[i], &th, &v);
        CHECK((th - p.theta[i]).cwiseAbs().maxCoeff() <= 1e-14);
        CHECK((v - p.vel[i]).cwiseAbs().maxCoeff() <= 1e-14);
    }
    CHECK_THROWS_AS(p.position(2.5), ValidationError);
    CHECK_THROWS_AS(p.position(-0.1), ValidationError);
}

TEST_CASE("domain exit truncates instead of stepping outside") {
    Model m = build("spin_integrable");
    // muA = exp(-tau) crosses the boundary margin near tau = 20.7
    GeodesicPath p = integrate_ivp(m, vec({1.0, 1.0}), vec({-1.0, 0.0}), 25.0);
    CHECK(p.domain_exit);
    CHECK(p.tau_end() > 19.0);
    CHECK(p.tau_end() < 22.0);
    CHECK(p.theta.back()(0) > 0.0);
}

TEST_CASE("custom flow replaces the connection") {
    Model m = build("iho", {{"omega", 1.0}});
    // d^2 theta / dtau^2 = theta from rest position gives sinh
    GeodesicPath p = integrate_ivp(m, vec({0.0}), vec({1.0}), 3.0);
    // off-node queries interpolate, so allow for the dense output error
    for (double t : {0.5, 1.0, 2.0, 3.0}) {
        CHECK(p.position(t)(0) ==
              doctest::Approx(std::sinh(t)).epsilon(1e-7));
    }
}

TEST_CASE("input validation of the initial value solver") {
    Model m = build("uncorrelated_gaussian", {{"l", 1.0}});
    CHECK_THROWS_AS(integrate_ivp(m, vec({0.0, 1.0}), vec({0.0, 1.0}), -1.0),
                    ValidationError);
    CHECK_THROWS_AS(integrate_ivp(m, vec({0.0, 1.0}), vec({0.0}), 1.0),
                    ValidationError);
    CHECK_THROWS_AS(
        integrate_ivp(m, vec({0.0, 1.0}), vec({0.0, 1.0}), 1.0, 0.0),
        ValidationError);
    CHECK_THROWS_AS(integrate_ivp(m, vec({0.0, -2.0}), vec({0.0, 1.0}), 1.0),
                    OutOfDomain);
}

TEST_CASE("shooting recovers boundary velocities") {
    Model spin = build("spin_integrable");
    BvpResult r = solve_bvp(spin, vec({1.0, 1.0}),
                            vec({std::exp(1.0), std::exp(2.0)}), 1.0);
    CHECK((r.v0 - vec({1.0, 2.0})).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK(r.residual <= 1e-8);
    CHECK(r.iterations >= 1);
    CHECK((r.path.position(1.0) - vec({std::exp(1.0), std::exp(2.0)}))
              .cwiseAbs()
              .maxCoeff() <= 1e-6);

    Model gauss = build("uncorrelated_gaussian", {{"l", 1.0}});
    BvpResult g = solve_bvp(gauss, vec({0.0, 1.0}), vec({0.0, std::exp(1.0)}),
                            1.0);
    CHECK((g.v0 - vec({0.0, 1.0})).cwiseAbs().maxCoeff() <= 1e-6);

    CHECK_THROWS_AS(solve_bvp(spin, vec({1.0, 1.0}), vec({2.0, 2.0}), 0.0),
                    ValidationError);
}
