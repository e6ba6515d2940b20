#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "igac/catalog.hpp"
#include "igac/errors.hpp"
#include "igac/manifold.hpp"

using namespace igac;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<int>(xs.size()));
    int i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

double max_rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    double worst = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            double scale = std::max(1.0, std::abs(b(i, j)));
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / scale);
        }
    return worst;
}

// normal with unit spread, location the only parameter
DensityFamily location_gaussian() {
    return gaussian_family(
        1, 1, [](const Eigen::VectorXd& th) { return th; },
        [](const Eigen::VectorXd&) {
            return Eigen::MatrixXd(Eigen::MatrixXd::Identity(1, 1));
        },
        [](const Eigen::VectorXd&) {
            return Eigen::MatrixXd(Eigen::MatrixXd::Identity(1, 1));
        },
        [](const Eigen::VectorXd&) {
            return std::vector<Eigen::MatrixXd>(1, Eigen::MatrixXd::Zero(1, 1));
        });
}

}  // namespace

TEST_CASE("domain box membership and margins") {
    DomainBox box;
    box.lo = vec({0.0, -1.0});
    box.hi = vec({std::numeric_limits<double>::infinity(), 1.0});
    CHECK(box.dim() == 2);
    CHECK(box.contains(vec({0.5, 0.0})));
    CHECK(!box.contains(vec({0.5, 1.0})));       // on the edge
    CHECK(!box.contains(vec({1e-12, 0.0})));     // inside the margin strip
    CHECK(box.violation(vec({0.5, 0.0})) == -1);
    CHECK(box.violation(vec({-1.0, 0.0})) == 0);
    CHECK(box.violation(vec({0.5, 2.0})) == 1);
    CHECK_THROWS_AS(box.require(vec({-1.0, 0.0}), "test"), OutOfDomain);
    DomainBox free = DomainBox::unbounded(3);
    CHECK(free.contains(vec({1e300, -1e300, 0.0})));
}

TEST_CASE("quadrature metric reproduces known Fisher informations") {
    // location family: information is the identity
    Eigen::MatrixXd g = metric_numeric(location_gaussian(), vec({0.7}));
    CHECK(g(0, 0) == doctest::Approx(1.0).epsilon(1e-10));

    // exponential with rate 4: information 1/16
    Eigen::MatrixXd ge =
        metric_numeric(exponential_rate_family(1, 0), vec({4.0}));
    CHECK(ge(0, 0) == doctest::Approx(1.0 / 16.0).epsilon(1e-8));

    // mean and spread of a normal at sigma = 2: diag(1/4, 1/2)
    Model m = build("uncorrelated_gaussian", {{"l", 1.0}});
    Eigen::MatrixXd gn = metric_numeric(m.family, vec({0.0, 2.0}));
    CHECK(gn(0, 0) == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(gn(1, 1) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(std::abs(gn(0, 1)) <= 1e-10);

    // agreement with the analytic rule
    CHECK(max_rel(gn, metric_analytic(m, vec({0.0, 2.0}))) <= 1e-8);
}

TEST_CASE("analytic metric enforces the domain") {
    Model m = build("uncorrelated_gaussian", {{"l", 1.0}});
    CHECK_THROWS_AS(metric_analytic(m, vec({0.0, -1.0})), OutOfDomain);
    CHECK_THROWS_AS(metric_analytic(m, vec({0.0, 0.0})), OutOfDomain);
    CHECK_THROWS_AS(metric_analytic(m, vec({0.0})), Error);  // wrong dimension
}

TEST_CASE("fisher density is the root determinant") {
    Eigen::MatrixXd g(2, 2);
    g << 0.25, 0.0, 0.0, 0.5;
    CHECK(fisher_density(g) == doctest::Approx(std::sqrt(0.125)).epsilon(1e-15));
    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0;  // det = -3
    CHECK_THROWS_AS(fisher_density(bad), NonPositiveDeterminant);
}

TEST_CASE("finite difference connection matches the closed form") {
    Model m = build("uncorrelated_gaussian", {{"l", 1.0}});
    Eigen::VectorXd th = vec({0.3, 2.0});

    std::vector<Eigen::MatrixXd> analytic = christoffel(m, th);

    Model fd = m;  // same metric, derivatives by stencil only
    fd.christoffels = nullptr;
    fd.metric_partials = nullptr;
    std::vector<Eigen::MatrixXd> numeric = christoffel(fd, th);

    REQUIRE(analytic.size() == 2);
    for (size_t k = 0; k < analytic.size(); ++k)
        CHECK(max_rel(numeric[k], analytic[k]) <= 1e-7);

    // hyperbolic half plane values at sigma = 2
    CHECK(analytic[0](0, 1) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(analytic[0](1, 0) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(analytic[1](1, 1) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(analytic[1](0, 0) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("metric transforms covariantly under reparametrization") {
    Model m = build("uncorrelated_gaussian", {{"l", 1.0}});

    Diffeo ident;
    ident.forward = [](const Eigen::VectorXd& p) { return p; };
    ident.jacobian = [](const Eigen::VectorXd& p) {
        return Eigen::MatrixXd(
            Eigen::MatrixXd::Identity(p.size(), p.size()));
    };
    CHECK(check_reparam_covariance(m, ident, vec({0.4, 1.5})) <= 1e-10);

    // log spread coordinates: theta = (phi1, exp(phi2))
    Diffeo logs;
    logs.forward = [](const Eigen::VectorXd& p) {
        return vec({p(0), std::exp(p(1))});
    };
    logs.jacobian = [](const Eigen::VectorXd& p) {
        Eigen::MatrixXd j = Eigen::MatrixXd::Identity(2, 2);
        j(1, 1) = std::exp(p(1));
        return j;
    };
    CHECK(check_reparam_covariance(m, logs, vec({0.4, 0.3})) <= 1e-8);

    Diffeo collapsed;
    collapsed.forward = [](const Eigen::VectorXd& p) { return p; };
    collapsed.jacobian = [](const Eigen::VectorXd& p) {
        return Eigen::MatrixXd(Eigen::MatrixXd::Zero(p.size(), p.size()));
    };
    CHECK_THROWS_AS(check_reparam_covariance(m, collapsed, vec({0.4, 1.5})),
                    NonInvertibleJacobian);
}
