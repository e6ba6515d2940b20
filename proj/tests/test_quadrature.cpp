#include <doctest.h>

#include <cmath>

#include "igac/errors.hpp"
#include "igac/quadrature.hpp"

using namespace igac;

namespace {

double apply(const QuadRule& r, double (*f)(double)) {
    double acc = 0.0;
    for (int i = 0; i < r.nodes.size(); ++i) acc += r.weights(i) * f(r.nodes(i));
    return acc;
}

double moment(const QuadRule& r, int k) {
    double acc = 0.0;
    for (int i = 0; i < r.nodes.size(); ++i)
        acc += r.weights(i) * std::pow(r.nodes(i), k);
    return acc;
}

// exp(-x^2) moments over the real line: odd vanish, even follow the
// half-integer gamma recursion m_{k} = (k-1)/2 * m_{k-2}, m_0 = sqrt(pi)
double hermite_moment(int k) {
    if (k % 2 == 1) return 0.0;
    double m = std::sqrt(M_PI);
    for (int j = 2; j <= k; j += 2) m *= 0.5 * (j - 1);
    return m;
}

double factorial(int k) {
    double f = 1.0;
    for (int j = 2; j <= k; ++j) f *= j;
    return f;
}

}  // namespace

TEST_CASE("hermite rule integrates polynomials up to degree 2n-1") {
    const QuadRule& r = gauss_hermite(8);
    REQUIRE(r.nodes.size() == 8);
    for (int k = 0; k <= 15; ++k) {
        double got = moment(r, k);
        double want = hermite_moment(k);
        // odd moments vanish by cancellation, so scale the bound by the
        // magnitude of the summed terms rather than the result
        double mag = 0.0;
        for (int i = 0; i < r.nodes.size(); ++i)
            mag += std::abs(r.weights(i)) *
                   std::pow(std::abs(r.nodes(i)), k);
        CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, mag));
    }
    // degree 2n breaks exactness, so the rule is not accidentally oversized
    CHECK(std::abs(moment(r, 16) - hermite_moment(16)) > 1e-6);
}

TEST_CASE("laguerre rule reproduces factorials") {
    const QuadRule& r = gauss_laguerre(8);
    for (int k = 0; k <= 15; ++k) {
        double want = factorial(k);
        CHECK(std::abs(moment(r, k) - want) <= 1e-11 * want);
    }
}

TEST_CASE("legendre rule reproduces interval moments") {
    const QuadRule& r = gauss_legendre(8);
    for (int k = 0; k <= 15; ++k) {
        double want = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
        CHECK(std::abs(moment(r, k) - want) <= 1e-13);
    }
}

TEST_CASE("node symmetry and weight positivity") {
    for (int n : {5, 16, 64}) {
        const QuadRule& h = gauss_hermite(n);
        const QuadRule& l = gauss_legendre(n);
        const QuadRule& g = gauss_laguerre(n);
        for (int i = 0; i < n; ++i) {
            CHECK(h.weights(i) > 0.0);
            CHECK(l.weights(i) > 0.0);
            CHECK(g.weights(i) > 0.0);
            CHECK(g.nodes(i) >= 0.0);
            // symmetric rules pair up across zero
            CHECK(h.nodes(i) == doctest::Approx(-h.nodes(n - 1 - i)).epsilon(1e-12));
            CHECK(l.nodes(i) == doctest::Approx(-l.nodes(n - 1 - i)).epsilon(1e-12));
        }
    }
}

TEST_CASE("smooth non polynomial integrand converges") {
    // int exp(-x^2) cos(x) dx = sqrt(pi) exp(-1/4)
    double want = std::sqrt(M_PI) * std::exp(-0.25);
    double got = apply(gauss_hermite(32), [](double x) { return std::cos(x); });
    CHECK(got == doctest::Approx(want).epsilon(1e-13));

    // int_0^inf exp(-x) sin(x) dx = 1/2
    double got2 = apply(gauss_laguerre(48), [](double x) { return std::sin(x); });
    CHECK(got2 == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("rules are cached per order") {
    const QuadRule* a = &gauss_hermite(24);
    const QuadRule* b = &gauss_hermite(24);
    CHECK(a == b);
    const QuadRule* c = &gauss_legendre(24);
    CHECK(static_cast<const void*>(c) != static_cast<const void*>(a));
}

TEST_CASE("nonpositive order is rejected") {
    CHECK_THROWS_AS(gauss_hermite(0), ValidationError);
    CHECK_THROWS_AS(gauss_laguerre(-3), ValidationError);
}
