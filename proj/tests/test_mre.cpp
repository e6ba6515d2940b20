#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "igac/errors.hpp"
#include "igac/mre.hpp"

using namespace igac;

namespace {

// coin bias grid: two candidate biases, uniform prior
GridPrior two_point() {
    GridPrior g;
    g.theta = {1.0, 2.0};
    g.weight = {1.0, 1.0};
    g.prior = {0.5, 0.5};
    g.lik = {{0.8, 0.4}};
    g.obs_names = {"heads"};
    return g;
}

GridPrior random_grid(unsigned seed, int n = 101) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    GridPrior g;
    for (int i = 0; i < n; ++i) {
        g.theta.push_back(static_cast<double>(i) / (n - 1));
        g.weight.push_back(u(rng));
        g.prior.push_back(u(rng));
        // two outcome likelihoods, strictly positive
    }
    g.lik.resize(2);
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < n; ++i) g.lik[j].push_back(u(rng));
    g.obs_names = {"a", "b"};
    return g;
}

double weighted_moment(const GridPrior& g, const std::vector<double>& mass,
                       const std::function<double(double)>& f) {
    double acc = 0.0;
    for (size_t i = 0; i < mass.size(); ++i) acc += mass[i] * f(g.theta[i]);
    return acc;
}

}  // namespace

TEST_CASE("plain conditioning on the two point grid") {
    GridPrior g = two_point();
    std::vector<double> post = bayes_update(g, {0});
    CHECK(post[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(post[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    // empty evidence renormalizes the prior
    std::vector<double> same = bayes_update(g, {});
    CHECK(same[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(same[1] == doctest::Approx(0.5).epsilon(1e-14));

    // repeated observations multiply
    std::vector<double> twice = bayes_update(g, {0, 0});
    double w0 = 0.5 * 0.64, w1 = 0.5 * 0.16;
    CHECK(twice[0] == doctest::Approx(w0 / (w0 + w1)).epsilon(1e-14));
}

TEST_CASE("moment constraint tilts the two point posterior") {
    GridPrior g = two_point();
    MomentConstraint c;
    c.f = [](double th) { return th; };
    c.target = 1.25;
    MreSolution sol = mre_update(g, {0}, c);
    // the solver stops on the moment residual, which leaves beta a small
    // multiple of 1e-12 away from the closed form
    CHECK(sol.beta == doctest::Approx(std::log(2.0 / 3.0)).epsilon(1e-10));
    CHECK(sol.posterior[0] == doctest::Approx(0.75).epsilon(1e-10));
    CHECK(sol.posterior[1] == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(sol.moment == doctest::Approx(1.25).epsilon(1e-10));
    CHECK(std::isfinite(sol.log_normalizer));
}

TEST_CASE("zero multiplier reproduces plain conditioning") {
    for (unsigned seed : {7u, 19u, 101u}) {
        GridPrior g = random_grid(seed);
        std::vector<int> obs = {0, 1, 0};
        std::vector<double> bayes = bayes_update(g, obs);

        MomentConstraint c;
        c.f = [](double th) { return th; };
        c.target = weighted_moment(g, bayes, c.f);

        MreSolution sol = mre_update(g, obs, c);
        CHECK(std::abs(sol.beta) <= 1e-9);
        double sup = 0.0;
        for (size_t i = 0; i < bayes.size(); ++i)
            sup = std::max(sup, std::abs(sol.posterior[i] - bayes[i]));
        CHECK(sup <= 1e-12);
    }
}

TEST_CASE("achieved moment lands on the target") {
    for (unsigned seed : {3u, 42u}) {
        GridPrior g = random_grid(seed);
        std::vector<int> obs = {1};
        std::vector<double> bayes = bayes_update(g, obs);

        MomentConstraint c;
        c.f = [](double th) { return th * th; };
        double base = weighted_moment(g, bayes, c.f);
        // push the expectation well away from the unconstrained value
        c.target = 0.5 * base + 0.5 * 0.9;

        MreSolution sol = mre_update(g, obs, c);
        CHECK(std::abs(sol.moment - c.target) <= 1e-10);
        double mass = 0.0;
        for (double p : sol.posterior) {
            CHECK(p >= 0.0);
            mass += p;
        }
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(sol.beta) > 1e-6);
    }
}

TEST_CASE("unattainable targets and dead grids are reported") {
    GridPrior g = two_point();
    MomentConstraint c;
    c.f = [](double th) { return th; };
    c.target = 2.5;  // observable tops out at 2
    CHECK_THROWS_AS(mre_update(g, {0}, c), InfeasibleMoment);

    try {
        mre_update(g, {0}, c);
    } catch (const InfeasibleMoment& e) {
        CHECK(e.attainable_min == doctest::Approx(1.0));
        CHECK(e.attainable_max == doctest::Approx(2.0));
    }

    GridPrior dead = two_point();
    dead.lik[0] = {0.0, 0.0};
    CHECK_THROWS_AS(bayes_update(dead, {0}), ZeroEvidence);
    c.target = 1.5;
    CHECK_THROWS_AS(mre_update(dead, {0}, c), ZeroEvidence);

    CHECK_THROWS_AS(bayes_update(g, {5}), ValidationError);
    MomentConstraint empty;
    empty.target = 1.0;
    CHECK_THROWS_AS(mre_update(g, {0}, empty), ValidationError);
}

TEST_CASE("grid priors round trip through csv") {
    namespace fs = std::filesystem;
    fs::path path = fs::temp_directory_path() / "igac_mre_grid_test.csv";
    {
        std::ofstream out(path);
        out << "theta,weight,prior,lik_heads,lik_tails\n";
        out << "1,1,0.5,0.8,0.2\n";
        out << "2,1,0.5,0.4,0.6\n";
    }
    GridPrior g = load_grid_prior(path.string());
    CHECK(g.size() == 2);
    CHECK(g.observable_index("heads") == 0);
    CHECK(g.observable_index("tails") == 1);
    CHECK(g.observable_index("edges") == -1);
    CHECK(g.lik[1][1] == doctest::Approx(0.6));
    std::vector<double> post = bayes_update(g, {0});
    CHECK(post[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    std::remove(path.string().c_str());
}
