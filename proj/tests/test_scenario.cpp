#include <doctest.h>

#include <cmath>
#include <string>

#include "igac/errors.hpp"
#include "igac/scenario.hpp"

using namespace igac;

namespace {

const char* kMinimalTrace =
    "[scenario]\n"
    "id = demo_trace\n"
    "kind = complexity_trace\n"
    "[model]\n"
    "name = spin_integrable\n"
    "[geodesic]\n"
    "theta0 = 1, 1\n"
    "v0 = 1, 2\n"
    "tau_max = 10\n";

int parse_error_line(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ParseError& e) {
        return e.line_number;
    }
    return -2;
}

bool validation_rejects(const std::string& text, const char* needle = "") {
    try {
        parse_scenario(text);
    } catch (const Error& e) {
        // both parse and validation failures count as config rejection; the
        // message must name the offending field either way
        return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
}

}  // namespace

TEST_CASE("minimal trace config picks up the documented defaults") {
    Scenario sc = parse_scenario(kMinimalTrace);
    CHECK(sc.id == "demo_trace");
    CHECK(sc.kind == "complexity_trace");
    CHECK(sc.model_name == "spin_integrable");
    CHECK(sc.theta0.size() == 2);
    CHECK(sc.v0[1] == doctest::Approx(2.0));
    CHECK(sc.tau_max == doctest::Approx(10.0));
    CHECK(sc.tau_min == doctest::Approx(0.5));
    CHECK(sc.samples == 200);
    CHECK(sc.tol == doctest::Approx(1e-10));
    CHECK(sc.s0 == doctest::Approx(0.0));
    CHECK(sc.tail == doctest::Approx(0.5));
    CHECK(sc.quantity == "ige");
    CHECK(sc.compare.op.empty());
    CHECK(!sc.has_expect_regime);
}

TEST_CASE("comments, spacing and scientific notation") {
    Scenario sc = parse_scenario(
        "# run header\n"
        "[scenario]\n"
        "id = spaced\n"
        "kind = complexity_trace   # trailing note\n"
        "\n"
        "[model]\n"
        "name = uncorrelated_gaussian\n"
        "l = 1\n"
        "[geodesic]\n"
        "theta0 = 0, 1e9\n"
        "v0 = 0, -2e9\n"
        "tau_max = 20\n"
        "tol = 1e-12\n"
        "[complexity]\n"
        "s0 = 0\n"
        "tail = 0.25\n"
        "quantity = volume\n");
    CHECK(sc.model_params.at("l") == doctest::Approx(1.0));
    CHECK(sc.theta0[1] == doctest::Approx(1e9));
    CHECK(sc.v0[1] == doctest::Approx(-2e9));
    CHECK(sc.tol == doctest::Approx(1e-12));
    CHECK(sc.tail == doctest::Approx(0.25));
    CHECK(sc.quantity == "volume");
}

TEST_CASE("expectation and comparison blocks bind") {
    Scenario sc = parse_scenario(
        "[scenario]\n"
        "id = s\n"
        "kind = complexity_trace\n"
        "[model]\n"
        "name = scattering_corr\n"
        "rho = 0.5\n"
        "[geodesic]\n"
        "theta0 = 0, 0, 1.4142135623730951\n"
        "v0 = 0, 0, -1.4142135623730951\n"
        "tau_max = 12\n"
        "[compare]\n"
        "op = scattering_ige_closed\n"
        "quantity = ige\n"
        "tail_delta_max = 5e-6\n"
        "rho = 0.5\n"
        "lambda = 2\n"
        "[expect]\n"
        "r2_min = 0.999\n");
    CHECK(sc.compare.op == "scattering_ige_closed");
    CHECK(sc.compare.quantity == "ige");
    CHECK(sc.compare.has_tail_delta);
    CHECK(sc.compare.tail_delta_max == doctest::Approx(5e-6));
    CHECK(sc.compare.params.at("lambda") == doctest::Approx(2.0));
    CHECK(sc.has_r2_min);
    CHECK(sc.r2_min == doctest::Approx(0.999));

    // the bound op must be evaluable at the horizon
    std::function<double(double)> f =
        closed_form_op(sc.compare.op, sc.compare.params);
    CHECK(f(3.0) == doctest::Approx(2.0 * 3.0 - std::log(2.0 * 3.0) +
                                    0.5 * std::log(1.0 / 3.0))
                        .epsilon(1e-12));
}

TEST_CASE("parse failures carry line numbers") {
    CHECK(parse_error_line("[scenario\nid = x\n") == 1);
    CHECK(parse_error_line("[scenario]\nid = x\nkind = metric_check\n"
                           "[wrong]\n") == 4);
    CHECK(parse_error_line("[scenario]\nid = x\nbroken line\n") == 3);
    CHECK(parse_error_line("key = 1\n") == 1);  // key before any section
    CHECK(parse_error_line("[scenario]\nid = x\nid = y\n") == 3);
    CHECK(parse_error_line("[scenario]\nid = x\n[scenario]\nkind = z\n") == 3);
    CHECK(parse_error_line("[scenario]\n= 3\n") == 2);
}

TEST_CASE("missing and inconsistent fields are named") {
    // initial velocity is mandatory for initial value runs
    CHECK(validation_rejects("[scenario]\n"
                             "id = x\n"
                             "kind = geodesic_ivp\n"
                             "[model]\n"
                             "name = spin_integrable\n"
                             "[geodesic]\n"
                             "theta0 = 1, 1\n"
                             "tau_max = 5\n",
                             "v0"));
    // unknown kind
    CHECK(validation_rejects("[scenario]\nid = x\nkind = wat\n", "kind"));
    // id charset
    CHECK(validation_rejects("[scenario]\nid = bad id!\nkind = metric_check\n"
                             "[model]\nname = gauss_3du\n",
                             "id"));
    // catalog domain propagates with the bound in the text
    CHECK(validation_rejects("[scenario]\n"
                             "id = x\n"
                             "kind = metric_check\n"
                             "[model]\n"
                             "name = trivariate_case2\n"
                             "rho = 0.8\n",
                             "0.707107"));
    // dimension mismatch of the start point
    CHECK(validation_rejects("[scenario]\n"
                             "id = x\n"
                             "kind = geodesic_ivp\n"
                             "[model]\n"
                             "name = spin_integrable\n"
                             "[geodesic]\n"
                             "theta0 = 1\n"
                             "v0 = 1\n"
                             "tau_max = 5\n"));
    // sections that do not apply to the kind are rejected
    CHECK(validation_rejects("[scenario]\n"
                             "id = x\n"
                             "kind = metric_check\n"
                             "[model]\n"
                             "name = gauss_3du\n"
                             "[geodesic]\n"
                             "theta0 = 0, 0, 1\n"
                             "v0 = 0, 0, 1\n"
                             "tau_max = 1\n"));
    // unknown key inside a known section
    CHECK(validation_rejects(std::string(kMinimalTrace) + "[complexity]\n"
                                                          "wibble = 3\n",
                             "wibble"));
    // tail fraction range
    CHECK(validation_rejects(std::string(kMinimalTrace) + "[complexity]\n"
                                                          "tail = 1.5\n"));
    // quantity spelling
    CHECK(validation_rejects(std::string(kMinimalTrace) + "[complexity]\n"
                                                          "quantity = both\n"));
    // rate expectations need a tolerance
    CHECK(validation_rejects(std::string(kMinimalTrace) + "[expect]\n"
                                                          "rate = 2\n",
                             "rate_tol"));
    // recovered velocity expectations only make sense for two point runs
    CHECK(validation_rejects(std::string(kMinimalTrace) + "[expect]\n"
                                                          "v0 = 1, 2\n"));
    // regime names are closed vocabulary
    CHECK(validation_rejects(std::string(kMinimalTrace) + "[expect]\n"
                                                          "regime = cubic\n"));
    // moment polynomial without a target
    CHECK(validation_rejects("[scenario]\n"
                             "id = x\n"
                             "kind = mre_update\n"
                             "[mre]\n"
                             "grid = g.csv\n"
                             "observations = heads\n"
                             "moment_poly = 0, 1\n",
                             "target"));
    // two point runs need an endpoint and a flight time
    CHECK(validation_rejects("[scenario]\n"
                             "id = x\n"
                             "kind = geodesic_bvp\n"
                             "[model]\n"
                             "name = spin_integrable\n"
                             "[geodesic]\n"
                             "theta0 = 1, 1\n"
                             "theta1 = 2, 2\n",
                             "span"));
}

TEST_CASE("metric check accepts an explicit probe point") {
    Scenario sc = parse_scenario(
        "[scenario]\n"
        "id = m\n"
        "kind = metric_check\n"
        "[model]\n"
        "name = gauss_2du\n"
        "Sigma = 1\n"
        "[metric_check]\n"
        "points = 7\n"
        "seed = 99\n"
        "tol = 1e-7\n"
        "theta = 0.4, 1.3\n");
    CHECK(sc.mc_points == 7);
    CHECK(sc.mc_seed == 99);
    CHECK(sc.mc_tol == doctest::Approx(1e-7));
    CHECK(sc.mc_theta.size() == 2);

    Scenario defaults = parse_scenario(
        "[scenario]\n"
        "id = m\n"
        "kind = metric_check\n"
        "[model]\n"
        "name = gauss_3du\n");
    CHECK(defaults.mc_points == 20);
    CHECK(defaults.mc_seed == 12345);
    CHECK(defaults.mc_tol == doctest::Approx(1e-6));
    CHECK(defaults.mc_theta.empty());

    CHECK(validation_rejects("[scenario]\n"
                             "id = m\n"
                             "kind = metric_check\n"
                             "[model]\n"
                             "name = gauss_3du\n"
                             "[metric_check]\n"
                             "points = 0\n"));
    // explicit probe outside the domain
    CHECK(validation_rejects("[scenario]\n"
                             "id = m\n"
                             "kind = metric_check\n"
                             "[model]\n"
                             "name = gauss_2du\n"
                             "[metric_check]\n"
                             "theta = 0.4, -1.0\n"));
}

TEST_CASE("ratio tables parse their sweep") {
    Scenario sc = parse_scenario(
        "[scenario]\n"
        "id = r\n"
        "kind = ratio_table\n"
        "[ratios]\n"
        "family = trivariate_mildly_weak\n"
        "grid = -0.6:0.6:0.01\n");
    CHECK(sc.ratio_family == "trivariate_mildly_weak");
    CHECK(sc.grid_step == doctest::Approx(0.01));

    // endpoints must sit inside the family domain
    CHECK(validation_rejects("[scenario]\n"
                             "id = r\n"
                             "kind = ratio_table\n"
                             "[ratios]\n"
                             "family = trivariate_mildly_weak\n"
                             "grid = -0.9:0.5:0.1\n"));
    CHECK(validation_rejects("[scenario]\n"
                             "id = r\n"
                             "kind = ratio_table\n"
                             "[ratios]\n"
                             "family = no_such_family\n"
                             "grid = 0:0.5:0.1\n",
                             "family"));
}

TEST_CASE("grid specification arithmetic") {
    GridSpec g = parse_grid("0:1:0.25");
    std::vector<double> pts = g.points();
    REQUIRE(pts.size() == 5);
    CHECK(pts.front() == doctest::Approx(0.0));
    CHECK(pts.back() == doctest::Approx(1.0));

    CHECK(parse_grid("-0.6:0.6:0.01").points().size() == 121);
    CHECK(parse_grid("2:2:1").points().size() == 1);

    CHECK_THROWS_AS(parse_grid("1:0:0.1"), ValidationError);
    CHECK_THROWS_AS(parse_grid("0:1:0"), ValidationError);
    CHECK_THROWS_AS(parse_grid("0:1:-0.1"), ValidationError);
    CHECK_THROWS_AS(parse_grid("zero:1:0.1"), ValidationError);
    CHECK_THROWS_AS(parse_grid("0:1"), ValidationError);
}

TEST_CASE("name lookups for families and comparison ops") {
    CHECK(ratio_family_fn("bivariate_strong")(0.44) ==
          doctest::Approx(1.2).epsilon(1e-14));
    CHECK(ratio_family_fn("f_micro")(0.5) ==
          doctest::Approx(0.6).epsilon(1e-12));
    CHECK_THROWS_AS(ratio_family_fn("bogus"), ValidationError);

    std::map<std::string, double> p = {
        {"rho", 0.5}, {"sigma0", 1.0}, {"a1", 1.0}};
    std::function<double(double)> f = closed_form_op("bivariate_igc_closed", p);
    CHECK(f(2.0) ==
          doctest::Approx(4.0 * std::sqrt(2.0) * std::sqrt(1.5) / 2.0)
              .epsilon(1e-12));

    CHECK_THROWS_AS(closed_form_op("bivariate_igc_closed",
                                   {{"rho", 0.5}, {"sigma0", 1.0}}),
                    ValidationError);  // a1 missing
    CHECK_THROWS_AS(
        closed_form_op("bivariate_igc_closed",
                       {{"rho", 0.5}, {"sigma0", 1.0}, {"a1", 1.0},
                        {"zeta", 2.0}}),
        ValidationError);  // stray constant
    CHECK_THROWS_AS(closed_form_op("no_such_op", {}), ValidationError);
    CHECK_THROWS_AS(
        closed_form_op("trivariate_igc_closed",
                       {{"k", 1.5}, {"rho", 0.1}, {"sigma0", 1.0},
                        {"a1", 1.0}}),
        ValidationError);  // k must be integral
}
