#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace igac {

// Declarative experiment description, one per file. The format is INI style
// sections with key = value lines and '#' comments:
//
//   [scenario]
//   id = radial_demo
//   kind = complexity_trace        # metric_check | geodesic_ivp |
//                                  # geodesic_bvp | complexity_trace |
//                                  # ratio_table | mre_update
//
//   [model]
//   name = uncorrelated_gaussian   # catalog name
//   l = 1                          # every other key is a model parameter
//
//   [geodesic]
//   theta0 = 0, 1                  # initial coordinates
//   v0 = 0, 1                      # initial velocity (ivp / trace)
//   theta1 = 0, 2.718281828        # target point (bvp)
//   span = 1                       # time of flight (bvp)
//   tau_min = 0.5                  # trace grid start (trace: > 0)
//   tau_max = 20                   # integration end
//   samples = 391                  # grid size
//   tol = 1e-10                    # integrator tolerance
//
//   [complexity]
//   s0 = 0                         # window start offset on the path
//   tail = 0.5                     # trailing fraction used by the fit
//   quantity = ige                 # series the growth fit runs on:
//                                  # ige | igc | volume
//
//   [compare]                      # optional closed form comparison
//   op = bivariate_igc_closed
//   quantity = igc                 # series the closed form predicts
//   tail_delta_max = 1e-6          # optional: assert the tail gap
//   rho = 0.5                      # remaining keys are op constants
//   sigma0 = 1
//   a1 = 1
//
//   [expect]                       # optional assertions
//   regime = linear
//   r2_min = 0.999
//   rate = 2.0                     # asserted with rate_tol
//   rate_tol = 0.04
//   v0 = 1, 2                      # bvp: recovered initial velocity
//   v0_tol = 1e-6
//   beta = -0.405465               # mre: multiplier, with beta_tol
//   beta_tol = 1e-9
//
//   [metric_check]
//   points = 20                    # random interior points
//   seed = 12345
//   tol = 1e-6                     # relative mismatch bound (asserted)
//   theta = 0.3, 1.7               # optional explicit point instead
//
//   [ratios]
//   family = bivariate_strong
//   grid = -0.9:0.9:0.1            # inclusive endpoints
//
//   [mre]
//   grid = priors/two_point.csv    # columns theta, weight, prior, lik_<name>
//   observations = heads, heads    # likelihood columns, in order
//   moment_poly = 0, 1             # f(theta) = c0 + c1 theta + ...
//   target = 1.25
//
//   [output]
//   dir = out                      # overridden by --out and IGAC_OUT

struct CompareSpec {
    std::string op;        // empty = no comparison requested
    std::string quantity = "igc";
    std::map<std::string, double> params;
    // when set, asserts max |numeric - closed_form| over the fit tail
    bool has_tail_delta = false;
    double tail_delta_max = 0.0;
};

struct Scenario {
    std::string id;
    std::string kind;
    std::string source_path;

    std::string model_name;
    std::map<std::string, double> model_params;

    std::vector<double> theta0;
    std::vector<double> v0;
    std::vector<double> theta1;
    double tau_min = 0.0;
    double tau_max = 0.0;
    int samples = 200;
    double span = 0.0;
    double tol = 1e-10;

    double s0 = 0.0;
    double tail = 0.5;
    std::string quantity = "ige";

    CompareSpec compare;

    bool has_expect_regime = false;
    std::string expect_regime;
    bool has_r2_min = false;
    double r2_min = 0.0;
    bool has_expect_rate = false;
    double expect_rate = 0.0;
    double rate_tol = 0.0;
    bool has_expect_v0 = false;
    std::vector<double> expect_v0;
    double v0_tol = 1e-6;
    bool has_expect_beta = false;
    double expect_beta = 0.0;
    double beta_tol = 1e-9;

    int mc_points = 20;
    unsigned long mc_seed = 12345;
    double mc_tol = 1e-6;
    std::vector<double> mc_theta;

    std::string ratio_family;
    double grid_lo = 0.0;
    double grid_hi = 0.0;
    double grid_step = 0.0;

    std::string mre_grid_path;
    std::vector<std::string> observations;
    bool has_moment = false;
    std::vector<double> moment_poly;
    double moment_target = 0.0;

    std::string out_dir;
};

// Parse and validate. Throws ParseError (malformed text, with the line
// number) or ValidationError (missing/inconsistent fields, catalog domain
// violations with the offending bound named).
Scenario parse_scenario(const std::string& text,
                        const std::string& source_path = "");

// parse_scenario on a file's contents. Throws IoError when unreadable.
Scenario load_scenario(const std::string& path);

// "a:b:step" with inclusive endpoints. Throws ValidationError on nonsense
// (step <= 0, b < a, malformed text).
struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.0;
    std::vector<double> points() const;
};
GridSpec parse_grid(const std::string& text);

// The ratio family behind a ratio_table scenario or `igac ratios`.
// Known names: bivariate_strong, trivariate_weak, trivariate_mildly_weak,
// trivariate_strong, ratio_3v2, f_micro, scattering_igc_ratio,
// scattering_ige_shift. Throws ValidationError for anything else.
std::function<double(double)> ratio_family_fn(const std::string& family);

// Closed form asymptote as a function of tau, bound to the constants in
// `params`. Known ops match the catalog's *_closed functions. Throws
// ValidationError on unknown names, missing or extra constants.
std::function<double(double)> closed_form_op(
    const std::string& op, const std::map<std::string, double>& params);

}  // namespace igac
