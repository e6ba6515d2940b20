#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "igac/manifold.hpp"

namespace igac {

// ---------------------------------------------------------------------------
// Ready made models
// ---------------------------------------------------------------------------

struct CatalogEntry {
    std::string name;
    std::string dim;         // "2", "2l", ...
    std::string params;      // names with domains, empty when parameter free
    std::string application; // what the model is for, one line
};

std::vector<CatalogEntry> list_models();

// Construct a catalog model by name. Parameter keys per model:
//   uncorrelated_gaussian   l (integer, 1..3)
//   bivariate_corr          rho in (-1, 1)
//   trivariate_case1        rho in (-1, 1)
//   trivariate_case2        rho in (-sqrt2/2, sqrt2/2)
//   trivariate_case3        rho in (-1/2, 1)
//   microcorrelated_3d      rho in (-1, 1)
//   embedded_gaussian       l (integer, 1..3), rho in [0, 1) optional
//                           (default: the shipped linear constraint)
//   gauss_3du               none
//   gauss_2du               Sigma > 0
//   gauss_3dc               rho in (-1, 1)
//   gauss_2dc               rho in (-1, 1), Sigma > 0
//   iho                     omega1..omegaN > 0 (N = dimension, up to 6)
//   spin_integrable         none
//   spin_chaotic            none
//   scattering_uncorr       none
//   scattering_corr         rho in [0, 1)
// Throws ParamOutOfRange (bad value, names the bound) or ValidationError
// (unknown model or parameter key).
Model build(const std::string& name,
            const std::map<std::string, double>& params = {});

// Flat n dimensional test model (identity metric); not part of the listing.
Model make_euclidean(int n);

// Embedded family construction from a user supplied constraint callable
// mu2(mu, sigma); the correlation coefficient comes from the constraint's
// partial derivatives at (mu_ref, sigma_ref) by central differences. The
// catalog default is the linear constraint mu2 = mu + sigma.
Model embedded_from_constraint(
    int l, const std::function<double(double, double)>& constraint,
    double mu_ref = 1.0, double sigma_ref = 1.0);

// Correlation induced by an embedding constraint with the given partial
// derivatives a = d mu2 / d mu, b = d mu2 / d sigma.
double embedded_rho(double a, double b);

// ---------------------------------------------------------------------------
// Closed form ratios and asymptotics
// ---------------------------------------------------------------------------

// complexity ratios of the correlated Gaussian families, correlated over
// uncorrelated at equal initial data
double ratio_bivariate_strong(double rho);         // sqrt(1+rho)
double ratio_trivariate_weak(double rho);          // sqrt(3) sqrt((1+rho)/(3+rho))
double ratio_trivariate_mildly_weak(double rho);   // sqrt(3) sqrt((1-2rho^2)/(3-4rho))
double ratio_trivariate_strong(double rho);        // sqrt(1+2rho)
double ratio_3v2(double rho);                      // sqrt((1+2rho)/(1+rho))

// correction factor of the micro correlated planar model, decreasing in rho
double f_micro(double rho);

// two particle scattering channel
double scattering_igc_ratio(double rho);           // sqrt((1-rho)/(1+rho))
double scattering_ige_shift(double rho);           // log of the above
double scattering_igc_closed(double tau, double rho, double lambda);
double scattering_ige_closed(double tau, double rho, double lambda);
double rho_from_complexity(double c_uncorr, double c_corr);

struct ScatteringParams {
    double k0 = 0.0;        // wavenumber
    double sigma_k0 = 0.0;  // momentum dispersion
    double R0 = 0.0;        // initial separation
    double L = 0.0;         // potential range
    double a_s = 0.0;       // s-wave scattering length
};

struct PurityResult {
    double value = 0.0;
    bool regime_warning = false;  // perturbative assumptions violated
    std::string warning;
};

// Purity of the post collision two particle state, perturbative in the
// interaction. Out of regime inputs (k0 L or the implied quantum correlation
// not small) still evaluate but carry a warning.
PurityResult purity(double rho, const ScatteringParams& p);
double rho_qm(const ScatteringParams& p);

// entropy asymptote of the embedded Gaussian family: l log(L1 + L2 / tau)
double embedded_delta(double rho);  // 1 + 4 rho^2
double embedded_ige_closed(double tau, int l, double lambda, double xi,
                           double rho);

// complexity asymptotes of the remaining families (free constants are
// accepted as arguments; none are derivable from initial data alone)
double bivariate_igc_closed(double tau, double rho, double sigma0, double a1);
double trivariate_igc_closed(int k, double tau, double rho, double sigma0,
                             double a1);
double micro_igc_closed(double tau, double rho, double a, double sigma0);
double gauss_igc_closed_2du(double tau, double mu0, double sigma0,
                            double lambda_plus);
double gauss_igc_closed_2dc(double tau, double mu0, double sigma0,
                            double lambda_plus, double rho);
double gauss_ige_closed_3du(double tau, double lambda_prime_plus);
double gauss_ige_closed_2du(double tau, double lambda_prime_plus);
double gauss_ige_closed_2dc(double tau, double sigma0, double lambda_plus);
double iho_igc_closed(double tau, int l, double amp, double xi, double omega);
double iho_ige_closed(double tau, double omega);

}  // namespace igac
