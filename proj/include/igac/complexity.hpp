#pragma once

#include <functional>
#include <string>
#include <vector>

#include "igac/geodesic.hpp"
#include "igac/manifold.hpp"

namespace igac {

// Volume swept by the flow between arc parameter s0 and s. When the model
// carries a per-coordinate factorization of det g, the volume is the product
// over coordinates of int sqrt(f_k(theta_k(a))) |dtheta_k/da| da, with
// coordinates that stay constant along the window contributing a factor of
// one. Without a factorization the volume is the integral of sqrt(det g)
// over the coordinate box spanned by the window's endpoints, frozen
// coordinates held fixed.
double volume_at(const Model& m, const GeodesicPath& path, double s,
                 double s0 = 0.0);

// Volume, averaged volume (complexity) and its log (entropy analogue) on a
// grid of offsets from s0.
struct Trace {
    std::vector<double> tau;
    std::vector<double> volume;
    std::vector<double> igc;
    std::vector<double> ige;
};

// C(tau) = (1/tau) int_0^tau V(s0 + u) du evaluated on tau_grid (strictly
// increasing, nonnegative). The running integral uses composite Simpson
// panels refined to at least span/1024.
Trace igc(const Model& m, const GeodesicPath& path,
          const std::vector<double>& tau_grid, double s0 = 0.0);

// Same, with the volume profile supplied directly as a function of the
// offset u from the window start. Used for synthetic checks.
Trace igc_from_function(const std::function<double(double)>& volume,
                        const std::vector<double>& tau_grid);

// Least squares slope of ige against tau over tau in [win_lo, win_hi].
// Needs at least ten finite samples in the window.
double ks_analogue(const Trace& t, double win_lo, double win_hi);

// Convenience: window spanning the trailing `tail_fraction` of the tau range.
double ks_analogue_tail(const Trace& t, double tail_fraction);

struct FitCandidate {
    std::string regime;
    bool usable = false;     // transform defined on the whole tail
    double r2 = 0.0;         // in transform space
    double slope = 0.0;
    double intercept = 0.0;
};

struct GrowthFit {
    // winner regime, or "ambiguous" when the top two R^2 are within 0.001
    std::string regime;
    double rate = 0.0;       // winner slope in transform space
    double intercept = 0.0;
    double r2 = 0.0;
    double margin = 0.0;     // winner R^2 minus runner up R^2
    std::vector<FitCandidate> candidates;
    size_t tail_count = 0;
    double tail_lo = 0.0;
    double tail_hi = 0.0;
};

// Compare four growth laws on the trailing ceil(tail_fraction * n) samples:
//   linear        y = a + b tau
//   logarithmic   y = a + b log tau      (tau > 0)
//   exponential   log y = a + b tau      (y > 0)
//   power         log y = a + b log tau  (y > 0, tau > 0)
// R^2 is computed in the fit's transform space. Candidates whose transform is
// undefined anywhere on the tail are dropped. Winner must beat the runner up
// by 0.001 in R^2 to be named, otherwise the regime is "ambiguous".
GrowthFit classify_growth(const std::vector<double>& tau,
                          const std::vector<double>& y,
                          double tail_fraction = 0.5);

// Human readable block for fit reports.
std::string format_fit(const GrowthFit& fit);

}  // namespace igac
