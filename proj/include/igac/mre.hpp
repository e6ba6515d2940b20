#pragma once

#include <functional>
#include <string>
#include <vector>

namespace igac {

// Discretized prior over a one dimensional parameter grid, plus likelihood
// columns for a set of observable outcomes. `weight` carries the quadrature
// weight of each node so the masses weight*prior sum to one for a normalized
// setup (the updater renormalizes anyway).
struct GridPrior {
    std::vector<double> theta;
    std::vector<double> weight;
    std::vector<double> prior;
    std::vector<std::vector<double>> lik;  // lik[j][i]: outcome j at node i
    std::vector<std::string> obs_names;

    size_t size() const { return theta.size(); }
    int observable_index(const std::string& name) const;
};

// Read a grid prior from CSV with columns: theta, weight, prior, lik_<name>...
GridPrior load_grid_prior(const std::string& csv_path);

struct MomentConstraint {
    std::function<double(double)> f;  // observable on the parameter grid
    double target = 0.0;
};

struct MreSolution {
    std::vector<double> posterior;  // node masses, sum to one
    double beta = 0.0;              // multiplier of the moment constraint
    double moment = 0.0;            // achieved expectation of f
    double log_normalizer = 0.0;
};

// Posterior masses after conditioning on the observation sequence
// (indices into lik). Throws ZeroEvidence when every node gets mass zero.
std::vector<double> bayes_update(const GridPrior& g,
                                 const std::vector<int>& obs_seq);

// Update with both the observation sequence and a moment constraint
// E[f] = target. The exponential tilt parameter beta is found by a
// safeguarded bracketing solve; beta = 0 reproduces bayes_update exactly.
MreSolution mre_update(const GridPrior& g, const std::vector<int>& obs_seq,
                       const MomentConstraint& c);

// The root finding step alone, for diagnostics.
double solve_beta(const GridPrior& g, const std::vector<int>& obs_seq,
                  const MomentConstraint& c);

}  // namespace igac
