#include "igac/mre.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "igac/csvio.hpp"
#include "igac/errors.hpp"

namespace igac {

namespace {

const double kNegInf = -std::numeric_limits<double>::infinity();

// log of weight * prior * prod lik over the observation sequence, node-wise;
// -inf marks nodes outside the support
std::vector<double> log_base_mass(const GridPrior& g,
                                  const std::vector<int>& obs_seq) {
    const size_t n = g.size();
    if (n == 0) throw ValidationError("empty parameter grid");
    if (g.weight.size() != n || g.prior.size() != n)
        throw ValidationError("grid columns differ in length");
    for (const auto& col : g.lik)
        if (col.size() != n)
            throw ValidationError("likelihood column length mismatch");

    std::vector<double> lw(n);
    for (size_t i = 0; i < n; ++i) {
        double w = g.weight[i], p = g.prior[i];
        if (w < 0.0 || p < 0.0)
            throw ValidationError("weights and prior must be nonnegative");
        lw[i] = (w > 0.0 && p > 0.0) ? std::log(w) + std::log(p) : kNegInf;
    }
    for (int j : obs_seq) {
        if (j < 0 || j >= static_cast<int>(g.lik.size()))
            throw ValidationError("observation index " + std::to_string(j) +
                                  " out of range");
        for (size_t i = 0; i < n; ++i) {
            double l = g.lik[j][i];
            if (l < 0.0)
                throw ValidationError("likelihood values must be nonnegative");
            lw[i] = l > 0.0 ? lw[i] + std::log(l) : kNegInf;
        }
    }
    return lw;
}

struct Tilted {
    std::vector<double> mass;  // normalized
    double moment = 0.0;
    double log_z = 0.0;  // log sum exp of the shifted exponents
};

// normalize exp(lw + beta f) in log space with a max shift
Tilted tilt(const std::vector<double>& lw, const std::vector<double>& f,
            double beta) {
    const size_t n = lw.size();
    double shift = kNegInf;
    for (size_t i = 0; i < n; ++i)
        if (lw[i] != kNegInf) shift = std::max(shift, lw[i] + beta * f[i]);
    if (shift == kNegInf)
        throw ZeroEvidence("all grid nodes have zero posterior mass");
    Tilted out;
    out.mass.resize(n);
    double z = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double e = lw[i] == kNegInf ? 0.0 : std::exp(lw[i] + beta * f[i] - shift);
        out.mass[i] = e;
        z += e;
    }
    if (!(z > 0.0)) throw ZeroEvidence("all grid nodes have zero posterior mass");
    double m = 0.0;
    for (size_t i = 0; i < n; ++i) {
        out.mass[i] /= z;
        m += out.mass[i] * f[i];
    }
    out.moment = m;
    out.log_z = std::log(z) + shift;
    return out;
}

}  // namespace

int GridPrior::observable_index(const std::string& name) const {
    for (size_t j = 0; j < obs_names.size(); ++j)
        if (obs_names[j] == name) return static_cast<int>(j);
    return -1;
}

GridPrior load_grid_prior(const std::string& csv_path) {
    CsvTable t = read_csv(csv_path);
    int c_theta = -1, c_weight = -1, c_prior = -1;
    std::vector<int> c_lik;
    GridPrior g;
    for (size_t c = 0; c < t.header.size(); ++c) {
        const std::string& h = t.header[c];
        if (h == "theta") c_theta = static_cast<int>(c);
        else if (h == "weight") c_weight = static_cast<int>(c);
        else if (h == "prior") c_prior = static_cast<int>(c);
        else if (h.rfind("lik_", 0) == 0) {
            c_lik.push_back(static_cast<int>(c));
            g.obs_names.push_back(h.substr(4));
        } else {
            throw ParseError("unexpected column '" + h + "' in " + csv_path, 1);
        }
    }
    if (c_theta < 0 || c_weight < 0 || c_prior < 0)
        throw ParseError("grid prior needs theta, weight and prior columns", 1);
    if (t.rows.empty())
        throw ValidationError("grid prior has no rows: " + csv_path);
    g.lik.resize(c_lik.size());
    for (const auto& row : t.rows) {
        g.theta.push_back(row[c_theta]);
        g.weight.push_back(row[c_weight]);
        g.prior.push_back(row[c_prior]);
        for (size_t j = 0; j < c_lik.size(); ++j)
            g.lik[j].push_back(row[c_lik[j]]);
    }
    return g;
}

std::vector<double> bayes_update(const GridPrior& g,
                                 const std::vector<int>& obs_seq) {
    std::vector<double> lw = log_base_mass(g, obs_seq);
    std::vector<double> f(g.size(), 0.0);
    return tilt(lw, f, 0.0).mass;
}

MreSolution mre_update(const GridPrior& g, const std::vector<int>& obs_seq,
                       const MomentConstraint& c) {
    if (!c.f) throw ValidationError("moment constraint has no observable");
    std::vector<double> lw = log_base_mass(g, obs_seq);
    std::vector<double> f(g.size());
    for (size_t i = 0; i < g.size(); ++i) f[i] = c.f(g.theta[i]);

    // attainable moments: open hull of f over the support
    double fmin = std::numeric_limits<double>::infinity(), fmax = -fmin;
    bool support = false;
    for (size_t i = 0; i < g.size(); ++i) {
        if (lw[i] == kNegInf) continue;
        support = true;
        fmin = std::min(fmin, f[i]);
        fmax = std::max(fmax, f[i]);
    }
    if (!support) throw ZeroEvidence("all grid nodes have zero posterior mass");

    const double F = c.target;
    const double span = fmax - fmin;
    const double ftol = 1e-12 * std::max(1.0, std::max(std::abs(F), span));

    if (span == 0.0) {
        // observable constant on the support: either already satisfied or
        // unreachable
        if (std::abs(F - fmin) <= ftol) {
            Tilted t = tilt(lw, f, 0.0);
            return {t.mass, 0.0, t.moment, t.log_z};
        }
        throw InfeasibleMoment("observable is constant on the support", fmin,
                               fmax);
    }
    if (F <= fmin + ftol || F >= fmax - ftol)
        throw InfeasibleMoment("target moment outside the attainable range",
                               fmin, fmax);

    auto residual = [&](double beta) { return tilt(lw, f, beta).moment - F; };

    // bracket the root; the tilted moment is increasing in beta
    double lo = -1.0, hi = 1.0;
    double rlo = residual(lo), rhi = residual(hi);
    int grow = 0;
    while (rlo > 0.0 || rhi < 0.0) {
        if (++grow > 200)
            throw BetaNotBracketed("no sign change while expanding the"
                                   " multiplier bracket", lo, hi);
        if (rlo > 0.0) {
            lo *= 2.0;
            rlo = residual(lo);
        }
        if (rhi < 0.0) {
            hi *= 2.0;
            rhi = residual(hi);
        }
    }

    // safeguarded secant: fall back to bisection when the secant step leaves
    // the bracket or stalls
    double beta = 0.5 * (lo + hi);
    double r = residual(beta);
    for (int it = 0; it < 200; ++it) {
        if (std::abs(r) <= ftol) break;
        if (r > 0.0) {
            hi = beta;
            rhi = r;
        } else {
            lo = beta;
            rlo = r;
        }
        double next;
        if (rhi != rlo) {
            next = lo - rlo * (hi - lo) / (rhi - rlo);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        } else {
            next = 0.5 * (lo + hi);
        }
        if (hi - lo < 1e-15 * std::max(1.0, std::abs(beta))) {
            beta = next;
            r = residual(beta);
            break;
        }
        beta = next;
        r = residual(beta);
        if (it == 199)
            throw MaxIterations("multiplier solve did not reach tolerance");
    }

    // Newton polish: d moment / d beta is the tilted variance of f, so a few
    // steps from the bracketed root push the residual to machine precision
    double best_beta = beta;
    double best_abs = std::abs(r);
    for (int it = 0; it < 4; ++it) {
        Tilted t = tilt(lw, f, beta);
        double rr = t.moment - F;
        if (std::abs(rr) < best_abs) {
            best_abs = std::abs(rr);
            best_beta = beta;
        }
        double var = 0.0;
        for (size_t i = 0; i < f.size(); ++i) {
            double d = f[i] - t.moment;
            var += t.mass[i] * d * d;
        }
        if (!(var > 0.0)) break;
        double step = rr / var;
        if (!std::isfinite(step)) break;
        beta -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(beta))) break;
    }
    if (std::abs(residual(beta)) > best_abs) beta = best_beta;

    Tilted t = tilt(lw, f, beta);
    return {t.mass, beta, t.moment, t.log_z};
}

double solve_beta(const GridPrior& g, const std::vector<int>& obs_seq,
                  const MomentConstraint& c) {
    return mre_update(g, obs_seq, c).beta;
}

}  // namespace igac
