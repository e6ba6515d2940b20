#include "igac/density.hpp"

#include <cmath>

#include "igac/errors.hpp"
#include "igac/quadrature.hpp"

namespace igac {

namespace {

// Tensor grid over d copies of a 1d rule: U gets n^d rows, W the weight
// products. Row-major odometer over the node index.
void tensor_grid(const QuadRule& rule, int d,
                 Eigen::MatrixXd& U, Eigen::VectorXd& W) {
    const int n = static_cast<int>(rule.nodes.size());
    long total = 1;
    for (int k = 0; k < d; ++k) total *= n;
    U.resize(total, d);
    W.resize(total);
    std::vector<int> idx(d, 0);
    for (long r = 0; r < total; ++r) {
        double w = 1.0;
        for (int k = 0; k < d; ++k) {
            U(r, k) = rule.nodes(idx[k]);
            w *= rule.weights(idx[k]);
        }
        W(r) = w;
        for (int k = d - 1; k >= 0; --k) {
            if (++idx[k] < n) break;
            idx[k] = 0;
        }
    }
}

}  // namespace

DensityFamily gaussian_family(int sample_dim, int param_dim,
                              MeanFn mean, CovFn cov,
                              DMeanFn dmean, DCovFn dcov) {
    DensityFamily fam;
    fam.sample_dim = sample_dim;
    fam.param_dim = param_dim;

    fam.score = [mean, cov, dmean, dcov, param_dim](
                    const Eigen::VectorXd& x, const Eigen::VectorXd& th) {
        Eigen::VectorXd m = mean(th);
        Eigen::MatrixXd C = cov(th);
        Eigen::LLT<Eigen::MatrixXd> llt(C);
        if (llt.info() != Eigen::Success)
            throw SingularMetric("sampling covariance not positive definite");
        Eigen::VectorXd r = x - m;
        Eigen::VectorXd Cinv_r = llt.solve(r);
        Eigen::MatrixXd dm = dmean(th);
        std::vector<Eigen::MatrixXd> dC = dcov(th);
        Eigen::VectorXd g(param_dim);
        for (int k = 0; k < param_dim; ++k) {
            double val = dm.col(k).dot(Cinv_r);
            if (dC[k].squaredNorm() > 0.0) {
                Eigen::MatrixXd CinvdC = llt.solve(dC[k]);
                val += 0.5 * (Cinv_r.dot(dC[k] * Cinv_r) - CinvdC.trace());
            }
            g(k) = val;
        }
        return g;
    };

    fam.rule = [mean, cov, sample_dim](int order, const Eigen::VectorXd& th,
                                       Eigen::MatrixXd& X, Eigen::VectorXd& w) {
        Eigen::VectorXd m = mean(th);
        Eigen::MatrixXd C = cov(th);
        Eigen::LLT<Eigen::MatrixXd> llt(C);
        if (llt.info() != Eigen::Success)
            throw SingularMetric("sampling covariance not positive definite");
        Eigen::MatrixXd L = llt.matrixL();
        Eigen::MatrixXd U;
        Eigen::VectorXd W;
        tensor_grid(gauss_hermite(order), sample_dim, U, W);
        const double norm = std::pow(M_PI, -0.5 * sample_dim);
        X.resize(U.rows(), sample_dim);
        w.resize(U.rows());
        for (long r = 0; r < U.rows(); ++r) {
            X.row(r) = (m + std::sqrt(2.0) * (L * U.row(r).transpose())).transpose();
            w(r) = norm * W(r);
        }
    };
    return fam;
}

DensityFamily exponential_mean_family(int param_dim, int idx) {
    DensityFamily fam;
    fam.sample_dim = 1;
    fam.param_dim = param_dim;
    fam.score = [param_dim, idx](const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& th) {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(param_dim);
        double mu = th(idx);
        g(idx) = -1.0 / mu + x(0) / (mu * mu);
        return g;
    };
    fam.rule = [idx](int order, const Eigen::VectorXd& th,
                     Eigen::MatrixXd& X, Eigen::VectorXd& w) {
        const QuadRule& q = gauss_laguerre(order);
        double mu = th(idx);
        X.resize(q.nodes.size(), 1);
        w = q.weights;
        for (int i = 0; i < q.nodes.size(); ++i) X(i, 0) = mu * q.nodes(i);
    };
    return fam;
}

DensityFamily exponential_rate_family(int param_dim, int idx) {
    DensityFamily fam;
    fam.sample_dim = 1;
    fam.param_dim = param_dim;
    fam.score = [param_dim, idx](const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& th) {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(param_dim);
        g(idx) = 1.0 / th(idx) - x(0);
        return g;
    };
    fam.rule = [idx](int order, const Eigen::VectorXd& th,
                     Eigen::MatrixXd& X, Eigen::VectorXd& w) {
        const QuadRule& q = gauss_laguerre(order);
        double lam = th(idx);
        X.resize(q.nodes.size(), 1);
        w = q.weights;
        for (int i = 0; i < q.nodes.size(); ++i) X(i, 0) = q.nodes(i) / lam;
    };
    return fam;
}

DensityFamily spacing_surmise_family(int param_dim, int idx) {
    DensityFamily fam;
    fam.sample_dim = 1;
    fam.param_dim = param_dim;
    // p(s) = (pi s / (2 mu^2)) exp(-pi s^2 / (4 mu^2))
    fam.score = [param_dim, idx](const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& th) {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(param_dim);
        double mu = th(idx), s = x(0);
        g(idx) = -2.0 / mu + M_PI * s * s / (2.0 * mu * mu * mu);
        return g;
    };
    // substitute t = pi s^2 / (4 mu^2): measure becomes exp(-t) dt, so the
    // Laguerre rule applies with s = 2 mu sqrt(t / pi).
    fam.rule = [idx](int order, const Eigen::VectorXd& th,
                     Eigen::MatrixXd& X, Eigen::VectorXd& w) {
        const QuadRule& q = gauss_laguerre(order);
        double mu = th(idx);
        X.resize(q.nodes.size(), 1);
        w = q.weights;
        for (int i = 0; i < q.nodes.size(); ++i)
            X(i, 0) = 2.0 * mu * std::sqrt(q.nodes(i) / M_PI);
    };
    return fam;
}

DensityFamily product_family(std::vector<DensityFamily> parts) {
    if (parts.empty()) throw ValidationError("product of zero families");
    DensityFamily fam;
    fam.param_dim = parts.front().param_dim;
    for (const auto& p : parts) {
        if (p.param_dim != fam.param_dim)
            throw ValidationError("product families must share param_dim");
        fam.sample_dim += p.sample_dim;
    }
    const int sample_dim = fam.sample_dim;

    fam.score = [parts, sample_dim](const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& th) {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(parts.front().param_dim);
        int off = 0;
        for (const auto& p : parts) {
            g += p.score(x.segment(off, p.sample_dim), th);
            off += p.sample_dim;
        }
        return g;
    };

    fam.rule = [parts, sample_dim](int order, const Eigen::VectorXd& th,
                                   Eigen::MatrixXd& X, Eigen::VectorXd& w) {
        std::vector<Eigen::MatrixXd> Xs(parts.size());
        std::vector<Eigen::VectorXd> ws(parts.size());
        long total = 1;
        for (size_t i = 0; i < parts.size(); ++i) {
            parts[i].rule(order, th, Xs[i], ws[i]);
            total *= Xs[i].rows();
        }
        X.resize(total, sample_dim);
        w.resize(total);
        std::vector<long> idx(parts.size(), 0);
        for (long r = 0; r < total; ++r) {
            double wt = 1.0;
            int off = 0;
            for (size_t i = 0; i < parts.size(); ++i) {
                X.block(r, off, 1, parts[i].sample_dim) = Xs[i].row(idx[i]);
                wt *= ws[i](idx[i]);
                off += parts[i].sample_dim;
            }
            w(r) = wt;
            for (int i = static_cast<int>(parts.size()) - 1; i >= 0; --i) {
                if (++idx[i] < Xs[i].rows()) break;
                idx[i] = 0;
            }
        }
    };
    return fam;
}

}  // namespace igac
