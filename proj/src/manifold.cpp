#include "igac/manifold.hpp"

#include <cmath>
#include <limits>

#include "igac/errors.hpp"

namespace igac {

DomainBox DomainBox::unbounded(int n) {
    DomainBox b;
    b.lo = Eigen::VectorXd::Constant(n, -std::numeric_limits<double>::infinity());
    b.hi = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
    return b;
}

int DomainBox::violation(const Eigen::VectorXd& th, double margin) const {
    for (int k = 0; k < dim(); ++k) {
        if (!std::isfinite(th(k))) return k;
        if (std::isfinite(lo(k)) && th(k) < lo(k) + margin) return k;
        if (std::isfinite(hi(k)) && th(k) > hi(k) - margin) return k;
    }
    return -1;
}

bool DomainBox::contains(const Eigen::VectorXd& th, double margin) const {
    return violation(th, margin) < 0;
}

void DomainBox::require(const Eigen::VectorXd& th, const std::string& what) const {
    if (th.size() != dim())
        throw ValidationError(what + ": point has dimension " +
                              std::to_string(th.size()) + ", expected " +
                              std::to_string(dim()));
    int k = violation(th);
    if (k >= 0)
        throw OutOfDomain(what + ": coordinate " + std::to_string(k) +
                          " = " + std::to_string(th(k)) + " outside domain",
                          k);
}

Eigen::MatrixXd metric_analytic(const Model& m, const Eigen::VectorXd& th) {
    if (!m.metric) throw NoAnalyticRule("model " + m.name + " has no metric rule");
    m.domain.require(th, m.name);
    Eigen::MatrixXd g = m.metric(th);
    if (g.rows() != m.dim || g.cols() != m.dim)
        throw ValidationError(m.name + ": metric has wrong shape");
    if (!g.allFinite())
        throw NonFiniteIntegrand(m.name + ": metric not finite at given point");
    return 0.5 * (g + g.transpose());
}

Eigen::MatrixXd metric_numeric(const DensityFamily& fam,
                               const Eigen::VectorXd& th,
                               int order, double rel_tol) {
    if (!fam.valid()) throw NoAnalyticRule("density family is incomplete");
    if (order < 2) order = 2;

    auto estimate = [&](int o) {
        Eigen::MatrixXd X;
        Eigen::VectorXd w;
        fam.rule(o, th, X, w);
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(fam.param_dim, fam.param_dim);
        for (long r = 0; r < X.rows(); ++r) {
            Eigen::VectorXd s = fam.score(X.row(r).transpose(), th);
            G.noalias() += w(r) * (s * s.transpose());
        }
        return Eigen::MatrixXd(0.5 * (G + G.transpose()));
    };

    Eigen::MatrixXd prev = estimate(order);
    double delta = std::numeric_limits<double>::infinity();
    for (int o = 2 * order; o <= 256; o *= 2) {
        Eigen::MatrixXd next = estimate(o);
        double scale = std::max(1.0, next.cwiseAbs().maxCoeff());
        delta = (next - prev).cwiseAbs().maxCoeff() / scale;
        if (delta < rel_tol) return next;
        prev = next;
    }
    throw QuadratureNotConverged(
        "fisher information quadrature did not settle", delta);
}

double fisher_density(const Eigen::MatrixXd& g) {
    double det = g.determinant();
    if (!(det > 0.0) || !std::isfinite(det))
        throw NonPositiveDeterminant("metric determinant is not positive", det);
    return std::sqrt(det);
}

namespace {

std::vector<Eigen::MatrixXd> metric_partials_fd(const Model& m,
                                                const Eigen::VectorXd& th,
                                                double step) {
    const int n = m.dim;
    std::vector<Eigen::MatrixXd> dg(n);
    const double base = std::cbrt(std::numeric_limits<double>::epsilon());
    for (int k = 0; k < n; ++k) {
        double h = step > 0.0 ? step : base * std::max(1.0, std::abs(th(k)));
        Eigen::VectorXd p = th, q = th;
        p(k) += h;
        q(k) -= h;
        if (!m.domain.contains(p) || !m.domain.contains(q))
            throw OutOfDomain(m.name + ": finite difference stencil leaves the"
                              " domain at coordinate " + std::to_string(k), k);
        dg[k] = (m.metric(p) - m.metric(q)) / (2.0 * h);
    }
    return dg;
}

}  // namespace

std::vector<Eigen::MatrixXd> christoffel(const Model& m,
                                         const Eigen::VectorXd& th,
                                         double step) {
    m.domain.require(th, m.name);
    if (m.christoffels) return m.christoffels(th);

    Eigen::MatrixXd g = metric_analytic(m, th);
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success)
        throw SingularMetric(m.name + ": metric not positive definite, cannot"
                             " raise the index");
    std::vector<Eigen::MatrixXd> dg =
        m.metric_partials ? m.metric_partials(th) : metric_partials_fd(m, th, step);

    const int n = m.dim;
    std::vector<Eigen::MatrixXd> gamma(n, Eigen::MatrixXd::Zero(n, n));
    // lower-index symbols first: G_{l,ij} = (d_i g_lj + d_j g_li - d_l g_ij)/2
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            Eigen::VectorXd lower(n);
            for (int l = 0; l < n; ++l)
                lower(l) = 0.5 * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
            Eigen::VectorXd upper = llt.solve(lower);
            for (int k = 0; k < n; ++k) {
                gamma[k](i, j) = upper(k);
                gamma[k](j, i) = upper(k);
            }
        }
    }
    return gamma;
}

double check_reparam_covariance(const Model& m, const Diffeo& d,
                                const Eigen::VectorXd& phi, int order) {
    if (!m.family.valid())
        throw NoAnalyticRule(m.name + ": no sampling density to reparametrize");
    Eigen::VectorXd th = d.forward(phi);
    m.domain.require(th, m.name);
    Eigen::MatrixXd J = d.jacobian(phi);
    if (J.rows() != m.dim || J.cols() != m.dim)
        throw ValidationError("diffeomorphism jacobian has wrong shape");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
    if (!lu.isInvertible())
        throw NonInvertibleJacobian("coordinate change is singular at this point");

    // family in the new coordinates: same samples, chain rule on the score
    DensityFamily reparam;
    reparam.sample_dim = m.family.sample_dim;
    reparam.param_dim = m.family.param_dim;
    const DensityFamily base = m.family;
    const Diffeo dd = d;
    reparam.score = [base, dd](const Eigen::VectorXd& x, const Eigen::VectorXd& p) {
        return Eigen::VectorXd(dd.jacobian(p).transpose() * base.score(x, dd.forward(p)));
    };
    reparam.rule = [base, dd](int o, const Eigen::VectorXd& p,
                              Eigen::MatrixXd& X, Eigen::VectorXd& w) {
        base.rule(o, dd.forward(p), X, w);
    };

    Eigen::MatrixXd lhs = metric_numeric(reparam, phi, order);
    Eigen::MatrixXd rhs = J.transpose() * metric_numeric(base, th, order) * J;
    double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
    return (lhs - rhs).cwiseAbs().maxCoeff() / scale;
}

}  // namespace igac
