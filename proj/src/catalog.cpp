#include "igac/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "igac/errors.hpp"

namespace igac {

namespace {

const double kRt2Half = std::sqrt(2.0) / 2.0;

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

void check_keys(const std::map<std::string, double>& params,
                const std::set<std::string>& allowed,
                const std::string& model) {
    for (const auto& [k, v] : params)
        if (!allowed.count(k))
            throw ValidationError(model + ": unknown parameter '" + k + "'");
}

double need(const std::map<std::string, double>& params, const std::string& k,
            const std::string& model) {
    auto it = params.find(k);
    if (it == params.end())
        throw ValidationError(model + ": missing parameter '" + k + "'");
    return it->second;
}

double maybe(const std::map<std::string, double>& params, const std::string& k,
             double fallback) {
    auto it = params.find(k);
    return it == params.end() ? fallback : it->second;
}

void check_open(double v, double lo, double hi, const std::string& name,
                const std::string& where) {
    if (!(v > lo && v < hi))
        throw ParamOutOfRange(where + ": " + name + " = " + fmt(v) +
                              " must lie in (" + fmt(lo) + ", " + fmt(hi) + ")",
                              name);
}

void check_half_open(double v, double lo, double hi, const std::string& name,
                     const std::string& where) {
    if (!(v >= lo && v < hi))
        throw ParamOutOfRange(where + ": " + name + " = " + fmt(v) +
                              " must lie in [" + fmt(lo) + ", " + fmt(hi) + ")",
                              name);
}

void check_positive(double v, const std::string& name,
                    const std::string& where) {
    if (!(v > 0.0))
        throw ParamOutOfRange(where + ": " + name + " = " + fmt(v) +
                              " must be positive", name);
}

int integer_param(double v, int lo, int hi, const std::string& name,
                  const std::string& where) {
    double r = std::round(v);
    if (std::abs(v - r) > 1e-9 || r < lo || r > hi)
        throw ParamOutOfRange(where + ": " + name + " = " + fmt(v) +
                              " must be an integer in [" + std::to_string(lo) +
                              ", " + std::to_string(hi) + "]", name);
    return static_cast<int>(r);
}

// Christoffel coefficients of a metric ghat / theta_c^2 with ghat constant:
// Gamma^m_ij = -(delta_ic delta^m_j + delta_jc delta^m_i
//               - (ghat^-1)_mc ghat_ij) / theta_c
std::function<std::vector<Eigen::MatrixXd>(const Eigen::VectorXd&)>
scale_invariant_gamma(const Eigen::MatrixXd& ghat, int c) {
    Eigen::MatrixXd ghat_inv = ghat.inverse();
    int n = static_cast<int>(ghat.rows());
    return [ghat, ghat_inv, c, n](const Eigen::VectorXd& th) {
        double s = th(c);
        std::vector<Eigen::MatrixXd> gamma(n, Eigen::MatrixXd::Zero(n, n));
        for (int m = 0; m < n; ++m)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double v = 0.0;
                    if (i == c && m == j) v += 1.0;
                    if (j == c && m == i) v += 1.0;
                    v -= ghat_inv(m, c) * ghat(i, j);
                    gamma[m](i, j) = -v / s;
                }
        return gamma;
    };
}

// domain with sigma-like coordinates restricted to positive values
DomainBox positive_axes(int dim, const std::vector<int>& pos) {
    DomainBox b = DomainBox::unbounded(dim);
    for (int k : pos) b.lo(k) = 0.0;
    return b;
}

// density for n independent samples sharing mean mu * ones and covariance
// sigma^2 * R, parameters (mu, sigma)
DensityFamily shared_gaussian_family(const Eigen::MatrixXd& R) {
    const int n = static_cast<int>(R.rows());
    return gaussian_family(
        n, 2,
        [n](const Eigen::VectorXd& th) {
            return Eigen::VectorXd::Constant(n, th(0)).eval();
        },
        [R](const Eigen::VectorXd& th) {
            return Eigen::MatrixXd(th(1) * th(1) * R);
        },
        [n](const Eigen::VectorXd&) {
            Eigen::MatrixXd dm = Eigen::MatrixXd::Zero(n, 2);
            dm.col(0).setOnes();
            return dm;
        },
        [R, n](const Eigen::VectorXd& th) {
            std::vector<Eigen::MatrixXd> dC(2, Eigen::MatrixXd::Zero(n, n));
            dC[1] = 2.0 * th(1) * R;
            return dC;
        });
}

Model uncorrelated_gaussian(int l) {
    Model m;
    m.name = "uncorrelated_gaussian";
    m.dim = 2 * l;
    std::vector<int> sigmas;
    for (int i = 0; i < l; ++i) {
        m.coord_names.push_back("mu" + std::to_string(i + 1));
        m.coord_names.push_back("sigma" + std::to_string(i + 1));
        sigmas.push_back(2 * i + 1);
    }
    m.domain = positive_axes(m.dim, sigmas);
    const int n = m.dim;
    m.metric = [n](const Eigen::VectorXd& th) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; i += 2) {
            double s2 = th(i + 1) * th(i + 1);
            g(i, i) = 1.0 / s2;
            g(i + 1, i + 1) = 2.0 / s2;
        }
        return g;
    };
    m.christoffels = [n](const Eigen::VectorXd& th) {
        std::vector<Eigen::MatrixXd> gamma(n, Eigen::MatrixXd::Zero(n, n));
        for (int i = 0; i < n; i += 2) {
            double s = th(i + 1);
            gamma[i](i, i + 1) = -1.0 / s;
            gamma[i](i + 1, i) = -1.0 / s;
            gamma[i + 1](i, i) = 1.0 / (2.0 * s);
            gamma[i + 1](i + 1, i + 1) = -1.0 / s;
        }
        return gamma;
    };
    for (int i = 0; i < l; ++i) {
        m.det_factors.push_back([](double) { return 1.0; });
        m.det_factors.push_back([](double s) { return 2.0 / (s * s * s * s); });
    }
    m.family = gaussian_family(
        l, 2 * l,
        [l](const Eigen::VectorXd& th) {
            Eigen::VectorXd mu(l);
            for (int i = 0; i < l; ++i) mu(i) = th(2 * i);
            return mu;
        },
        [l](const Eigen::VectorXd& th) {
            Eigen::MatrixXd C = Eigen::MatrixXd::Zero(l, l);
            for (int i = 0; i < l; ++i) C(i, i) = th(2 * i + 1) * th(2 * i + 1);
            return C;
        },
        [l](const Eigen::VectorXd&) {
            Eigen::MatrixXd dm = Eigen::MatrixXd::Zero(l, 2 * l);
            for (int i = 0; i < l; ++i) dm(i, 2 * i) = 1.0;
            return dm;
        },
        [l](const Eigen::VectorXd& th) {
            std::vector<Eigen::MatrixXd> dC(2 * l,
                                            Eigen::MatrixXd::Zero(l, l));
            for (int i = 0; i < l; ++i)
                dC[2 * i + 1](i, i) = 2.0 * th(2 * i + 1);
            return dC;
        });
    m.application = "independent Gaussian units; entropy grows linearly along"
                    " radial flows";
    m.params_doc = "l: integer in [1, 3]";
    return m;
}

Model shared_mean_pair_model(const std::string& name, double rho,
                             const Eigen::MatrixXd& R, double g_mu_hat,
                             const std::string& application) {
    // coordinates (mu, sigma); metric diag(g_mu_hat, 2n) / sigma^2
    Model m;
    m.name = name;
    m.dim = 2;
    m.coord_names = {"mu", "sigma"};
    m.domain = positive_axes(2, {1});
    const int n = static_cast<int>(R.rows());
    const double g_ss_hat = 2.0 * n;
    Eigen::MatrixXd ghat = Eigen::MatrixXd::Zero(2, 2);
    ghat(0, 0) = g_mu_hat;
    ghat(1, 1) = g_ss_hat;
    m.metric = [ghat](const Eigen::VectorXd& th) {
        return Eigen::MatrixXd(ghat / (th(1) * th(1)));
    };
    m.christoffels = scale_invariant_gamma(ghat, 1);
    double det_hat = g_mu_hat * g_ss_hat;
    m.det_factors.push_back([](double) { return 1.0; });
    m.det_factors.push_back(
        [det_hat](double s) { return det_hat / (s * s * s * s); });
    m.family = shared_gaussian_family(R);
    m.application = application;
    m.params_doc = "rho: correlation, model specific domain";
    (void)rho;
    return m;
}

Model bivariate_corr(double rho) {
    check_open(rho, -1.0, 1.0, "rho", "bivariate_corr");
    Eigen::MatrixXd R(2, 2);
    R << 1.0, rho, rho, 1.0;
    // shared mean would give 2/((1+rho) sigma^2); the stated line element
    // carries 1/((1-rho^2) sigma^2), which is the Fisher information of the
    // mean-(mu, 0) parametrization, so that is the density we attach
    Model m;
    m.name = "bivariate_corr";
    m.dim = 2;
    m.coord_names = {"mu", "sigma"};
    m.domain = positive_axes(2, {1});
    Eigen::MatrixXd ghat = Eigen::MatrixXd::Zero(2, 2);
    ghat(0, 0) = 1.0 / (1.0 - rho * rho);
    ghat(1, 1) = 4.0;
    m.metric = [ghat](const Eigen::VectorXd& th) {
        return Eigen::MatrixXd(ghat / (th(1) * th(1)));
    };
    m.christoffels = scale_invariant_gamma(ghat, 1);
    double det_hat = ghat(0, 0) * ghat(1, 1);
    m.det_factors.push_back([](double) { return 1.0; });
    m.det_factors.push_back(
        [det_hat](double s) { return det_hat / (s * s * s * s); });
    m.family = gaussian_family(
        2, 2,
        [](const Eigen::VectorXd& th) {
            Eigen::VectorXd mu(2);
            mu << th(0), 0.0;
            return mu;
        },
        [R](const Eigen::VectorXd& th) {
            return Eigen::MatrixXd(th(1) * th(1) * R);
        },
        [](const Eigen::VectorXd&) {
            Eigen::MatrixXd dm = Eigen::MatrixXd::Zero(2, 2);
            dm(0, 0) = 1.0;
            return dm;
        },
        [R](const Eigen::VectorXd& th) {
            std::vector<Eigen::MatrixXd> dC(2, Eigen::MatrixXd::Zero(2, 2));
            dC[1] = 2.0 * th(1) * R;
            return dC;
        });
    m.application = "two correlated Gaussian samples; complexity ratio"
                    " sqrt(1+rho)";
    m.params_doc = "rho in (-1, 1)";
    return m;
}

Model trivariate(int variant, double rho) {
    Eigen::MatrixXd R = Eigen::MatrixXd::Identity(3, 3);
    double g_mu_hat = 0.0;
    std::string name = "trivariate_case" + std::to_string(variant);
    std::string app;
    switch (variant) {
        case 1:
            check_open(rho, -1.0, 1.0, "rho", name);
            R(0, 1) = R(1, 0) = rho;
            g_mu_hat = (3.0 + rho) / (1.0 + rho);
            app = "three Gaussian samples, one correlated pair; ratio"
                  " sqrt(3(1+rho)/(3+rho))";
            break;
        case 2:
            check_open(rho, -kRt2Half, kRt2Half, "rho", name);
            R(0, 1) = R(1, 0) = rho;
            R(0, 2) = R(2, 0) = rho;
            g_mu_hat = (3.0 - 4.0 * rho) / (1.0 - 2.0 * rho * rho);
            app = "three Gaussian samples, hub correlation pattern; ratio"
                  " peaks at rho = 1/2";
            break;
        case 3:
            check_open(rho, -0.5, 1.0, "rho", name);
            R(0, 1) = R(1, 0) = rho;
            R(0, 2) = R(2, 0) = rho;
            R(1, 2) = R(2, 1) = rho;
            g_mu_hat = 3.0 / (1.0 + 2.0 * rho);
            app = "three Gaussian samples, fully connected correlations;"
                  " ratio sqrt(1+2rho)";
            break;
        default:
            throw ValidationError("trivariate variant must be 1, 2 or 3");
    }
    return shared_mean_pair_model(name, rho, R, g_mu_hat, app);
}

Model microcorrelated_3d(double rho) {
    check_open(rho, -1.0, 1.0, "rho", "microcorrelated_3d");
    Model m;
    m.name = "microcorrelated_3d";
    m.dim = 3;
    m.coord_names = {"mux", "muy", "sigma"};
    m.domain = positive_axes(3, {2});
    double q = 1.0 / (1.0 - rho * rho);
    Eigen::MatrixXd ghat = Eigen::MatrixXd::Zero(3, 3);
    ghat(0, 0) = q;
    ghat(1, 1) = q;
    ghat(0, 1) = ghat(1, 0) = rho * q;
    ghat(2, 2) = 4.0;
    m.metric = [ghat](const Eigen::VectorXd& th) {
        return Eigen::MatrixXd(ghat / (th(2) * th(2)));
    };
    m.christoffels = scale_invariant_gamma(ghat, 2);
    m.det_factors.push_back([](double) { return 1.0; });
    m.det_factors.push_back([](double) { return 1.0; });
    double c = 4.0 * q;
    m.det_factors.push_back([c](double s) { return c / std::pow(s, 6); });
    // the sampling correlation enters the mean block with the opposite sign,
    // so the density carries -rho to reproduce the +rho cross term above
    Eigen::MatrixXd R(2, 2);
    R << 1.0, -rho, -rho, 1.0;
    m.family = gaussian_family(
        2, 3,
        [](const Eigen::VectorXd& th) {
            return Eigen::VectorXd(th.head(2));
        },
        [R](const Eigen::VectorXd& th) {
            return Eigen::MatrixXd(th(2) * th(2) * R);
        },
        [](const Eigen::VectorXd&) {
            Eigen::MatrixXd dm = Eigen::MatrixXd::Zero(2, 3);
            dm(0, 0) = 1.0;
            dm(1, 1) = 1.0;
            return dm;
        },
        [R](const Eigen::VectorXd& th) {
            std::vector<Eigen::MatrixXd> dC(3, Eigen::MatrixXd::Zero(2, 2));
            dC[2] = 2.0 * th(2) * R;
            return dC;
        });
    m.application = "planar Gaussian with micro level correlation; complexity"
                    " suppressed by the factor f_micro";
    m.params_doc = "rho in (-1, 1)";
    return m;
}

Model embedded_gaussian(int l, double rho) {
    check_half_open(rho, 0.0, 1.0, "rho", "embedded_gaussian");
    Model m;
    m.name = "embedded_gaussian";
    m.dim = 2;
    m.coord_names = {"mu", "sigma"};
    m.domain = positive_axes(2, {1});
    Eigen::MatrixXd ghat(2, 2);
    ghat << 1.0, rho, rho, 2.0;
    ghat *= static_cast<double>(l);
    m.metric = [ghat](const Eigen::VectorXd& th) {
        return Eigen::MatrixXd(ghat / (th(1) * th(1)));
    };
    m.christoffels = scale_invariant_gamma(ghat, 1);
    double det_hat = ghat.determinant();
    m.det_factors.push_back([](double) { return 1.0; });
    m.det_factors.push_back(
        [det_hat](double s) { return det_hat / (s * s * s * s); });
    // no sampling density: the line element is the near-to-the-metric form,
    // not the exact pullback of a Gaussian family
    m.application = "Gaussian units under macroscopic embedding constraints;"
                    " entropy decays toward a plateau";
    m.params_doc = "l: integer in [1, 3]; rho in [0, 1) (default from the"
                   " shipped linear constraint)";
    return m;
}

Model gauss_3du() {
    Model m;
    m.name = "gauss_3du";
    m.dim = 3;
    m.coord_names = {"mux", "sigmax", "sigmay"};
    m.domain = positive_axes(3, {1, 2});
    m.metric = [](const Eigen::VectorXd& th) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(3, 3);
        double sx2 = th(1) * th(1), sy2 = th(2) * th(2);
        g(0, 0) = 1.0 / sx2;
        g(1, 1) = 2.0 / sx2;
        g(2, 2) = 2.0 / sy2;
        return g;
    };
    m.christoffels = [](const Eigen::VectorXd& th) {
        std::vector<Eigen::MatrixXd> gamma(3, Eigen::MatrixXd::Zero(3, 3));
        double sx = th(1), sy = th(2);
        gamma[0](0, 1) = gamma[0](1, 0) = -1.0 / sx;
        gamma[1](0, 0) = 1.0 / (2.0 * sx);
        gamma[1](1, 1) = -1.0 / sx;
        gamma[2](2, 2) = -1.0 / sy;
        return gamma;
    };
    m.det_factors.push_back([](double) { return 1.0; });
    m.det_factors.push_back([](double s) { return 2.0 / (s * s * s * s); });
    m.det_factors.push_back([](double s) { return 2.0 / (s * s); });
    m.family = gaussian_family(
        2, 3,
        [](const Eigen::VectorXd& th) {
            Eigen::VectorXd mu(2);
            mu << th(0), 0.0;
            return mu;
        },
        [](const Eigen::VectorXd& th) {
            Eigen::MatrixXd C = Eigen::MatrixXd::Zero(2, 2);
            C(0, 0) = th(1) * th(1);
            C(1, 1) = th(2) * th(2);
            return C;
        },
        [](const Eigen::VectorXd&) {
            Eigen::MatrixXd dm = Eigen::MatrixXd::Zero(2, 3);
            dm(0, 0) = 1.0;
            return dm;
        },
        [](const Eigen::VectorXd& th) {
            std::vector<Eigen::MatrixXd> dC(3, Eigen::MatrixXd::Zero(2, 2));
            dC[1](0, 0) = 2.0 * th(1);
            dC[2](1, 1) = 2.0 * th(2);
            return dC;
        });
    m.application = "uncorrelated planar Gaussian, full three parameter form;"
                    " exponential complexity growth";
    m.params_doc = "";
    return m;
}

Model gauss_2du(double Sigma) {
    check_positive(Sigma, "Sigma", "gauss_2du");
    Model m;
    m.name = "gauss_2du";
    m.dim = 2;
    m.coord_names = {"mux", "sigma"};
    m.domain = positive_axes(2, {1});
    Eigen::MatrixXd ghat = Eigen::MatrixXd::Zero(2, 2);
    ghat(0, 0) = 1.0;
    ghat(1, 1) = 4.0;
    m.metric = [ghat](const Eigen::VectorXd& th) {
        return Eigen::MatrixXd(ghat / (th(1) * th(1)));
    };
    m.christoffels = scale_invariant_gamma(ghat, 1);
    m.det_factors.push_back([](double) { return 1.0; });
    m.det_factors.push_back([](double s) { return 4.0 / (s * s * s * s); });
    double S4 = Sigma * Sigma * Sigma * Sigma;
    m.family = gaussian_family(
        2, 2,
        [](const Eigen::VectorXd& th) {
            Eigen::VectorXd mu(2);
            mu << th(0), 0.0;
            return mu;
        },
        [S4](const Eigen::VectorXd& th) {
            Eigen::MatrixXd C = Eigen::MatrixXd::Zero(2, 2);
            C(0, 0) = th(1) * th(1);
            C(1, 1) = S4 / (th(1) * th(1));
            return C;
        },
        [](const Eigen::VectorXd&) {
            Eigen::MatrixXd dm = Eigen::MatrixXd::Zero(2, 2);
            dm(0, 0) = 1.0;
            return dm;
        },
        [S4](const Eigen::VectorXd& th) {
            std::vector<Eigen::MatrixXd> dC(2, Eigen::MatrixXd::Zero(2, 2));
            dC[1](0, 0) = 2.0 * th(1);
            dC[1](1, 1) = -2.0 * S4 / (th(1) * th(1) * th(1));
            return dC;
        });
    m.application = "planar Gaussian reduced by the minimum uncertainty"
                    " relation; exponential complexity growth";
    m.params_doc = "Sigma > 0";
    return m;
}

Model gauss_3dc(double rho) {
    check_open(rho, -1.0, 1.0, "rho", "gauss_3dc");
    Model m;
    m.name = "gauss_3dc";
    m.dim = 3;
    m.coord_names = {"mux", "sigmax", "sigmay"};
    m.domain = positive_axes(3, {1, 2});
    double q = 1.0 / (1.0 - rho * rho);
    double w = (2.0 - rho * rho) * q;
    double x = rho * rho * q;
    m.metric = [q, w, x](const Eigen::VectorXd& th) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(3, 3);
        double sx = th(1), sy = th(2);
        g(0, 0) = q / (sx * sx);
        g(1, 1) = w / (sx * sx);
        g(2, 2) = w / (sy * sy);
        g(1, 2) = g(2, 1) = -x / (sx * sy);
        return g;
    };
    m.metric_partials = [q, w, x](const Eigen::VectorXd& th) {
        double sx = th(1), sy = th(2);
        std::vector<Eigen::MatrixXd> dg(3, Eigen::MatrixXd::Zero(3, 3));
        dg[1](0, 0) = -2.0 * q / (sx * sx * sx);
        dg[1](1, 1) = -2.0 * w / (sx * sx * sx);
        dg[1](1, 2) = dg[1](2, 1) = x / (sx * sx * sy);
        dg[2](2, 2) = -2.0 * w / (sy * sy * sy);
        dg[2](1, 2) = dg[2](2, 1) = x / (sx * sy * sy);
        return dg;
    };
    double c = 2.0 * q;
    m.det_factors.push_back([](double) { return 1.0; });
    m.det_factors.push_back(
        [c](double s) { return c / (s * s * s * s); });
    m.det_factors.push_back([c](double s) { return c / (s * s); });
    m.family = gaussian_family(
        2, 3,
        [](const Eigen::VectorXd& th) {
            Eigen::VectorXd mu(2);
            mu << th(0), 0.0;
            return mu;
        },
        [rho](const Eigen::VectorXd& th) {
            Eigen::MatrixXd C(2, 2);
            double sx = th(1), sy = th(2);
            C << sx * sx, rho * sx * sy, rho * sx * sy, sy * sy;
            return C;
        },
        [](const Eigen::VectorXd&) {
            Eigen::MatrixXd dm = Eigen::MatrixXd::Zero(2, 3);
            dm(0, 0) = 1.0;
            return dm;
        },
        [rho](const Eigen::VectorXd& th) {
            double sx = th(1), sy = th(2);
            std::vector<Eigen::MatrixXd> dC(3, Eigen::MatrixXd::Zero(2, 2));
            dC[1] << 2.0 * sx, rho * sy, rho * sy, 0.0;
            dC[2] << 0.0, rho * sx, rho * sx, 2.0 * sy;
            return dC;
        });
    m.application = "correlated planar Gaussian, full three parameter form";
    m.params_doc = "rho in (-1, 1)";
    return m;
}

Model gauss_2dc(double rho, double Sigma) {
    check_open(rho, -1.0, 1.0, "rho", "gauss_2dc");
    check_positive(Sigma, "Sigma", "gauss_2dc");
    Model m;
    m.name = "gauss_2dc";
    m.dim = 2;
    m.coord_names = {"mux", "sigma"};
    m.domain = positive_axes(2, {1});
    double q = 1.0 / (1.0 - rho * rho);
    Eigen::MatrixXd ghat = Eigen::MatrixXd::Zero(2, 2);
    ghat(0, 0) = q;
    ghat(1, 1) = 4.0 * q;
    m.metric = [ghat](const Eigen::VectorXd& th) {
        return Eigen::MatrixXd(ghat / (th(1) * th(1)));
    };
    m.christoffels = scale_invariant_gamma(ghat, 1);
    double det_hat = ghat(0, 0) * ghat(1, 1);
    m.det_factors.push_back([](double) { return 1.0; });
    m.det_factors.push_back(
        [det_hat](double s) { return det_hat / (s * s * s * s); });
    double S2 = Sigma * Sigma;
    m.family = gaussian_family(
        2, 2,
        [](const Eigen::VectorXd& th) {
            Eigen::VectorXd mu(2);
            mu << th(0), 0.0;
            return mu;
        },
        [rho, S2](const Eigen::VectorXd& th) {
            double s = th(1);
            Eigen::MatrixXd C(2, 2);
            C << s * s, rho * S2, rho * S2, S2 * S2 / (s * s);
            return C;
        },
        [](const Eigen::VectorXd&) {
            Eigen::MatrixXd dm = Eigen::MatrixXd::Zero(2, 2);
            dm(0, 0) = 1.0;
            return dm;
        },
        [S2](const Eigen::VectorXd& th) {
            double s = th(1);
            std::vector<Eigen::MatrixXd> dC(2, Eigen::MatrixXd::Zero(2, 2));
            dC[1](0, 0) = 2.0 * s;
            dC[1](1, 1) = -2.0 * S2 * S2 / (s * s * s);
            return dC;
        });
    m.application = "correlated planar Gaussian under the uncertainty"
                    " relation; correlation rescales complexity by 1/(1-rho^2)";
    m.params_doc = "rho in (-1, 1); Sigma > 0";
    return m;
}

Model iho(const std::vector<double>& omega) {
    const int l = static_cast<int>(omega.size());
    if (l < 1 || l > 6)
        throw ParamOutOfRange("iho: needs 1 to 6 frequencies", "omega");
    for (int k = 0; k < l; ++k)
        check_positive(omega[k], "omega" + std::to_string(k + 1), "iho");
    Model m;
    m.name = "iho";
    m.dim = l;
    for (int k = 0; k < l; ++k)
        m.coord_names.push_back("theta" + std::to_string(k + 1));
    m.domain = DomainBox::unbounded(l);
    std::vector<double> w2(l);
    for (int k = 0; k < l; ++k) w2[k] = omega[k] * omega[k];
    m.metric = [w2, l](const Eigen::VectorXd& th) {
        double phi = 0.0;  // Phi = -(1/2) sum w^2 th^2 <= 0
        for (int k = 0; k < l; ++k) phi -= 0.5 * w2[k] * th(k) * th(k);
        return Eigen::MatrixXd((1.0 - phi) *
                               Eigen::MatrixXd::Identity(l, l));
    };
    m.metric_partials = [w2, l](const Eigen::VectorXd& th) {
        std::vector<Eigen::MatrixXd> dg(l);
        for (int k = 0; k < l; ++k)
            dg[k] = w2[k] * th(k) * Eigen::MatrixXd::Identity(l, l);
        return dg;
    };
    // flow in the affine parameter of the conformal reparametrization:
    // d^2 theta / dtau^2 = omega^2 theta
    m.flow_accel = [w2, l](const Eigen::VectorXd& th, const Eigen::VectorXd&) {
        Eigen::VectorXd a(l);
        for (int k = 0; k < l; ++k) a(k) = w2[k] * th(k);
        return a;
    };
    if (l == 1) {
        double w2_0 = w2[0];
        m.det_factors.push_back(
            [w2_0](double t) { return 1.0 + 0.5 * w2_0 * t * t; });
    }
    m.application = "inverted harmonic oscillators in a conformal metric;"
                    " linear entropy growth set by the frequency sum";
    m.params_doc = "omega1..omegaN > 0 (N up to 6)";
    return m;
}

Model spin_integrable() {
    Model m;
    m.name = "spin_integrable";
    m.dim = 2;
    m.coord_names = {"muA", "muB"};
    m.domain = positive_axes(2, {0, 1});
    m.metric = [](const Eigen::VectorXd& th) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2, 2);
        g(0, 0) = 1.0 / (th(0) * th(0));
        g(1, 1) = 1.0 / (th(1) * th(1));
        return g;
    };
    m.christoffels = [](const Eigen::VectorXd& th) {
        std::vector<Eigen::MatrixXd> gamma(2, Eigen::MatrixXd::Zero(2, 2));
        gamma[0](0, 0) = -1.0 / th(0);
        gamma[1](1, 1) = -1.0 / th(1);
        return gamma;
    };
    m.det_factors.push_back([](double t) { return 1.0 / (t * t); });
    m.det_factors.push_back([](double t) { return 1.0 / (t * t); });
    m.family = product_family(
        {exponential_mean_family(2, 0), exponential_mean_family(2, 1)});
    m.application = "integrable spin chain level spacings (no repulsion);"
                    " logarithmic entropy growth";
    m.params_doc = "";
    return m;
}

Model spin_chaotic() {
    Model m;
    m.name = "spin_chaotic";
    m.dim = 3;
    m.coord_names = {"muA", "muB", "sigmaB"};
    m.domain = positive_axes(3, {0, 2});
    m.metric = [](const Eigen::VectorXd& th) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(3, 3);
        g(0, 0) = 4.0 / (th(0) * th(0));
        g(1, 1) = 1.0 / (th(2) * th(2));
        g(2, 2) = 2.0 / (th(2) * th(2));
        return g;
    };
    m.christoffels = [](const Eigen::VectorXd& th) {
        std::vector<Eigen::MatrixXd> gamma(3, Eigen::MatrixXd::Zero(3, 3));
        double muA = th(0), sB = th(2);
        gamma[0](0, 0) = -1.0 / muA;
        gamma[1](1, 2) = gamma[1](2, 1) = -1.0 / sB;
        gamma[2](1, 1) = 1.0 / (2.0 * sB);
        gamma[2](2, 2) = -1.0 / sB;
        return gamma;
    };
    m.det_factors.push_back([](double t) { return 4.0 / (t * t); });
    m.det_factors.push_back([](double) { return 1.0; });
    m.det_factors.push_back([](double t) { return 2.0 / (t * t * t * t); });
    DensityFamily gaussB = gaussian_family(
        1, 3,
        [](const Eigen::VectorXd& th) {
            return Eigen::VectorXd::Constant(1, th(1)).eval();
        },
        [](const Eigen::VectorXd& th) {
            return Eigen::MatrixXd::Constant(1, 1, th(2) * th(2)).eval();
        },
        [](const Eigen::VectorXd&) {
            Eigen::MatrixXd dm = Eigen::MatrixXd::Zero(1, 3);
            dm(0, 1) = 1.0;
            return dm;
        },
        [](const Eigen::VectorXd& th) {
            std::vector<Eigen::MatrixXd> dC(3, Eigen::MatrixXd::Zero(1, 1));
            dC[2](0, 0) = 2.0 * th(2);
            return dC;
        });
    m.family = product_family({spacing_surmise_family(3, 0), gaussB});
    m.application = "chaotic spin chain level spacings (level repulsion);"
                    " linear entropy growth";
    m.params_doc = "";
    return m;
}

Model scattering(double rho) {
    check_half_open(rho, 0.0, 1.0, "rho",
                    rho == 0.0 ? "scattering_uncorr" : "scattering_corr");
    Model m;
    m.name = rho == 0.0 ? "scattering_uncorr" : "scattering_corr";
    m.dim = 3;
    m.coord_names = {"mux", "muy", "sigma"};
    m.domain = positive_axes(3, {2});
    double q = 1.0 / (1.0 - rho * rho);
    Eigen::MatrixXd ghat = Eigen::MatrixXd::Zero(3, 3);
    ghat(0, 0) = q;
    ghat(1, 1) = q;
    ghat(0, 1) = ghat(1, 0) = -rho * q;
    ghat(2, 2) = 4.0;
    m.metric = [ghat](const Eigen::VectorXd& th) {
        return Eigen::MatrixXd(ghat / (th(2) * th(2)));
    };
    m.christoffels = scale_invariant_gamma(ghat, 2);
    m.det_factors.push_back([](double) { return 1.0; });
    m.det_factors.push_back([](double) { return 1.0; });
    double c = 4.0 * q;
    m.det_factors.push_back([c](double s) { return c / std::pow(s, 6); });
    Eigen::MatrixXd R(2, 2);
    R << 1.0, rho, rho, 1.0;
    m.family = gaussian_family(
        2, 3,
        [](const Eigen::VectorXd& th) {
            return Eigen::VectorXd(th.head(2));
        },
        [R](const Eigen::VectorXd& th) {
            return Eigen::MatrixXd(th(2) * th(2) * R);
        },
        [](const Eigen::VectorXd&) {
            Eigen::MatrixXd dm = Eigen::MatrixXd::Zero(2, 3);
            dm(0, 0) = 1.0;
            dm(1, 1) = 1.0;
            return dm;
        },
        [R](const Eigen::VectorXd& th) {
            std::vector<Eigen::MatrixXd> dC(3, Eigen::MatrixXd::Zero(2, 2));
            dC[2] = 2.0 * th(2) * R;
            return dC;
        });
    m.application = rho == 0.0
                        ? "two particle scattering, no channel correlation"
                        : "two particle scattering with channel correlation;"
                          " entanglement lowers the complexity ratio";
    m.params_doc = rho == 0.0 ? "" : "rho in [0, 1)";
    return m;
}

}  // namespace

double embedded_rho(double a, double b) {
    return a * b / (std::sqrt(1.0 + a * a) * std::sqrt(2.0 + 0.5 * b * b));
}

Model embedded_from_constraint(
    int l, const std::function<double(double, double)>& constraint,
    double mu_ref, double sigma_ref) {
    if (!constraint) throw ValidationError("embedding constraint is empty");
    double hm = 1e-6 * std::max(1.0, std::abs(mu_ref));
    double hs = 1e-6 * std::max(1.0, std::abs(sigma_ref));
    double a = (constraint(mu_ref + hm, sigma_ref) -
                constraint(mu_ref - hm, sigma_ref)) / (2.0 * hm);
    double b = (constraint(mu_ref, sigma_ref + hs) -
                constraint(mu_ref, sigma_ref - hs)) / (2.0 * hs);
    return embedded_gaussian(l, embedded_rho(a, b));
}

Model make_euclidean(int n) {
    if (n < 1 || n > 6)
        throw ParamOutOfRange("euclidean test model supports 1 to 6"
                              " dimensions", "n");
    Model m;
    m.name = "euclidean";
    m.dim = n;
    for (int k = 0; k < n; ++k)
        m.coord_names.push_back("x" + std::to_string(k + 1));
    m.domain = DomainBox::unbounded(n);
    m.metric = [n](const Eigen::VectorXd&) {
        return Eigen::MatrixXd(Eigen::MatrixXd::Identity(n, n));
    };
    m.christoffels = [n](const Eigen::VectorXd&) {
        return std::vector<Eigen::MatrixXd>(n, Eigen::MatrixXd::Zero(n, n));
    };
    for (int k = 0; k < n; ++k)
        m.det_factors.push_back([](double) { return 1.0; });
    m.application = "flat test space";
    m.params_doc = "n: integer in [1, 6]";
    return m;
}

Model build(const std::string& name,
            const std::map<std::string, double>& params) {
    if (name == "uncorrelated_gaussian") {
        check_keys(params, {"l"}, name);
        int l = integer_param(maybe(params, "l", 1.0), 1, 3, "l", name);
        return uncorrelated_gaussian(l);
    }
    if (name == "bivariate_corr") {
        check_keys(params, {"rho"}, name);
        return bivariate_corr(need(params, "rho", name));
    }
    if (name == "trivariate_case1" || name == "trivariate_case2" ||
        name == "trivariate_case3") {
        check_keys(params, {"rho"}, name);
        int variant = name.back() - '0';
        return trivariate(variant, need(params, "rho", name));
    }
    if (name == "microcorrelated_3d") {
        check_keys(params, {"rho"}, name);
        return microcorrelated_3d(need(params, "rho", name));
    }
    if (name == "embedded_gaussian") {
        check_keys(params, {"l", "rho"}, name);
        int l = integer_param(maybe(params, "l", 1.0), 1, 3, "l", name);
        double rho = maybe(params, "rho", embedded_rho(1.0, 1.0));
        return embedded_gaussian(l, rho);
    }
    if (name == "gauss_3du") {
        check_keys(params, {}, name);
        return gauss_3du();
    }
    if (name == "gauss_2du") {
        check_keys(params, {"Sigma"}, name);
        return gauss_2du(maybe(params, "Sigma", 1.0));
    }
    if (name == "gauss_3dc") {
        check_keys(params, {"rho"}, name);
        return gauss_3dc(need(params, "rho", name));
    }
    if (name == "gauss_2dc") {
        check_keys(params, {"rho", "Sigma"}, name);
        return gauss_2dc(need(params, "rho", name), maybe(params, "Sigma", 1.0));
    }
    if (name == "iho") {
        std::vector<double> omega;
        if (params.count("omega")) {
            check_keys(params, {"omega"}, name);
            omega.push_back(params.at("omega"));
        } else {
            std::set<std::string> allowed;
            for (int k = 1; k <= 6; ++k)
                allowed.insert("omega" + std::to_string(k));
            check_keys(params, allowed, name);
            for (int k = 1; k <= 6; ++k) {
                auto it = params.find("omega" + std::to_string(k));
                if (it == params.end()) break;
                omega.push_back(it->second);
            }
            if (omega.size() != params.size())
                throw ValidationError("iho: frequencies must be omega1..omegaN"
                                      " without gaps");
        }
        if (omega.empty())
            throw ValidationError("iho: needs at least omega1");
        return iho(omega);
    }
    if (name == "spin_integrable") {
        check_keys(params, {}, name);
        return spin_integrable();
    }
    if (name == "spin_chaotic") {
        check_keys(params, {}, name);
        return spin_chaotic();
    }
    if (name == "scattering_uncorr") {
        check_keys(params, {}, name);
        return scattering(0.0);
    }
    if (name == "scattering_corr") {
        check_keys(params, {"rho"}, name);
        return scattering(need(params, "rho", name));
    }
    throw ValidationError("unknown catalog model '" + name + "'");
}

std::vector<CatalogEntry> list_models() {
    return {
        {"uncorrelated_gaussian", "2l", "l: integer in [1, 3]",
         "independent Gaussian units; entropy grows linearly along radial"
         " flows"},
        {"bivariate_corr", "2", "rho in (-1, 1)",
         "two correlated Gaussian samples; complexity ratio sqrt(1+rho)"},
        {"trivariate_case1", "2", "rho in (-1, 1)",
         "three Gaussian samples, one correlated pair"},
        {"trivariate_case2", "2", "rho in (-sqrt2/2, sqrt2/2)",
         "three Gaussian samples, hub correlation; ratio peaks at rho = 1/2"},
        {"trivariate_case3", "2", "rho in (-1/2, 1)",
         "three Gaussian samples, fully connected correlations"},
        {"microcorrelated_3d", "3", "rho in (-1, 1)",
         "planar Gaussian with micro level correlation (factor f_micro)"},
        {"embedded_gaussian", "2",
         "l: integer in [1, 3]; rho in [0, 1) (optional)",
         "Gaussian units under macroscopic embedding constraints"},
        {"gauss_3du", "3", "",
         "uncorrelated planar Gaussian, three parameter form"},
        {"gauss_2du", "2", "Sigma > 0",
         "planar Gaussian reduced by the uncertainty relation"},
        {"gauss_3dc", "3", "rho in (-1, 1)",
         "correlated planar Gaussian, three parameter form"},
        {"gauss_2dc", "2", "rho in (-1, 1); Sigma > 0",
         "correlated planar Gaussian under the uncertainty relation"},
        {"iho", "l", "omega1..omegaN > 0 (N up to 6)",
         "inverted harmonic oscillators; linear entropy growth"},
        {"spin_integrable", "2", "",
         "integrable spin chain spacings; logarithmic entropy growth"},
        {"spin_chaotic", "3", "",
         "chaotic spin chain spacings; linear entropy growth"},
        {"scattering_uncorr", "3", "",
         "two particle scattering, no channel correlation"},
        {"scattering_corr", "3", "rho in [0, 1)",
         "two particle scattering with channel correlation"},
    };
}

// ---------------------------------------------------------------------------
// closed forms
// ---------------------------------------------------------------------------

double ratio_bivariate_strong(double rho) {
    check_open(rho, -1.0, 1.0, "rho", "ratio_bivariate_strong");
    return std::sqrt(1.0 + rho);
}

double ratio_trivariate_weak(double rho) {
    check_open(rho, -1.0, 1.0, "rho", "ratio_trivariate_weak");
    return std::sqrt(3.0) * std::sqrt((1.0 + rho) / (3.0 + rho));
}

double ratio_trivariate_mildly_weak(double rho) {
    check_open(rho, -kRt2Half, kRt2Half, "rho", "ratio_trivariate_mildly_weak");
    return std::sqrt(3.0) *
           std::sqrt((1.0 - 2.0 * rho * rho) / (3.0 - 4.0 * rho));
}

double ratio_trivariate_strong(double rho) {
    check_open(rho, -0.5, 1.0, "rho", "ratio_trivariate_strong");
    return std::sqrt(1.0 + 2.0 * rho);
}

double ratio_3v2(double rho) {
    check_open(rho, -0.5, 1.0, "rho", "ratio_3v2");
    return std::sqrt((1.0 + 2.0 * rho) / (1.0 + rho));
}

double f_micro(double rho) {
    check_open(rho, -1.0, 1.0, "rho", "f_micro");
    double num = 4.0 * (4.0 - rho * rho);
    double den = (2.0 - 2.0 * rho * rho) * (2.0 - 2.0 * rho * rho);
    double area = (2.0 + rho) / (4.0 * (1.0 - rho * rho));
    return std::pow(2.0, -2.5) * std::sqrt(num / den) * std::pow(area, -1.5);
}

double scattering_igc_ratio(double rho) {
    check_half_open(rho, 0.0, 1.0, "rho", "scattering_igc_ratio");
    return std::sqrt((1.0 - rho) / (1.0 + rho));
}

double scattering_ige_shift(double rho) {
    check_half_open(rho, 0.0, 1.0, "rho", "scattering_ige_shift");
    return 0.5 * std::log((1.0 - rho) / (1.0 + rho));
}

double scattering_igc_closed(double tau, double rho, double lambda) {
    check_half_open(rho, 0.0, 1.0, "rho", "scattering_igc_closed");
    check_positive(tau, "tau", "scattering_igc_closed");
    check_positive(lambda, "lambda", "scattering_igc_closed");
    double bracket = -0.75 * lambda + 0.25 * std::sinh(lambda * tau) / tau +
                     std::tanh(0.5 * lambda * tau) / tau;
    return (8.0 / lambda) * std::sqrt((1.0 - rho) / (1.0 + rho)) * bracket;
}

double scattering_ige_closed(double tau, double rho, double lambda) {
    check_half_open(rho, 0.0, 1.0, "rho", "scattering_ige_closed");
    check_positive(tau, "tau", "scattering_ige_closed");
    check_positive(lambda, "lambda", "scattering_ige_closed");
    return lambda * tau - std::log(lambda * tau) +
           0.5 * std::log((1.0 - rho) / (1.0 + rho));
}

double rho_from_complexity(double c_uncorr, double c_corr) {
    if (!(c_uncorr > 0.0) || !(c_corr > 0.0))
        throw ParamOutOfRange("rho_from_complexity: complexities must be"
                              " positive", "c");
    double u2 = c_uncorr * c_uncorr, c2 = c_corr * c_corr;
    return (u2 - c2) / (u2 + c2);
}

namespace {
void check_scattering_params(const ScatteringParams& p, bool need_as,
                             const std::string& where) {
    check_positive(p.k0, "k0", where);
    if (p.sigma_k0 < 0.0)
        throw ParamOutOfRange(where + ": sigma_k0 must be nonnegative",
                              "sigma_k0");
    check_positive(p.R0, "R0", where);
    if (!need_as) check_positive(p.L, "L", where);
    if (need_as) check_positive(p.a_s, "a_s", where);
}
}  // namespace

PurityResult purity(double rho, const ScatteringParams& p) {
    check_half_open(rho, 0.0, 1.0, "rho", "purity");
    check_scattering_params(p, false, "purity");
    double k2 = p.k0 * p.k0;
    double eta = (4.0 / 3.0) * k2 * (2.0 * k2 + p.sigma_k0 * p.sigma_k0) *
                 p.R0 * p.L * p.L * p.L;
    PurityResult r;
    r.value = 1.0 - rho * eta;
    double kL = p.k0 * p.L;
    if (kL > 0.1) {
        r.regime_warning = true;
        r.warning = "k0*L = " + fmt(kL) + " is not small; the perturbative"
                    " purity formula is outside its regime";
    }
    if (p.a_s > 0.0) {
        double rq = std::sqrt(8.0 * (2.0 * k2 + p.sigma_k0 * p.sigma_k0) *
                              p.R0 * p.a_s);
        if (rq > 0.1) {
            r.regime_warning = true;
            if (!r.warning.empty()) r.warning += "; ";
            r.warning += "implied quantum correlation " + fmt(rq) +
                         " exceeds the weak coupling regime";
        }
    }
    return r;
}

double rho_qm(const ScatteringParams& p) {
    check_scattering_params(p, true, "rho_qm");
    double k2 = p.k0 * p.k0;
    double v = std::sqrt(8.0 * (2.0 * k2 + p.sigma_k0 * p.sigma_k0) * p.R0 *
                         p.a_s);
    if (!(v >= 0.0 && v < 1.0))
        throw ParamOutOfRange("rho_qm: computed value " + fmt(v) +
                              " falls outside [0, 1)", "rho_qm");
    return v;
}

double embedded_delta(double rho) { return 1.0 + 4.0 * rho * rho; }

double embedded_ige_closed(double tau, int l, double lambda, double xi,
                           double rho) {
    if (l < 1)
        throw ParamOutOfRange("embedded_ige_closed: l must be at least 1", "l");
    check_positive(tau, "tau", "embedded_ige_closed");
    check_positive(lambda, "lambda", "embedded_ige_closed");
    check_positive(xi, "Xi", "embedded_ige_closed");
    // rho = 0 makes the subleading amplitude singular (log term divided by
    // rho); the closed form only covers correlated embeddings
    check_open(rho, 0.0, 1.0, "rho", "embedded_ige_closed");
    double delta = embedded_delta(rho);
    double rt = std::sqrt(delta);
    double a_plus = 0.5 * (3.0 + rt);
    double a_minus = 0.5 * (3.0 - rt);
    double big_sigma = -(xi / (4.0 * lambda)) * (1.0 + rt) / (1.0 - rt) *
                       std::sqrt(2.0 * a_minus / a_plus);
    if (!(big_sigma > 0.0))
        throw ParamOutOfRange("embedded_ige_closed: amplitude combination is"
                              " not positive", "Xi");
    double lam1 = 2.0 * rho * std::sqrt(2.0 - rho * rho) / (1.0 + rt);
    double lam2 =
        std::sqrt(delta * (2.0 - rho * rho)) * std::log(big_sigma) /
        (rho * lambda);
    double inner = lam1 + lam2 / tau;
    if (!(inner > 0.0))
        throw ParamOutOfRange("embedded_ige_closed: asymptote argument is not"
                              " positive at this tau", "tau");
    return l * std::log(inner);
}

double bivariate_igc_closed(double tau, double rho, double sigma0, double a1) {
    check_open(rho, -1.0, 1.0, "rho", "bivariate_igc_closed");
    check_positive(tau, "tau", "bivariate_igc_closed");
    check_positive(sigma0, "sigma0", "bivariate_igc_closed");
    check_positive(a1, "A1", "bivariate_igc_closed");
    return 4.0 * std::sqrt(2.0) / (sigma0 * a1) * std::sqrt(1.0 + rho) / tau;
}

double trivariate_igc_closed(int k, double tau, double rho, double sigma0,
                             double a1) {
    check_positive(tau, "tau", "trivariate_igc_closed");
    check_positive(sigma0, "sigma0", "trivariate_igc_closed");
    check_positive(a1, "A1", "trivariate_igc_closed");
    double c = 6.0 * std::sqrt(6.0) / (sigma0 * a1);
    switch (k) {
        case 1:
            check_open(rho, -1.0, 1.0, "rho", "trivariate_igc_closed");
            return c * std::sqrt((1.0 + rho) / (3.0 + rho)) / tau;
        case 2:
            check_open(rho, -kRt2Half, kRt2Half, "rho",
                       "trivariate_igc_closed");
            return c *
                   std::sqrt((1.0 - 2.0 * rho * rho) / (3.0 - 4.0 * rho)) /
                   tau;
        case 3:
            check_open(rho, -0.5, 1.0, "rho", "trivariate_igc_closed");
            return 12.0 / (sigma0 * a1) * std::sqrt(1.0 + 2.0 * rho) / tau;
        default:
            throw ValidationError("trivariate_igc_closed: k must be 1, 2 or 3");
    }
}

double micro_igc_closed(double tau, double rho, double a, double sigma0) {
    check_open(rho, -1.0, 1.0, "rho", "micro_igc_closed");
    check_positive(tau, "tau", "micro_igc_closed");
    check_positive(a, "a", "micro_igc_closed");
    check_positive(sigma0, "sigma0", "micro_igc_closed");
    double area = a * a * (2.0 + rho) / (4.0 * (1.0 - rho * rho));
    double num = 4.0 * (4.0 - rho * rho);
    double den = (2.0 - 2.0 * rho * rho) * (2.0 - 2.0 * rho * rho);
    return a * a / (2.0 * sigma0 * std::pow(area, 1.5)) *
           std::sqrt(num / den) / tau;
}

double gauss_igc_closed_2du(double tau, double mu0, double sigma0,
                            double lambda_plus) {
    check_positive(tau, "tau", "gauss_igc_closed_2du");
    check_positive(sigma0, "sigma0", "gauss_igc_closed_2du");
    check_positive(lambda_plus, "lambda_plus", "gauss_igc_closed_2du");
    return (mu0 + 2.0 * sigma0) / (sigma0 * sigma0 * lambda_plus) *
           std::exp(sigma0 * lambda_plus * tau) / tau;
}

double gauss_igc_closed_2dc(double tau, double mu0, double sigma0,
                            double lambda_plus, double rho) {
    check_open(rho, -1.0, 1.0, "rho", "gauss_igc_closed_2dc");
    return gauss_igc_closed_2du(tau, mu0, sigma0, lambda_plus) /
           (1.0 - rho * rho);
}

double gauss_ige_closed_3du(double tau, double lambda_prime_plus) {
    check_positive(tau, "tau", "gauss_ige_closed_3du");
    check_positive(lambda_prime_plus, "lambda_prime_plus",
                   "gauss_ige_closed_3du");
    return lambda_prime_plus * tau;
}

double gauss_ige_closed_2du(double tau, double lambda_prime_plus) {
    check_positive(tau, "tau", "gauss_ige_closed_2du");
    check_positive(lambda_prime_plus, "lambda_prime_plus",
                   "gauss_ige_closed_2du");
    return lambda_prime_plus / std::sqrt(2.0) * tau;
}

double gauss_ige_closed_2dc(double tau, double sigma0, double lambda_plus) {
    check_positive(tau, "tau", "gauss_ige_closed_2dc");
    check_positive(sigma0, "sigma0", "gauss_ige_closed_2dc");
    check_positive(lambda_plus, "lambda_plus", "gauss_ige_closed_2dc");
    return sigma0 * lambda_plus * tau;
}

double iho_igc_closed(double tau, int l, double amp, double xi, double omega) {
    if (l < 1)
        throw ParamOutOfRange("iho_igc_closed: l must be at least 1", "l");
    check_positive(tau, "tau", "iho_igc_closed");
    check_positive(amp, "Xi", "iho_igc_closed");
    check_positive(xi, "xi", "iho_igc_closed");
    check_positive(omega, "Omega", "iho_igc_closed");
    double half_l = 0.5 * l;
    return (1.0 / l) * std::pow(2.0, -half_l) * std::pow(amp, 2.0 * l) *
           std::pow(0.5 * xi * xi * omega * omega, half_l) *
           std::exp(half_l * xi * omega * tau) / tau;
}

double iho_ige_closed(double tau, double omega) {
    check_positive(tau, "tau", "iho_ige_closed");
    check_positive(omega, "Omega", "iho_ige_closed");
    return omega * tau;
}

}  // namespace igac
