#include "igac/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "igac/csvio.hpp"
#include "igac/errors.hpp"
#include "igac/quadrature.hpp"

namespace igac {

namespace {

constexpr double kVaryingRel = 1e-9;  // displacement threshold, frozen axes

// Evaluates V(s) for one (model, path, s0) combination. Per-coordinate prefix
// integrals are accumulated over the path's own nodes so repeated evaluation
// across a grid stays linear in the grid size.
class VolumeEvaluator {
public:
    VolumeEvaluator(const Model& m, const GeodesicPath& p, double s0,
                    double s_max)
        : m_(m), p_(p), s0_(s0) {
        if (p.nodes() < 2)
            throw PathTooShort("volume needs a path with at least two nodes");
        const double slack = 1e-9 * (1.0 + std::abs(p.tau_end()));
        if (s0 < p.tau_start() - slack || s_max > p.tau_end() + slack) {
            std::string msg = "volume window [" + std::to_string(s0) + ", " +
                              std::to_string(s_max) + "] exceeds the path range";
            if (p.domain_exit)
                msg += " (path truncated at the domain edge, tau_end = " +
                       std::to_string(p.tau_end()) + ")";
            throw PathTooShort(msg);
        }
        s_max_ = std::min(s_max, p.tau_end());
        s0_ = std::max(s0_, p.tau_start());

        detect_varying();
        factorized_ = !m.det_factors.empty();
        if (factorized_ &&
            static_cast<int>(m.det_factors.size()) != m.dim)
            throw ValidationError(m.name + ": determinant factor list does not"
                                  " match the dimension");
        if (factorized_) build_prefix();
    }

    bool any_varying() const { return n_varying_ > 0; }

    double operator()(double s) const {
        if (s <= s0_) return 0.0;
        s = std::min(s, s_max_);
        if (n_varying_ == 0) return 0.0;
        return factorized_ ? product_value(s) : box_value(s);
    }

private:
    const Model& m_;
    const GeodesicPath& p_;
    double s0_;
    double s_max_ = 0.0;
    bool factorized_ = false;
    std::vector<char> varying_;
    int n_varying_ = 0;
    Eigen::VectorXd frozen_;            // coordinates at s0
    std::vector<double> knots_;          // s0, interior path nodes, s_max
    std::vector<std::vector<double>> prefix_;  // [coord][knot]

    void detect_varying() {
        varying_.assign(m_.dim, 0);
        frozen_ = p_.position(s0_);
        // ascending sample points across the window: every node boundary
        // plus segment midpoints
        std::vector<double> ss;
        ss.push_back(s0_);
        for (size_t i = 0; i + 1 < p_.tau.size(); ++i) {
            double a = std::max(p_.tau[i], s0_);
            double b = std::min(p_.tau[i + 1], s_max_);
            if (a >= b) continue;
            ss.push_back(a);
            ss.push_back(0.5 * (a + b));
            ss.push_back(b);
        }
        ss.push_back(s_max_);
        // a coordinate counts as frozen when its total variation along the
        // window is negligible against its own magnitude; each axis is
        // judged on its own scale so slow coordinates survive next to
        // exponentially faster ones
        Eigen::VectorXd tv = Eigen::VectorXd::Zero(m_.dim);
        Eigen::VectorXd amax = Eigen::VectorXd::Zero(m_.dim);
        Eigen::VectorXd prev = p_.position(ss.front());
        amax = prev.cwiseAbs();
        for (size_t i = 1; i < ss.size(); ++i) {
            Eigen::VectorXd cur = p_.position(ss[i]);
            tv += (cur - prev).cwiseAbs();
            amax = amax.cwiseMax(cur.cwiseAbs());
            prev = cur;
        }
        for (int k = 0; k < m_.dim; ++k) {
            if (tv(k) > kVaryingRel * std::max(1.0, amax(k))) {
                varying_[k] = 1;
                ++n_varying_;
            }
        }
    }

    // int_a^b sqrt(f_k(theta_k)) |dtheta_k/ds| ds by 5 point Gauss-Legendre
    double segment_integral(int k, double a, double b) const {
        const QuadRule& q = gauss_legendre(5);
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double acc = 0.0;
        Eigen::VectorXd th, v;
        for (int i = 0; i < q.nodes.size(); ++i) {
            double s = mid + half * q.nodes(i);
            p_.eval(s, &th, &v);
            double f = m_.det_factors[k](th(k));
            if (!std::isfinite(f))
                throw NonFiniteIntegrand(m_.name + ": determinant factor not"
                                         " finite along the path");
            if (f < 0.0)
                throw NonPositiveDeterminant(
                    m_.name + ": determinant factor negative along the path", f);
            acc += q.weights(i) * std::sqrt(f) * std::abs(v(k));
        }
        return acc * half;
    }

    void build_prefix() {
        knots_.clear();
        knots_.push_back(s0_);
        for (double t : p_.tau)
            if (t > s0_ && t < s_max_) knots_.push_back(t);
        knots_.push_back(s_max_);
        prefix_.assign(m_.dim, std::vector<double>(knots_.size(), 0.0));
        for (int k = 0; k < m_.dim; ++k) {
            if (!varying_[k]) continue;
            for (size_t i = 1; i < knots_.size(); ++i)
                prefix_[k][i] = prefix_[k][i - 1] +
                                segment_integral(k, knots_[i - 1], knots_[i]);
        }
    }

    double product_value(double s) const {
        auto it = std::upper_bound(knots_.begin(), knots_.end(), s);
        size_t i = static_cast<size_t>(it - knots_.begin());
        if (i == 0) return 0.0;
        --i;
        if (i + 1 >= knots_.size()) i = knots_.size() - 2;
        double value = 1.0;
        for (int k = 0; k < m_.dim; ++k) {
            if (!varying_[k]) continue;
            double factor = prefix_[k][i];
            if (s > knots_[i]) factor += segment_integral(k, knots_[i], s);
            value *= factor;
        }
        return value;
    }

    // tensor quadrature of sqrt(det g) over the box spanned by the window
    // endpoints, with doubling until two successive orders agree
    double box_value(double s) const {
        Eigen::VectorXd end = p_.position(s);
        std::vector<int> axes;
        for (int k = 0; k < m_.dim; ++k)
            if (varying_[k]) axes.push_back(k);

        auto integral = [&](int order) {
            const QuadRule& q = gauss_legendre(order);
            const int d = static_cast<int>(axes.size());
            long total = 1;
            for (int i = 0; i < d; ++i) total *= order;
            std::vector<int> idx(d, 0);
            Eigen::VectorXd th = frozen_;
            double acc = 0.0;
            for (long r = 0; r < total; ++r) {
                double w = 1.0;
                for (int i = 0; i < d; ++i) {
                    int k = axes[i];
                    double lo = std::min(frozen_(k), end(k));
                    double hi = std::max(frozen_(k), end(k));
                    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
                    th(k) = mid + half * q.nodes(idx[i]);
                    w *= q.weights(idx[i]) * half;
                }
                Eigen::MatrixXd g = m_.metric(th);
                double det = g.determinant();
                if (!std::isfinite(det))
                    throw NonFiniteIntegrand(m_.name + ": det g not finite in"
                                             " the swept box");
                if (det < 0.0)
                    throw NonPositiveDeterminant(
                        m_.name + ": det g negative in the swept box", det);
                acc += w * std::sqrt(det);
                for (int i = d - 1; i >= 0; --i) {
                    if (++idx[i] < order) break;
                    idx[i] = 0;
                }
            }
            return acc;
        };

        double prev = integral(8);
        double delta = std::numeric_limits<double>::infinity();
        for (int order = 16; order <= 128; order *= 2) {
            double next = integral(order);
            delta = std::abs(next - prev) / std::max(1.0, std::abs(next));
            if (delta < 1e-9) return next;
            prev = next;
        }
        throw QuadratureNotConverged("swept box quadrature did not settle",
                                     delta);
    }
};

void check_grid(const std::vector<double>& tau_grid) {
    if (tau_grid.empty()) throw ValidationError("empty tau grid");
    double prev = -std::numeric_limits<double>::infinity();
    for (double t : tau_grid) {
        if (!(t >= 0.0) || !std::isfinite(t))
            throw ValidationError("tau grid values must be finite and nonnegative");
        if (t <= prev) throw ValidationError("tau grid must increase strictly");
        prev = t;
    }
}

// shared driver: V is a function of the offset u >= 0 from the window start
Trace igc_impl(const std::function<double(double)>& V,
               const std::vector<double>& tau_grid) {
    check_grid(tau_grid);
    Trace tr;
    tr.tau = tau_grid;
    tr.volume.resize(tau_grid.size());
    tr.igc.resize(tau_grid.size());
    tr.ige.resize(tau_grid.size());

    const double span = tau_grid.back();
    const double h_target = span / 1024.0;

    double integral = 0.0;  // int_0^tau V du, advanced knot to knot
    double prev_knot = 0.0;
    for (size_t i = 0; i < tau_grid.size(); ++i) {
        double knot = tau_grid[i];
        double gap = knot - prev_knot;
        if (gap > 0.0) {
            int panels = std::max<int>(4, static_cast<int>(std::ceil(gap / std::max(h_target, 1e-300))));
            double h = gap / panels;
            for (int p = 0; p < panels; ++p) {
                double a = prev_knot + p * h;
                double fa = V(a), fm = V(a + 0.5 * h), fb = V(a + h);
                if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb))
                    throw NonFiniteIntegrand("volume profile not finite inside"
                                             " the averaging window");
                integral += h / 6.0 * (fa + 4.0 * fm + fb);
            }
        }
        prev_knot = knot;
        tr.volume[i] = V(knot);
        tr.igc[i] = knot > 0.0 ? integral / knot : 0.0;
        tr.ige[i] = tr.igc[i] > 0.0 ? std::log(tr.igc[i])
                                    : -std::numeric_limits<double>::infinity();
    }
    return tr;
}

struct LinFit {
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
    bool ok = false;
};

LinFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    LinFit f;
    const size_t n = x.size();
    if (n < 2) return f;
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return f;  // constant input, R^2 undefined
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double r = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += r * r;
    }
    f.r2 = 1.0 - ss_res / syy;
    f.ok = true;
    return f;
}

}  // namespace

double volume_at(const Model& m, const GeodesicPath& path, double s,
                 double s0) {
    VolumeEvaluator ve(m, path, s0, std::max(s, s0));
    return ve(s);
}

Trace igc(const Model& m, const GeodesicPath& path,
          const std::vector<double>& tau_grid, double s0) {
    check_grid(tau_grid);
    VolumeEvaluator ve(m, path, s0, s0 + tau_grid.back());
    return igc_impl([&](double u) { return ve(s0 + u); }, tau_grid);
}

Trace igc_from_function(const std::function<double(double)>& volume,
                        const std::vector<double>& tau_grid) {
    return igc_impl(volume, tau_grid);
}

double ks_analogue(const Trace& t, double win_lo, double win_hi) {
    if (!(win_hi > win_lo))
        throw ValidationError("slope window must have positive width");
    std::vector<double> x, y;
    for (size_t i = 0; i < t.tau.size(); ++i) {
        if (t.tau[i] < win_lo || t.tau[i] > win_hi) continue;
        if (!std::isfinite(t.ige[i])) continue;
        x.push_back(t.tau[i]);
        y.push_back(t.ige[i]);
    }
    if (x.size() < 10)
        throw WindowTooSmall("need at least 10 finite samples in the slope"
                             " window, have " + std::to_string(x.size()));
    LinFit f = least_squares(x, y);
    if (!f.ok) throw DegenerateTrace("entropy analogue is constant over the window");
    return f.slope;
}

double ks_analogue_tail(const Trace& t, double tail_fraction) {
    if (!(tail_fraction > 0.0) || tail_fraction > 1.0)
        throw ValidationError("tail fraction must lie in (0, 1]");
    if (t.tau.empty()) throw DegenerateTrace("empty trace");
    double lo = t.tau.back() - tail_fraction * (t.tau.back() - t.tau.front());
    return ks_analogue(t, lo, t.tau.back());
}

GrowthFit classify_growth(const std::vector<double>& tau,
                          const std::vector<double>& y,
                          double tail_fraction) {
    if (tau.size() != y.size())
        throw ValidationError("tau and value series differ in length");
    if (!(tail_fraction > 0.0) || tail_fraction > 1.0)
        throw ValidationError("tail fraction must lie in (0, 1]");
    const size_t n = tau.size();
    size_t k = static_cast<size_t>(std::ceil(tail_fraction * n));
    if (k < 3)
        throw WindowTooSmall("growth fit tail has fewer than 3 samples");
    std::vector<double> tx, ty;
    for (size_t i = n - k; i < n; ++i) {
        if (!std::isfinite(y[i]) || !std::isfinite(tau[i])) continue;
        tx.push_back(tau[i]);
        ty.push_back(y[i]);
    }
    if (tx.size() < 3)
        throw DegenerateTrace("growth fit tail has fewer than 3 finite samples");

    GrowthFit out;
    out.tail_count = tx.size();
    out.tail_lo = tx.front();
    out.tail_hi = tx.back();

    bool tau_pos = true, y_pos = true;
    for (double v : tx) tau_pos = tau_pos && v > 0.0;
    for (double v : ty) y_pos = y_pos && v > 0.0;

    auto add = [&](const std::string& name, bool usable,
                   const std::function<double(double)>& fx,
                   const std::function<double(double)>& fy) {
        FitCandidate c;
        c.regime = name;
        c.usable = usable;
        if (usable) {
            std::vector<double> X(tx.size()), Y(ty.size());
            for (size_t i = 0; i < tx.size(); ++i) {
                X[i] = fx(tx[i]);
                Y[i] = fy(ty[i]);
            }
            LinFit f = least_squares(X, Y);
            if (f.ok) {
                c.r2 = f.r2;
                c.slope = f.slope;
                c.intercept = f.intercept;
            } else {
                c.usable = false;
            }
        }
        out.candidates.push_back(c);
    };

    auto id = [](double v) { return v; };
    auto lg = [](double v) { return std::log(v); };
    add("linear", true, id, id);
    add("logarithmic", tau_pos, lg, id);
    add("exponential", y_pos, id, lg);
    add("power", tau_pos && y_pos, lg, lg);

    const FitCandidate* best = nullptr;
    const FitCandidate* second = nullptr;
    for (const auto& c : out.candidates) {
        if (!c.usable) continue;
        if (!best || c.r2 > best->r2) {
            second = best;
            best = &c;
        } else if (!second || c.r2 > second->r2) {
            second = &c;
        }
    }
    if (!best)
        throw DegenerateTrace("no growth law applies to the trace tail");

    out.rate = best->slope;
    out.intercept = best->intercept;
    out.r2 = best->r2;
    if (second) {
        out.margin = best->r2 - second->r2;
        out.regime = out.margin < 0.001 ? "ambiguous" : best->regime;
    } else {
        out.margin = 1.0;
        out.regime = best->regime;
    }
    return out;
}

std::string format_fit(const GrowthFit& fit) {
    std::ostringstream os;
    char head[64];
    std::snprintf(head, sizeof(head), "slope=%.6f", fit.rate);
    os << "regime=" << fit.regime << " " << head << "\n";
    os << "rate: " << format_double(fit.rate) << "\n";
    os << "intercept: " << format_double(fit.intercept) << "\n";
    os << "r2: " << format_double(fit.r2) << "\n";
    os << "margin: " << format_double(fit.margin) << "\n";
    os << "tail_samples: " << fit.tail_count << "\n";
    os << "tail_range: [" << format_double(fit.tail_lo) << ", "
       << format_double(fit.tail_hi) << "]\n";
    for (const auto& c : fit.candidates) {
        os << "  " << c.regime << ": ";
        if (c.usable) {
            os << "r2=" << format_double(c.r2)
               << " slope=" << format_double(c.slope)
               << " intercept=" << format_double(c.intercept);
        } else {
            os << "not applicable (transform undefined on tail)";
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace igac
