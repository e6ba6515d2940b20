#include "igac/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>
#include <thread>

#include <Eigen/Dense>

#include "igac/catalog.hpp"
#include "igac/csvio.hpp"
#include "igac/errors.hpp"
#include "igac/geodesic.hpp"
#include "igac/manifold.hpp"
#include "igac/mre.hpp"

namespace fs = std::filesystem;

namespace igac {

namespace {

Eigen::VectorXd to_vec(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i)
        out[i] = a + (b - a) * (static_cast<double>(i) / (n - 1));
    out.back() = b;
    return out;
}

// tag module failures with the pipeline stage they came from
template <class F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        throw Error("[" + name + "] " + e.what());
    }
}

std::string join_path(const std::string& dir, const std::string& file) {
    return (fs::path(dir) / file).string();
}

CsvTable path_table(const Model& m, const GeodesicPath& p,
                    const std::vector<double>& grid) {
    CsvTable t;
    t.header.push_back("tau");
    for (const auto& n : m.coord_names) t.header.push_back("theta_" + n);
    for (const auto& n : m.coord_names) t.header.push_back("v_" + n);
    double end = p.tau_end() * (1.0 + 1e-12) + 1e-300;
    Eigen::VectorXd th(m.dim), v(m.dim);
    for (double tau : grid) {
        if (tau > end) break;  // truncated at the domain edge
        p.eval(std::min(tau, p.tau_end()), &th, &v);
        std::vector<double> row;
        row.reserve(1 + 2 * m.dim);
        row.push_back(tau);
        for (int k = 0; k < m.dim; ++k) row.push_back(th(k));
        for (int k = 0; k < m.dim; ++k) row.push_back(v(k));
        t.rows.push_back(std::move(row));
    }
    return t;
}

double max_rel_mismatch(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    double scale = b.cwiseAbs().maxCoeff();
    if (scale <= 0.0) scale = 1.0;
    return (a - b).cwiseAbs().maxCoeff() / scale;
}

// deterministic interior points for metric spot checks; bounded axes get a
// 5% inset, half lines get [edge + 0.3, edge + 3], free axes get [-2, 2]
std::vector<Eigen::VectorXd> sample_points(const Model& m, int n,
                                           unsigned long seed) {
    std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Eigen::VectorXd> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd th(m.dim);
        for (int k = 0; k < m.dim; ++k) {
            double lo = m.domain.lo(k), hi = m.domain.hi(k);
            double u = unit(rng);
            if (std::isfinite(lo) && std::isfinite(hi))
                th(k) = lo + (0.05 + 0.9 * u) * (hi - lo);
            else if (std::isfinite(lo))
                th(k) = lo + 0.3 + 2.7 * u;
            else if (std::isfinite(hi))
                th(k) = hi - 0.3 - 2.7 * u;
            else
                th(k) = -2.0 + 4.0 * u;
        }
        pts.push_back(th);
    }
    return pts;
}

void push_file(RunReport* rep, const std::string& path) {
    rep->files.push_back(path);
}

void run_metric_check(const Scenario& sc, const std::string& out_dir,
                      RunReport* rep) {
    Model m = stage("catalog", [&] { return build(sc.model_name,
                                                  sc.model_params); });
    if (!m.family.valid())
        throw ValidationError("model " + m.name + " carries no sampling"
                              " density; metric_check does not apply");
    std::vector<Eigen::VectorXd> pts;
    if (!sc.mc_theta.empty())
        pts.push_back(to_vec(sc.mc_theta));
    else
        pts = sample_points(m, sc.mc_points, sc.mc_seed);

    CsvTable t;
    t.header = {"point", "rel_err"};
    double worst = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) {
        Eigen::MatrixXd ana =
            stage("metric", [&] { return metric_analytic(m, pts[i]); });
        Eigen::MatrixXd num =
            stage("metric", [&] { return metric_numeric(m.family, pts[i]); });
        double rel = max_rel_mismatch(num, ana);
        worst = std::max(worst, rel);
        t.rows.push_back({static_cast<double>(i), rel});
    }
    std::string path = join_path(out_dir, sc.id + "_metric.csv");
    write_csv(path, t);
    push_file(rep, path);

    Assertion a;
    a.name = "metric_rel_err";
    a.detail = "max relative mismatch between quadrature and analytic metric";
    a.measured = worst;
    a.bound = sc.mc_tol;
    a.passed = worst <= sc.mc_tol;
    rep->assertions.push_back(a);
}

void run_geodesic_ivp(const Scenario& sc, const std::string& out_dir,
                      RunReport* rep) {
    Model m = stage("catalog", [&] { return build(sc.model_name,
                                                  sc.model_params); });
    GeodesicPath p = stage("geodesic", [&] {
        return integrate_ivp(m, to_vec(sc.theta0), to_vec(sc.v0), sc.tau_max,
                             sc.tol);
    });
    auto grid = linspace(sc.tau_min, sc.tau_max, sc.samples);
    std::string path_csv = join_path(out_dir, sc.id + "_path.csv");
    write_csv(path_csv, path_table(m, p, grid));
    push_file(rep, path_csv);

    // squared speed drift along the sampled stretch, for the report
    double q0 = squared_speed(m, p.position(0.0), p.velocity(0.0));
    double drift = 0.0;
    for (double tau : grid) {
        if (tau > p.tau_end()) break;
        double q = squared_speed(m, p.position(tau), p.velocity(tau));
        drift = std::max(drift, std::abs(q / q0 - 1.0));
    }
    std::ostringstream os;
    os << "scenario: " << sc.id << "\n";
    os << "nodes: " << p.nodes() << "\n";
    os << "tau_end: " << format_double(p.tau_end()) << "\n";
    os << "domain_exit: " << (p.domain_exit ? "yes" : "no") << "\n";
    os << "squared_speed_start: " << format_double(q0) << "\n";
    os << "squared_speed_drift: " << format_double(drift) << "\n";
    std::string rep_txt = join_path(out_dir, sc.id + "_ivp.txt");
    write_text(rep_txt, os.str());
    push_file(rep, rep_txt);
}

void run_geodesic_bvp(const Scenario& sc, const std::string& out_dir,
                      RunReport* rep) {
    Model m = stage("catalog", [&] { return build(sc.model_name,
                                                  sc.model_params); });
    BvpResult r = stage("bvp", [&] {
        return solve_bvp(m, to_vec(sc.theta0), to_vec(sc.theta1), sc.span,
                         sc.tol);
    });
    auto grid = linspace(0.0, sc.span, sc.samples);
    std::string path_csv = join_path(out_dir, sc.id + "_path.csv");
    write_csv(path_csv, path_table(m, r.path, grid));
    push_file(rep, path_csv);

    std::ostringstream os;
    os << "scenario: " << sc.id << "\n";
    os << "v0:";
    for (int k = 0; k < m.dim; ++k) os << " " << format_double(r.v0(k));
    os << "\n";
    os << "iterations: " << r.iterations << "\n";
    os << "residual: " << format_double(r.residual) << "\n";
    std::string rep_txt = join_path(out_dir, sc.id + "_bvp.txt");
    write_text(rep_txt, os.str());
    push_file(rep, rep_txt);

    if (sc.has_expect_v0) {
        double err = 0.0;
        for (int k = 0; k < m.dim; ++k)
            err = std::max(err, std::abs(r.v0(k) - sc.expect_v0[k]));
        Assertion a;
        a.name = "bvp_v0";
        a.detail = "recovered initial velocity vs expected, max abs";
        a.measured = err;
        a.bound = sc.v0_tol;
        a.passed = err <= sc.v0_tol;
        rep->assertions.push_back(a);
    }
}

void run_complexity_trace(const Scenario& sc, const std::string& out_dir,
                          RunReport* rep) {
    Model m = stage("catalog", [&] { return build(sc.model_name,
                                                  sc.model_params); });
    double horizon = sc.s0 + sc.tau_max;
    GeodesicPath p = stage("geodesic", [&] {
        return integrate_ivp(m, to_vec(sc.theta0), to_vec(sc.v0), horizon,
                             sc.tol);
    });
    auto grid = linspace(sc.tau_min, sc.tau_max, sc.samples);
    Trace tr = stage("complexity", [&] { return igc(m, p, grid, sc.s0); });

    CsvTable tt;
    tt.header = {"tau", "volume", "igc", "ige"};
    for (size_t i = 0; i < tr.tau.size(); ++i)
        tt.rows.push_back({tr.tau[i], tr.volume[i], tr.igc[i], tr.ige[i]});
    std::string trace_csv = join_path(out_dir, sc.id + "_trace.csv");
    write_csv(trace_csv, tt);
    push_file(rep, trace_csv);

    std::string path_csv = join_path(out_dir, sc.id + "_path.csv");
    write_csv(path_csv, path_table(m, p, linspace(0.0, horizon, sc.samples)));
    push_file(rep, path_csv);

    const std::vector<double>* series = &tr.ige;
    if (sc.quantity == "igc") series = &tr.igc;
    if (sc.quantity == "volume") series = &tr.volume;
    GrowthFit fit = stage("fit", [&] {
        return classify_growth(tr.tau, *series, sc.tail);
    });
    rep->has_fit = true;
    rep->fit = fit;

    std::ostringstream os;
    os << "scenario: " << sc.id << "\n";
    os << "series: " << sc.quantity << "\n";
    os << format_fit(fit);

    if (!sc.compare.op.empty()) {
        auto f = closed_form_op(sc.compare.op, sc.compare.params);
        const std::vector<double>* base = &tr.igc;
        if (sc.compare.quantity == "ige") base = &tr.ige;
        if (sc.compare.quantity == "volume") base = &tr.volume;
        os << "comparison: " << sc.compare.op << " against "
           << sc.compare.quantity << "\n";
        double worst = 0.0, worst_tail = 0.0;
        size_t n = tr.tau.size();
        size_t tail_first =
            n - static_cast<size_t>(std::ceil(sc.tail * static_cast<double>(n)));
        for (size_t i = 0; i < n; ++i) {
            double closed = f(tr.tau[i]);
            double delta = std::abs((*base)[i] - closed);
            worst = std::max(worst, delta);
            if (i >= tail_first) worst_tail = std::max(worst_tail, delta);
            os << "tau=" << format_double(tr.tau[i])
               << " numeric=" << format_double((*base)[i])
               << " closed=" << format_double(closed)
               << " abs_delta=" << format_double(delta) << "\n";
        }
        os << "max_abs_delta: " << format_double(worst) << "\n";
        os << "max_abs_delta_tail: " << format_double(worst_tail) << "\n";
        if (sc.compare.has_tail_delta) {
            Assertion a;
            a.name = "closed_form_delta";
            a.detail = "max |numeric - " + sc.compare.op +
                       "| over the fit tail";
            a.measured = worst_tail;
            a.bound = sc.compare.tail_delta_max;
            a.passed = worst_tail <= sc.compare.tail_delta_max;
            rep->assertions.push_back(a);
        }
    }
    std::string fit_txt = join_path(out_dir, sc.id + "_fit.txt");
    write_text(fit_txt, os.str());
    push_file(rep, fit_txt);

    if (sc.has_expect_regime) {
        Assertion a;
        a.name = "regime";
        a.detail = "classified '" + fit.regime + "', expected '" +
                   sc.expect_regime + "'";
        a.measured = fit.margin;  // how clear the winner was
        a.bound = 0.001;
        a.passed = fit.regime == sc.expect_regime;
        rep->assertions.push_back(a);
    }
    if (sc.has_r2_min) {
        Assertion a;
        a.name = "r2";
        a.detail = "fit R^2 in transform space";
        a.measured = fit.r2;
        a.bound = sc.r2_min;
        a.passed = fit.r2 >= sc.r2_min;
        rep->assertions.push_back(a);
    }
    if (sc.has_expect_rate) {
        Assertion a;
        a.name = "rate";
        a.detail = "fit slope vs expected " + format_double(sc.expect_rate) +
                   " within " + format_double(sc.rate_tol);
        a.measured = fit.rate;
        a.bound = sc.rate_tol;
        a.passed = std::abs(fit.rate - sc.expect_rate) <= sc.rate_tol;
        rep->assertions.push_back(a);
    }
}

void run_ratio_table(const Scenario& sc, const std::string& out_dir,
                     RunReport* rep) {
    auto f = ratio_family_fn(sc.ratio_family);
    GridSpec g{sc.grid_lo, sc.grid_hi, sc.grid_step};
    CsvTable t;
    t.header = {"rho", "value"};
    for (double rho : g.points())
        t.rows.push_back({rho, stage("ratios", [&] { return f(rho); })});
    std::string path = join_path(out_dir, sc.id + "_ratios.csv");
    write_csv(path, t);
    push_file(rep, path);
}

void run_mre_update(const Scenario& sc, const std::string& out_dir,
                    RunReport* rep) {
    fs::path gp = sc.mre_grid_path;
    if (gp.is_relative() && !sc.source_path.empty())
        gp = fs::path(sc.source_path).parent_path() / gp;
    GridPrior g =
        stage("mre", [&] { return load_grid_prior(gp.string()); });

    std::vector<int> obs;
    for (const auto& name : sc.observations) {
        int j = g.observable_index(name);
        if (j < 0)
            throw ValidationError("grid " + gp.string() +
                                  " has no likelihood column for '" + name +
                                  "'");
        obs.push_back(j);
    }

    MreSolution sol;
    if (sc.has_moment) {
        std::vector<double> coef = sc.moment_poly;
        MomentConstraint c;
        c.f = [coef](double th) {
            double acc = 0.0;
            for (size_t k = coef.size(); k-- > 0;) acc = acc * th + coef[k];
            return acc;
        };
        c.target = sc.moment_target;
        sol = stage("mre", [&] { return mre_update(g, obs, c); });
    } else {
        sol.posterior = stage("mre", [&] { return bayes_update(g, obs); });
        sol.beta = 0.0;
    }

    CsvTable t;
    t.header = {"theta", "posterior"};
    for (size_t i = 0; i < g.size(); ++i)
        t.rows.push_back({g.theta[i], sol.posterior[i]});
    std::string post_csv = join_path(out_dir, sc.id + "_posterior.csv");
    write_csv(post_csv, t);
    push_file(rep, post_csv);

    std::ostringstream os;
    os << "scenario: " << sc.id << "\n";
    os << "nodes: " << g.size() << "\n";
    os << "observations: " << obs.size() << "\n";
    os << "beta: " << format_double(sol.beta) << "\n";
    if (sc.has_moment) {
        os << "moment: " << format_double(sol.moment) << "\n";
        os << "target: " << format_double(sc.moment_target) << "\n";
        os << "log_normalizer: " << format_double(sol.log_normalizer) << "\n";
    }
    std::string rep_txt = join_path(out_dir, sc.id + "_mre.txt");
    write_text(rep_txt, os.str());
    push_file(rep, rep_txt);

    if (sc.has_expect_beta) {
        Assertion a;
        a.name = "beta";
        a.detail = "tilt multiplier vs expected " +
                   format_double(sc.expect_beta);
        a.measured = sol.beta;
        a.bound = sc.beta_tol;
        a.passed = std::abs(sol.beta - sc.expect_beta) <= sc.beta_tol;
        rep->assertions.push_back(a);
    }
}

}  // namespace

std::string resolve_out_dir(const Scenario& sc,
                            const std::string& out_dir_override) {
    if (!out_dir_override.empty()) return out_dir_override;
    const char* env = std::getenv("IGAC_OUT");
    if (env && *env) return env;
    if (!sc.out_dir.empty()) return sc.out_dir;
    return "out";
}

RunReport run(const Scenario& sc, const std::string& out_dir_override) {
    auto t0 = std::chrono::steady_clock::now();
    RunReport rep;
    rep.id = sc.id;
    std::string out_dir = resolve_out_dir(sc, out_dir_override);
    ensure_directory(out_dir);

    if (sc.kind == "metric_check")
        run_metric_check(sc, out_dir, &rep);
    else if (sc.kind == "geodesic_ivp")
        run_geodesic_ivp(sc, out_dir, &rep);
    else if (sc.kind == "geodesic_bvp")
        run_geodesic_bvp(sc, out_dir, &rep);
    else if (sc.kind == "complexity_trace")
        run_complexity_trace(sc, out_dir, &rep);
    else if (sc.kind == "ratio_table")
        run_ratio_table(sc, out_dir, &rep);
    else if (sc.kind == "mre_update")
        run_mre_update(sc, out_dir, &rep);
    else
        throw ValidationError("unknown kind '" + sc.kind + "'");

    rep.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return rep;
}

std::vector<RunReport> run_directory(const std::string& dir,
                                     const std::string& out_dir_override,
                                     int workers) {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".scn")
            files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw IoError("no .scn files in " + dir);

    // load everything first so config mistakes surface before any run, and
    // duplicate ids cannot silently overwrite each other's outputs
    std::vector<Scenario> scenarios;
    scenarios.reserve(files.size());
    for (const auto& f : files) scenarios.push_back(load_scenario(f));
    for (size_t i = 0; i < scenarios.size(); ++i)
        for (size_t j = i + 1; j < scenarios.size(); ++j)
            if (scenarios[i].id == scenarios[j].id)
                throw ValidationError("duplicate scenario id '" +
                                      scenarios[i].id + "' in " + files[i] +
                                      " and " + files[j]);

    workers = std::clamp(workers, 1,
                         static_cast<int>(std::min<size_t>(64,
                                                           files.size())));
    std::vector<RunReport> reports(scenarios.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= scenarios.size()) return;
            try {
                reports[i] = run(scenarios[i], out_dir_override);
            } catch (const std::exception& e) {
                reports[i].id = scenarios[i].id;
                reports[i].error = e.what();
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return reports;
}

std::string summarize(const RunReport& r) {
    std::ostringstream os;
    os << r.id << ": " << (r.ok() ? "pass" : "FAIL");
    char buf[32];
    std::snprintf(buf, sizeof(buf), " (%.3f s)", r.duration_seconds);
    os << buf << "\n";
    if (!r.error.empty()) os << "  error: " << r.error << "\n";
    for (const auto& f : r.files) os << "  wrote " << f << "\n";
    for (const auto& a : r.assertions) {
        os << "  [" << (a.passed ? "pass" : "FAIL") << "] " << a.name
           << ": " << a.detail << " (measured " << format_double(a.measured)
           << ", bound " << format_double(a.bound) << ")\n";
    }
    if (r.has_fit)
        os << "  regime: " << r.fit.regime
           << " rate: " << format_double(r.fit.rate)
           << " r2: " << format_double(r.fit.r2) << "\n";
    return os.str();
}

}  // namespace igac
