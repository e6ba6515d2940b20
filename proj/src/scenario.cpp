#include "igac/scenario.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "igac/catalog.hpp"
#include "igac/errors.hpp"

namespace igac {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct Entry {
    std::string value;
    int line = 0;
};
using Section = std::map<std::string, Entry>;

const std::set<std::string>& known_sections() {
    static const std::set<std::string> s = {
        "scenario", "model", "geodesic", "complexity", "compare",
        "expect", "metric_check", "ratios", "mre", "output"};
    return s;
}

const std::set<std::string>& known_kinds() {
    static const std::set<std::string> s = {
        "metric_check", "geodesic_ivp", "geodesic_bvp",
        "complexity_trace", "ratio_table", "mre_update"};
    return s;
}

std::map<std::string, Section> tokenize(const std::string& text) {
    std::map<std::string, Section> out;
    std::istringstream in(text);
    std::string line;
    std::string current;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("unterminated section header", lineno);
            std::string name = trim(line.substr(1, line.size() - 2));
            if (!known_sections().count(name))
                throw ParseError("unknown section [" + name + "]", lineno);
            if (out.count(name))
                throw ParseError("section [" + name + "] appears twice",
                                 lineno);
            out[name] = {};
            current = name;
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected key = value", lineno);
        if (current.empty())
            throw ParseError("key outside any section", lineno);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("empty key", lineno);
        if (out[current].count(key))
            throw ParseError("duplicate key '" + key + "'", lineno);
        out[current][key] = {value, lineno};
    }
    return out;
}

double to_double(const Entry& e, const std::string& key) {
    const std::string v = trim(e.value);
    if (v.empty())
        throw ParseError("empty value for '" + key + "'", e.line);
    char* end = nullptr;
    double d = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || !std::isfinite(d))
        throw ParseError("'" + key + "' is not a number: " + v, e.line);
    return d;
}

int to_int(const Entry& e, const std::string& key) {
    double d = to_double(e, key);
    double r = std::round(d);
    if (std::abs(d - r) > 1e-9)
        throw ParseError("'" + key + "' must be an integer", e.line);
    return static_cast<int>(r);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(v);
    while (std::getline(in, item, ',')) parts.push_back(trim(item));
    if (!v.empty() && v.back() == ',') parts.push_back("");
    return parts;
}

std::vector<double> to_doubles(const Entry& e, const std::string& key) {
    std::vector<double> out;
    for (const std::string& p : split_list(e.value)) {
        if (p.empty())
            throw ParseError("empty item in list '" + key + "'", e.line);
        Entry item{p, e.line};
        out.push_back(to_double(item, key));
    }
    if (out.empty())
        throw ParseError("empty value for '" + key + "'", e.line);
    return out;
}

std::vector<std::string> to_strings(const Entry& e, const std::string& key) {
    std::vector<std::string> out;
    for (const std::string& p : split_list(e.value)) {
        if (p.empty())
            throw ParseError("empty item in list '" + key + "'", e.line);
        out.push_back(p);
    }
    return out;
}

// consume-and-complain wrapper so typos in keys do not pass silently
class Fields {
 public:
    Fields(const std::string& name, const std::map<std::string, Section>& all)
        : name_(name) {
        auto it = all.find(name);
        sec_ = it == all.end() ? nullptr : &it->second;
    }

    bool present() const { return sec_ != nullptr; }
    bool has(const std::string& key) const {
        return sec_ && sec_->count(key);
    }

    const Entry& get(const std::string& key) {
        used_.insert(key);
        return sec_->at(key);
    }

    std::string str(const std::string& key, const std::string& fallback = "") {
        if (!has(key)) return fallback;
        return trim(get(key).value);
    }
    double num(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        return to_double(get(key), key);
    }
    int integer(const std::string& key, int fallback) {
        if (!has(key)) return fallback;
        return to_int(get(key), key);
    }
    std::vector<double> nums(const std::string& key) {
        return to_doubles(get(key), key);
    }
    std::vector<std::string> strs(const std::string& key) {
        return to_strings(get(key), key);
    }

    // remaining numeric keys, for model parameters and compare constants
    std::map<std::string, double> leftovers_as_params() {
        std::map<std::string, double> out;
        if (!sec_) return out;
        for (const auto& [k, e] : *sec_) {
            if (used_.count(k)) continue;
            out[k] = to_double(e, k);
            used_.insert(k);
        }
        return out;
    }

    void finish() const {
        if (!sec_) return;
        for (const auto& [k, e] : *sec_)
            if (!used_.count(k))
                throw ParseError("unknown key '" + k + "' in [" + name_ + "]",
                                 e.line);
    }

 private:
    std::string name_;
    const Section* sec_ = nullptr;
    std::set<std::string> used_;
};

void require(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}

Model build_model_checked(const Scenario& sc) {
    try {
        return build(sc.model_name, sc.model_params);
    } catch (const ParamOutOfRange& e) {
        throw ValidationError(e.what());
    }
}

void check_point(const Model& m, const std::vector<double>& th,
                 const std::string& key) {
    require(static_cast<int>(th.size()) == m.dim,
            "'" + key + "' has " + std::to_string(th.size()) +
                " entries; model " + m.name + " has dimension " +
                std::to_string(m.dim));
    Eigen::VectorXd v =
        Eigen::Map<const Eigen::VectorXd>(th.data(), th.size());
    require(m.domain.contains(v),
            "'" + key + "' lies outside the domain of model " + m.name);
}

bool safe_id(const std::string& id) {
    if (id.empty()) return false;
    for (char c : id)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' &&
            c != '-')
            return false;
    return true;
}

}  // namespace

std::vector<double> GridSpec::points() const {
    std::vector<double> out;
    long n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    out.reserve(n + 1);
    for (long i = 0; i <= n; ++i) out.push_back(lo + i * step);
    return out;
}

GridSpec parse_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(trim(text));
    while (std::getline(in, item, ':')) parts.push_back(trim(item));
    require(parts.size() == 3,
            "grid must look like a:b:step, got '" + text + "'");
    GridSpec g;
    double* slots[3] = {&g.lo, &g.hi, &g.step};
    for (int i = 0; i < 3; ++i) {
        char* end = nullptr;
        *slots[i] = std::strtod(parts[i].c_str(), &end);
        require(end == parts[i].c_str() + parts[i].size() &&
                    std::isfinite(*slots[i]),
                "grid component '" + parts[i] + "' is not a number");
    }
    require(g.step > 0.0, "grid step must be positive");
    require(g.hi >= g.lo, "grid end must not precede its start");
    return g;
}

std::function<double(double)> ratio_family_fn(const std::string& family) {
    if (family == "bivariate_strong") return ratio_bivariate_strong;
    if (family == "trivariate_weak") return ratio_trivariate_weak;
    if (family == "trivariate_mildly_weak") return ratio_trivariate_mildly_weak;
    if (family == "trivariate_strong") return ratio_trivariate_strong;
    if (family == "ratio_3v2") return ratio_3v2;
    if (family == "f_micro") return f_micro;
    if (family == "scattering_igc_ratio") return scattering_igc_ratio;
    if (family == "scattering_ige_shift") return scattering_ige_shift;
    throw ValidationError("unknown ratio family '" + family + "'");
}

std::function<double(double)> closed_form_op(
    const std::string& op, const std::map<std::string, double>& params) {
    auto bind = [&](std::initializer_list<const char*> keys)
        -> std::map<std::string, double> {
        std::map<std::string, double> got;
        for (const char* k : keys) {
            auto it = params.find(k);
            if (it == params.end())
                throw ValidationError(op + ": missing constant '" +
                                      std::string(k) + "'");
            got[k] = it->second;
        }
        for (const auto& [k, v] : params)
            if (!got.count(k))
                throw ValidationError(op + ": unknown constant '" + k + "'");
        return got;
    };
    auto as_int = [&](double v, const char* k) {
        double r = std::round(v);
        if (std::abs(v - r) > 1e-9)
            throw ValidationError(op + ": constant '" + std::string(k) +
                                  "' must be an integer");
        return static_cast<int>(r);
    };

    if (op == "bivariate_igc_closed") {
        auto p = bind({"rho", "sigma0", "a1"});
        return [p](double tau) {
            return bivariate_igc_closed(tau, p.at("rho"), p.at("sigma0"),
                                        p.at("a1"));
        };
    }
    if (op == "trivariate_igc_closed") {
        auto p = bind({"k", "rho", "sigma0", "a1"});
        int k = as_int(p.at("k"), "k");
        return [p, k](double tau) {
            return trivariate_igc_closed(k, tau, p.at("rho"), p.at("sigma0"),
                                         p.at("a1"));
        };
    }
    if (op == "micro_igc_closed") {
        auto p = bind({"rho", "a", "sigma0"});
        return [p](double tau) {
            return micro_igc_closed(tau, p.at("rho"), p.at("a"),
                                    p.at("sigma0"));
        };
    }
    if (op == "gauss_igc_closed_2du") {
        auto p = bind({"mu0", "sigma0", "lambda_plus"});
        return [p](double tau) {
            return gauss_igc_closed_2du(tau, p.at("mu0"), p.at("sigma0"),
                                        p.at("lambda_plus"));
        };
    }
    if (op == "gauss_igc_closed_2dc") {
        auto p = bind({"mu0", "sigma0", "lambda_plus", "rho"});
        return [p](double tau) {
            return gauss_igc_closed_2dc(tau, p.at("mu0"), p.at("sigma0"),
                                        p.at("lambda_plus"), p.at("rho"));
        };
    }
    if (op == "gauss_ige_closed_3du") {
        auto p = bind({"lambda_prime_plus"});
        return [p](double tau) {
            return gauss_ige_closed_3du(tau, p.at("lambda_prime_plus"));
        };
    }
    if (op == "gauss_ige_closed_2du") {
        auto p = bind({"lambda_prime_plus"});
        return [p](double tau) {
            return gauss_ige_closed_2du(tau, p.at("lambda_prime_plus"));
        };
    }
    if (op == "gauss_ige_closed_2dc") {
        auto p = bind({"sigma0", "lambda_plus"});
        return [p](double tau) {
            return gauss_ige_closed_2dc(tau, p.at("sigma0"),
                                        p.at("lambda_plus"));
        };
    }
    if (op == "scattering_igc_closed") {
        auto p = bind({"rho", "lambda"});
        return [p](double tau) {
            return scattering_igc_closed(tau, p.at("rho"), p.at("lambda"));
        };
    }
    if (op == "scattering_ige_closed") {
        auto p = bind({"rho", "lambda"});
        return [p](double tau) {
            return scattering_ige_closed(tau, p.at("rho"), p.at("lambda"));
        };
    }
    if (op == "embedded_ige_closed") {
        auto p = bind({"l", "lambda", "xi", "rho"});
        int l = as_int(p.at("l"), "l");
        return [p, l](double tau) {
            return embedded_ige_closed(tau, l, p.at("lambda"), p.at("xi"),
                                       p.at("rho"));
        };
    }
    if (op == "iho_igc_closed") {
        auto p = bind({"l", "amp", "xi", "omega"});
        int l = as_int(p.at("l"), "l");
        return [p, l](double tau) {
            return iho_igc_closed(tau, l, p.at("amp"), p.at("xi"),
                                  p.at("omega"));
        };
    }
    if (op == "iho_ige_closed") {
        auto p = bind({"omega"});
        return [p](double tau) { return iho_ige_closed(tau, p.at("omega")); };
    }
    throw ValidationError("unknown closed form op '" + op + "'");
}

Scenario parse_scenario(const std::string& text,
                        const std::string& source_path) {
    auto sections = tokenize(text);
    Scenario sc;
    sc.source_path = source_path;

    Fields scen("scenario", sections);
    require(scen.present(), "missing [scenario] section");
    sc.id = scen.str("id");
    sc.kind = scen.str("kind");
    scen.finish();
    require(safe_id(sc.id),
            "scenario id must be nonempty, made of letters, digits, '-', '_'");
    require(known_kinds().count(sc.kind) > 0,
            "unknown kind '" + sc.kind + "'");

    const bool wants_model = sc.kind == "metric_check" ||
                             sc.kind == "geodesic_ivp" ||
                             sc.kind == "geodesic_bvp" ||
                             sc.kind == "complexity_trace";
    const bool wants_geodesic = sc.kind == "geodesic_ivp" ||
                                sc.kind == "geodesic_bvp" ||
                                sc.kind == "complexity_trace";

    for (const char* name : {"model", "geodesic", "complexity", "compare",
                             "metric_check", "ratios", "mre"}) {
        bool applies =
            (std::string(name) == "model" && wants_model) ||
            (std::string(name) == "geodesic" && wants_geodesic) ||
            (std::string(name) == "complexity" &&
             sc.kind == "complexity_trace") ||
            (std::string(name) == "compare" &&
             sc.kind == "complexity_trace") ||
            (std::string(name) == "metric_check" &&
             sc.kind == "metric_check") ||
            (std::string(name) == "ratios" && sc.kind == "ratio_table") ||
            (std::string(name) == "mre" && sc.kind == "mre_update");
        if (!applies && sections.count(name))
            throw ValidationError("section [" + std::string(name) +
                                  "] does not apply to kind '" + sc.kind +
                                  "'");
    }

    Fields model("model", sections);
    if (wants_model) {
        require(model.present(), "kind '" + sc.kind +
                                     "' needs a [model] section");
        sc.model_name = model.str("name");
        require(!sc.model_name.empty(), "[model] needs a 'name'");
        sc.model_params = model.leftovers_as_params();
        model.finish();
    }

    Fields geo("geodesic", sections);
    if (wants_geodesic) {
        require(geo.present(), "kind '" + sc.kind +
                                   "' needs a [geodesic] section");
        require(geo.has("theta0"), "[geodesic] needs 'theta0'");
        sc.theta0 = geo.nums("theta0");
        sc.tol = geo.num("tol", 1e-10);
        require(sc.tol > 0.0, "'tol' must be positive");
        sc.samples = geo.integer("samples", 200);
        require(sc.samples >= 2, "'samples' must be at least 2");
        if (sc.kind == "geodesic_bvp") {
            require(geo.has("theta1"), "[geodesic] needs 'theta1' for a"
                                       " boundary value run");
            sc.theta1 = geo.nums("theta1");
            sc.span = geo.num("span", 0.0);
            require(sc.span > 0.0, "[geodesic] needs a positive 'span'");
            if (geo.has("v0")) sc.v0 = geo.nums("v0");  // optional seed
        } else {
            require(geo.has("v0"),
                    "[geodesic] needs 'v0' for kind '" + sc.kind + "'");
            sc.v0 = geo.nums("v0");
            require(geo.has("tau_max"), "[geodesic] needs 'tau_max'");
            sc.tau_max = geo.num("tau_max", 0.0);
            sc.tau_min =
                geo.num("tau_min", sc.kind == "complexity_trace" ? 0.5 : 0.0);
            require(sc.tau_max > sc.tau_min,
                    "'tau_max' must exceed 'tau_min'");
            if (sc.kind == "complexity_trace")
                require(sc.tau_min > 0.0, "'tau_min' must be positive for a"
                                          " complexity trace");
            else
                require(sc.tau_min >= 0.0, "'tau_min' must be nonnegative");
        }
        geo.finish();
    }

    Fields cx("complexity", sections);
    if (sc.kind == "complexity_trace" && cx.present()) {
        sc.s0 = cx.num("s0", 0.0);
        require(sc.s0 >= 0.0, "'s0' must be nonnegative");
        sc.tail = cx.num("tail", 0.5);
        require(sc.tail > 0.0 && sc.tail <= 1.0,
                "'tail' must lie in (0, 1]");
        sc.quantity = cx.str("quantity", "ige");
        require(sc.quantity == "ige" || sc.quantity == "igc" ||
                    sc.quantity == "volume",
                "'quantity' must be ige, igc or volume");
        cx.finish();
    }

    Fields cmp("compare", sections);
    if (sc.kind == "complexity_trace" && cmp.present()) {
        sc.compare.op = cmp.str("op");
        require(!sc.compare.op.empty(), "[compare] needs an 'op'");
        sc.compare.quantity = cmp.str("quantity", "igc");
        require(sc.compare.quantity == "ige" ||
                    sc.compare.quantity == "igc" ||
                    sc.compare.quantity == "volume",
                "[compare] 'quantity' must be ige, igc or volume");
        if (cmp.has("tail_delta_max")) {
            sc.compare.tail_delta_max = cmp.num("tail_delta_max", 0.0);
            sc.compare.has_tail_delta = true;
            require(sc.compare.tail_delta_max > 0.0,
                    "'tail_delta_max' must be positive");
        }
        sc.compare.params = cmp.leftovers_as_params();
        cmp.finish();
        // binds the op now so bad names and constants fail at parse time
        auto f = closed_form_op(sc.compare.op, sc.compare.params);
        try {
            (void)f(sc.tau_max);
        } catch (const ParamOutOfRange& e) {
            throw ValidationError(e.what());
        }
    }

    Fields want("expect", sections);
    if (want.present()) {
        if (want.has("regime")) {
            sc.expect_regime = want.str("regime");
            sc.has_expect_regime = true;
            require(sc.expect_regime == "linear" ||
                        sc.expect_regime == "logarithmic" ||
                        sc.expect_regime == "exponential" ||
                        sc.expect_regime == "power" ||
                        sc.expect_regime == "ambiguous",
                    "unknown expected regime '" + sc.expect_regime + "'");
        }
        if (want.has("r2_min")) {
            sc.r2_min = want.num("r2_min", 0.0);
            sc.has_r2_min = true;
            require(sc.r2_min >= 0.0 && sc.r2_min <= 1.0,
                    "'r2_min' must lie in [0, 1]");
        }
        if (want.has("rate")) {
            sc.expect_rate = want.num("rate", 0.0);
            sc.has_expect_rate = true;
            sc.rate_tol = want.num("rate_tol", 0.0);
            require(sc.rate_tol > 0.0,
                    "'rate' needs a positive 'rate_tol'");
        } else {
            require(!want.has("rate_tol"), "'rate_tol' without 'rate'");
        }
        if (want.has("v0")) {
            require(sc.kind == "geodesic_bvp",
                    "[expect] v0 only applies to geodesic_bvp");
            sc.expect_v0 = want.nums("v0");
            sc.has_expect_v0 = true;
            sc.v0_tol = want.num("v0_tol", 1e-6);
            require(sc.v0_tol > 0.0, "'v0_tol' must be positive");
        } else {
            require(!want.has("v0_tol"), "'v0_tol' without 'v0'");
        }
        if (want.has("beta")) {
            require(sc.kind == "mre_update",
                    "[expect] beta only applies to mre_update");
            sc.expect_beta = want.num("beta", 0.0);
            sc.has_expect_beta = true;
            sc.beta_tol = want.num("beta_tol", 1e-9);
            require(sc.beta_tol > 0.0, "'beta_tol' must be positive");
        } else {
            require(!want.has("beta_tol"), "'beta_tol' without 'beta'");
        }
        want.finish();
        if (sc.has_expect_regime || sc.has_r2_min || sc.has_expect_rate)
            require(sc.kind == "complexity_trace",
                    "regime expectations only apply to complexity_trace");
    }

    Fields mc("metric_check", sections);
    if (sc.kind == "metric_check") {
        sc.mc_points = mc.integer("points", 20);
        require(sc.mc_points >= 1 && sc.mc_points <= 10000,
                "'points' must lie in [1, 10000]");
        sc.mc_seed = static_cast<unsigned long>(mc.num("seed", 12345.0));
        sc.mc_tol = mc.num("tol", 1e-6);
        require(sc.mc_tol > 0.0, "'tol' must be positive");
        if (mc.has("theta")) sc.mc_theta = mc.nums("theta");
        mc.finish();
    }

    Fields rat("ratios", sections);
    if (sc.kind == "ratio_table") {
        require(rat.present(), "kind 'ratio_table' needs a [ratios] section");
        sc.ratio_family = rat.str("family");
        require(!sc.ratio_family.empty(), "[ratios] needs a 'family'");
        require(rat.has("grid"), "[ratios] needs a 'grid'");
        GridSpec g = parse_grid(rat.str("grid"));
        sc.grid_lo = g.lo;
        sc.grid_hi = g.hi;
        sc.grid_step = g.step;
        rat.finish();
        auto f = ratio_family_fn(sc.ratio_family);
        try {
            (void)f(g.lo);
            (void)f(g.hi);
        } catch (const ParamOutOfRange& e) {
            throw ValidationError(e.what());
        }
    }

    Fields mre("mre", sections);
    if (sc.kind == "mre_update") {
        require(mre.present(), "kind 'mre_update' needs an [mre] section");
        sc.mre_grid_path = mre.str("grid");
        require(!sc.mre_grid_path.empty(), "[mre] needs a 'grid' CSV path");
        if (mre.has("observations")) sc.observations = mre.strs("observations");
        if (mre.has("moment_poly")) {
            sc.moment_poly = mre.nums("moment_poly");
            sc.has_moment = true;
            require(mre.has("target"),
                    "'moment_poly' needs a 'target'");
            sc.moment_target = mre.num("target", 0.0);
        } else {
            require(!mre.has("target"), "'target' without 'moment_poly'");
        }
        mre.finish();
    }

    Fields outp("output", sections);
    if (outp.present()) {
        sc.out_dir = outp.str("dir");
        outp.finish();
    }

    // catalog-level validation: model exists, parameters inside their
    // domains, initial data dimensioned and inside the manifold
    if (wants_model) {
        Model m = build_model_checked(sc);
        if (!sc.theta0.empty()) check_point(m, sc.theta0, "theta0");
        if (!sc.theta1.empty()) check_point(m, sc.theta1, "theta1");
        if (!sc.v0.empty())
            require(static_cast<int>(sc.v0.size()) == m.dim,
                    "'v0' has " + std::to_string(sc.v0.size()) +
                        " entries; model " + m.name + " has dimension " +
                        std::to_string(m.dim));
        if (!sc.expect_v0.empty())
            require(static_cast<int>(sc.expect_v0.size()) == m.dim,
                    "[expect] v0 has " + std::to_string(sc.expect_v0.size()) +
                        " entries; model " + m.name + " has dimension " +
                        std::to_string(m.dim));
        if (!sc.mc_theta.empty()) check_point(m, sc.mc_theta, "theta");
    }

    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read scenario file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario(buf.str(), path);
    } catch (ParseError& e) {
        throw ParseError(path + ": " + e.what(), e.line_number);
    } catch (ValidationError& e) {
        throw ValidationError(path + ": " + std::string(e.what()));
    }
}

}  // namespace igac
