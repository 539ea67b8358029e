#pragma once

#include "dirimor/gap.hpp"
#include "dirimor/norms.hpp"
#include "dirimor/operators.hpp"
#include "dirimor/report.hpp"
#include "dirimor/spec.hpp"

#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace dirimor {

/** \brief Everything a verification run depends on; defaults reproduce the acceptance runs. */
struct RunConfig {
    QuadratureConfig quad;
    ScanGrid grid;
    CGrid cgrid;
    double p = 0.5;
    double lambda = 0.4;
    std::uint64_t seed = 20240601;
    std::vector<std::string> suite;  ///< function specs; empty selects the default suite
    std::vector<std::string> tasks{"all"};
    std::string out;
    bool timing = true;  ///< emit runtime_ms; off makes documents byte-identical across runs

    // thresholds
    double ratio_bound = 50.0;
    double ratio_drift = 2.0;
    double growth_drift = 1.5;
    double lune_band = 3.0;
    double family_ratio = 10.0;
    double slope_threshold = 0.1;
    double correlation_min = 0.9;
    double limit_tolerance = 0.01;
    double ibp_poly_tol = 1e-8;
    double ibp_pair_tol = 1e-6;
    double pzh_band = 5.0;
    int ibp_samples = 100;
    int pzh_random_triples = 10;
    double boundary_max_band = 4096.0;  ///< boundary double integrals skip wider-band functions

    int workers() const { return grid.workers; }
};

/** \brief Default suite for params (p, lambda); kernel exponents follow s = p(1-lambda)/2. */
inline std::vector<std::string> default_suite(const SpaceParams& sp) {
    const std::string s = detail::fmt_num(sp.half_growth());
    return {"taylor:1",
            "taylor:0,1",
            "taylor:0,0,1",
            "taylor:1,2,0,1",
            "kernel:c=0.5,s=" + s,
            "kernel:c=0.9,s=" + s,
            "kernel:c=0.99,s=" + s,
            "fpl:p=" + detail::fmt_num(sp.p) + ",lambda=" + detail::fmt_num(sp.lambda),
            "gap:q=0.2,K=20",
            "gap:q=0.5,K=20",
            "log1"};
}

/** \brief Names accepted by named_quantity. */
inline const std::vector<std::string>& quantity_names() {
    static const std::vector<std::string> names = {"dp",     "dm-translate", "dm-translate-squared", "dm-box",
                                                   "qp",     "qplog",        "morrey",               "growth",
                                                   "hinf",   "boundary",     "gpcm"};
    return names;
}

/**
 * \brief Computes one of the norm-module quantities by name.
 *
 * `s` is the weight exponent of "morrey" and defaults to p(1-lambda)/2.
 */
inline NormReport named_quantity(const std::string& name, const AnalyticFunction& f, const SpaceParams& sp,
                                 const ScanGrid& grid, const QuadratureConfig& q, std::optional<double> s = {}) {
    if (name == "dp") return dirichlet_norm(f, sp.p, q);
    if (name == "dm-translate") return dm_norm_translate(f, sp, grid, q);
    if (name == "dm-translate-squared") return dm_translate_squared(f, sp, grid, q);
    if (name == "dm-box") return dm_seminorm_box(f, sp, grid, q);
    if (name == "qp") return qp_quantity(f, sp.p, grid, q);
    if (name == "qplog") return qp_log_quantity(f, sp.p, grid, q);
    if (name == "morrey") return general_morrey_norm(f, sp.p, s.value_or(sp.half_growth()), grid, q);
    if (name == "growth") return growth_envelope(f, sp, grid);
    if (name == "hinf") return hinf_sup(f, grid);
    if (name == "boundary") return boundary_double_seminorm(f, sp, grid, q);
    if (name == "gpcm") return gpcm_quantity(f, sp.p, grid, q);
    throw std::invalid_argument("unknown quantity: " + name);
}

// ---------------------------------------------------------------------------
// Config file handling

/** \brief Applies the keys of a JSON object onto a config; unknown keys are rejected. */
inline void apply_config_json(RunConfig& c, const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    for (const auto& [key, v] : j.items()) {
        if (key == "depth") c.quad.depth = v.get<int>();
        else if (key == "radial_order") c.quad.radial_order = v.get<int>();
        else if (key == "angular_min") c.quad.angular_min = v.get<int>();
        else if (key == "panel_order") c.quad.panel_order = v.get<int>();
        else if (key == "oversample") c.quad.oversample = v.get<double>();
        else if (key == "box_min_levels") c.quad.box_min_levels = v.get<int>();
        else if (key == "arc_levels") c.quad.arc_levels = v.get<int>();
        else if (key == "focus_levels") c.quad.focus_levels = v.get<int>();
        else if (key == "lune_end_levels") c.quad.lune_end_levels = v.get<int>();
        else if (key == "max_depth") c.quad.max_depth = v.get<int>();
        else if (key == "panel_ratio") c.quad.panel_ratio = v.get<double>();
        else if (key == "tail_ratio_max") c.quad.tail_ratio_max = v.get<double>();
        else if (key == "tail") {
            const auto t = v.get<std::string>();
            if (t == "extrapolate") c.quad.tail = TailPolicy::Extrapolate;
            else if (t == "omit") c.quad.tail = TailPolicy::Omit;
            else throw std::invalid_argument("tail must be 'extrapolate' or 'omit'");
        }
        else if (key == "K_a") c.grid.K_a = v.get<int>();
        else if (key == "a_angles") c.grid.a_angles = v.get<int>();
        else if (key == "K_I") c.grid.K_I = v.get<int>();
        else if (key == "arc_centers") c.grid.arc_centers = v.get<int>();
        else if (key == "K_w") c.grid.K_w = v.get<int>();
        else if (key == "w_angles") c.grid.w_angles = v.get<int>();
        else if (key == "hinf_angles") c.grid.hinf_angles = v.get<int>();
        else if (key == "workers") c.grid.workers = v.get<int>();
        else if (key == "K_c") c.cgrid.K = v.get<int>();
        else if (key == "rotations") c.cgrid.rotations = v.get<int>();
        else if (key == "p") c.p = v.get<double>();
        else if (key == "lambda") c.lambda = v.get<double>();
        else if (key == "seed") c.seed = v.get<std::uint64_t>();
        else if (key == "suite") c.suite = v.get<std::vector<std::string>>();
        else if (key == "tasks") c.tasks = v.is_string() ? std::vector<std::string>{v.get<std::string>()} : v.get<std::vector<std::string>>();
        else if (key == "out") c.out = v.get<std::string>();
        else if (key == "timing") c.timing = v.get<bool>();
        else if (key == "ratio_bound") c.ratio_bound = v.get<double>();
        else if (key == "ratio_drift") c.ratio_drift = v.get<double>();
        else if (key == "growth_drift") c.growth_drift = v.get<double>();
        else if (key == "lune_band") c.lune_band = v.get<double>();
        else if (key == "family_ratio") c.family_ratio = v.get<double>();
        else if (key == "slope_threshold") c.slope_threshold = v.get<double>();
        else if (key == "correlation_min") c.correlation_min = v.get<double>();
        else if (key == "limit_tolerance") c.limit_tolerance = v.get<double>();
        else if (key == "ibp_poly_tol") c.ibp_poly_tol = v.get<double>();
        else if (key == "ibp_pair_tol") c.ibp_pair_tol = v.get<double>();
        else if (key == "pzh_band") c.pzh_band = v.get<double>();
        else if (key == "ibp_samples") c.ibp_samples = v.get<int>();
        else if (key == "pzh_random_triples") c.pzh_random_triples = v.get<int>();
        else if (key == "boundary_max_band") c.boundary_max_band = v.get<double>();
        else throw std::invalid_argument("unknown config key: " + key);
    }
}

inline RunConfig load_config_file(const std::string& path, RunConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j;
    in >> j;
    apply_config_json(base, j);
    return base;
}

// ---------------------------------------------------------------------------
// Tasks

/** \brief Outcome of one verification task. */
struct TaskResult {
    std::string id;
    std::string statement;
    ojson inputs = ojson::object();
    ojson measured = ojson::array();
    ojson thresholds = ojson::object();
    bool pass = false;
    double runtime_ms = 0.0;
    std::string error;
};

/** \brief Shared, memoized computations so tasks reuse families and scans. */
class VerifyContext {
public:
    explicit VerifyContext(RunConfig cfg) : cfg_(std::move(cfg)) {
        if (cfg_.suite.empty()) cfg_.suite = default_suite(params());
    }
    const RunConfig& config() const { return cfg_; }
    SpaceParams params() const { return SpaceParams(cfg_.p, cfg_.lambda); }

    const TestFamily& family(const SpaceParams& sp) {
        const std::string key = detail::fmt_num(sp.p) + "/" + detail::fmt_num(sp.lambda);
        return memo(families_, key, [&] { return make_test_family(sp, cfg_.cgrid, cfg_.grid, cfg_.quad); });
    }

private:
    template <class T, class Make>
    const T& memo(std::map<std::string, std::shared_future<T>>& m, const std::string& key, Make make) {
        std::shared_future<T> fut;
        std::promise<T> prom;
        bool mine = false;
        {
            std::lock_guard<std::mutex> lock(mtx_);
            auto it = m.find(key);
            if (it == m.end()) {
                fut = prom.get_future().share();
                m.emplace(key, fut);
                mine = true;
            } else {
                fut = it->second;
            }
        }
        if (mine) {
            try {
                prom.set_value(make());
            } catch (...) {
                prom.set_exception(std::current_exception());
            }
        }
        return fut.get();
    }

    RunConfig cfg_;
    std::mutex mtx_;
    std::map<std::string, std::shared_future<TestFamily>> families_;
};

/** \brief A verification task: an id, the statement it checks and its procedure. */
struct VerificationTask {
    std::string id;
    std::string statement;
    std::function<void(VerifyContext&, TaskResult&)> run;
};

namespace detail {

inline ojson measure(const std::string& name, double value) {
    ojson o;
    o["name"] = name;
    o["value"] = json_number(value);
    return o;
}

inline double drift(double a, double b) {
    if (a == b) return 1.0;
    if (!(a > 0.0) || !(b > 0.0)) return std::numeric_limits<double>::infinity();
    return std::max(a / b, b / a);
}

inline bool is_constant_spec(const AnalyticFunction& f) { return f.is_constant(); }

inline void task_v1(VerifyContext& ctx, TaskResult& r) {
    const auto& c = ctx.config();
    const SpaceParams sp = ctx.params();
    r.inputs = {{"p", sp.p}, {"lambda", sp.lambda}, {"suite", c.suite}};
    r.thresholds = {{"ratio_min", 1.0 / c.ratio_bound}, {"ratio_max", c.ratio_bound}, {"drift_max", c.ratio_drift}};
    bool pass = true;
    for (const auto& spec : c.suite) {
        const AnalyticFunction f = parse_function_spec(spec);
        ojson m;
        m["function"] = spec;
        if (f.is_constant()) {
            m["skipped"] = "constant: both quantities vanish";
            r.measured.push_back(m);
            continue;
        }
        const NormReport b0 = dm_seminorm_box(f, sp, c.grid, c.quad);
        const NormReport t0 = dm_translate_squared(f, sp, c.grid, c.quad);
        const NormReport b1 = dm_seminorm_box(f, sp, c.grid.refined(), c.quad.refined());
        const NormReport t1 = dm_translate_squared(f, sp, c.grid.refined(), c.quad.refined());
        const double r0 = b0.value / t0.value, r1 = b1.value / t1.value;
        const double d = drift(r0, r1);
        const bool ok = r0 >= 1.0 / c.ratio_bound && r0 <= c.ratio_bound && r1 >= 1.0 / c.ratio_bound &&
                        r1 <= c.ratio_bound && d < c.ratio_drift;
        m["box"] = to_json(b0);
        m["translate_squared"] = to_json(t0);
        m["ratio"] = json_number(r0);
        m["ratio_refined"] = json_number(r1);
        m["drift"] = json_number(d);
        m["pass"] = ok;
        r.measured.push_back(m);
        pass = pass && ok;
    }
    r.pass = pass;
}

inline void task_v2(VerifyContext& ctx, TaskResult& r) {
    const auto& c = ctx.config();
    const SpaceParams sp = ctx.params();
    r.inputs = {{"p", sp.p}, {"lambda", sp.lambda}, {"suite", c.suite}};
    r.thresholds = {{"drift_max", c.growth_drift}};
    double C0 = 0.0, C1 = 0.0;
    bool pass = true;
    for (const auto& spec : c.suite) {
        const AnalyticFunction f = parse_function_spec(spec);
        const NormReport g0 = growth_envelope(f, sp, c.grid);
        const NormReport n0 = dm_norm_translate(f, sp, c.grid, c.quad);
        const NormReport g1 = growth_envelope(f, sp, c.grid.refined());
        const NormReport n1 = dm_norm_translate(f, sp, c.grid.refined(), c.quad.refined());
        const double q0 = n0.value > 0.0 ? g0.value / n0.value : 0.0;
        const double q1 = n1.value > 0.0 ? g1.value / n1.value : 0.0;
        const double d = (q0 == 0.0 && q1 == 0.0) ? 1.0 : drift(q0, q1);
        C0 = std::max(C0, q0);
        C1 = std::max(C1, q1);
        const bool ok = std::isfinite(q0) && d < c.growth_drift;
        ojson m;
        m["function"] = spec;
        m["growth"] = json_number(g0.value);
        m["dm_norm"] = json_number(n0.value);
        m["ratio"] = json_number(q0);
        m["ratio_refined"] = json_number(q1);
        m["drift"] = json_number(d);
        m["pass"] = ok;
        r.measured.push_back(m);
        pass = pass && ok;
    }
    const double dC = drift(C0, C1);
    r.measured.push_back(measure("C_est", C0));
    r.measured.push_back(measure("C_est_refined", C1));
    r.measured.push_back(measure("C_est_drift", dC));
    r.pass = pass && dC < c.growth_drift;
}

inline void task_v3(VerifyContext& ctx, TaskResult& r) {
    const auto& c = ctx.config();
    const SpaceParams sp = ctx.params();
    const AnalyticFunction f = make_power_kernel(BoundaryPoint(0.0), sp.half_growth());
    r.inputs = {{"p", sp.p}, {"lambda", sp.lambda}, {"function", f.describe()}, {"h", "2^-1 .. 2^-12"}};
    r.thresholds = {{"band_around_median", c.lune_band}};
    std::vector<double> vals;
    ojson rows = ojson::array();
    for (int j = 1; j <= 12; ++j) {
        const double h = std::ldexp(1.0, -j);
        const Integral I = lune_quantity(f, sp, BoundaryPoint(0.0), h, c.quad);
        vals.push_back(I.value);
        rows.push_back({{"h", h}, {"value", json_number(I.value)}, {"error", json_number(I.error)}, {"flags", I.flags}});
    }
    std::vector<double> sorted = vals;
    std::sort(sorted.begin(), sorted.end());
    const double med = 0.5 * (sorted[(sorted.size() - 1) / 2] + sorted[sorted.size() / 2]);
    double worst = 1.0;
    for (double v : vals) worst = std::max(worst, drift(v, med));
    ojson m;
    m["lune_values"] = rows;
    m["median"] = json_number(med);
    m["max_factor_from_median"] = json_number(worst);
    r.measured.push_back(m);
    r.pass = worst <= c.lune_band;
}

inline void task_v4(VerifyContext& ctx, TaskResult& r) {
    const auto& c = ctx.config();
    const double p1 = 0.3, p2 = 0.6;
    r.inputs = {{"p1", p1}, {"p2", p2}, {"suite", c.suite}};
    r.thresholds = {{"violations", 0}};
    std::size_t total = 0;
    for (const auto& spec : c.suite) {
        const AnalyticFunction f = parse_function_spec(spec);
        const BoxScan s1 = scan_boxes(f, p1, c.grid, c.quad);
        const BoxScan s2 = scan_boxes(f, p2, c.grid, c.quad);
        std::size_t bad = 0;
        double worst = 0.0;
        for (std::size_t i = 0; i < s1.arcs.size(); ++i) {
            const double bound = std::pow(2.0 * s1.arcs[i].arc.length, p2 - p1) * s1.energy[i];
            if (s2.energy[i] > bound) ++bad;
            if (bound > 0.0) worst = std::max(worst, s2.energy[i] / bound);
        }
        total += bad;
        ojson m;
        m["function"] = spec;
        m["arcs"] = s1.arcs.size();
        m["violations"] = bad;
        m["max_lhs_over_rhs"] = json_number(worst);
        r.measured.push_back(m);
    }
    r.pass = total == 0;
}

inline void task_v5(VerifyContext& ctx, TaskResult& r) {
    const auto& c = ctx.config();
    const SpaceParams sp = ctx.params();
    r.inputs = {{"p", sp.p}, {"lambda", sp.lambda}, {"suite", c.suite}, {"boundary_max_band", c.boundary_max_band}};
    r.thresholds = {{"drift_max", c.ratio_drift}};
    bool pass = true;
    std::size_t used = 0;
    for (const auto& spec : c.suite) {
        const AnalyticFunction f = parse_function_spec(spec);
        ojson m;
        m["function"] = spec;
        if (f.is_constant()) {
            m["skipped"] = "constant: both quantities vanish";
        } else if (!f.has_boundary_eval()) {
            m["skipped"] = "no boundary evaluation";
        } else if (f.resolution().bandwidth(1.0) > c.boundary_max_band) {
            m["skipped"] = "boundary bandwidth above boundary_max_band";
        }
        if (m.contains("skipped")) {
            r.measured.push_back(m);
            continue;
        }
        ++used;
        const NormReport d0 = boundary_double_seminorm(f, sp, c.grid, c.quad);
        const NormReport b0 = dm_seminorm_box(f, sp, c.grid, c.quad);
        const NormReport d1 = boundary_double_seminorm(f, sp, c.grid.refined(), c.quad.refined());
        const NormReport b1 = dm_seminorm_box(f, sp, c.grid.refined(), c.quad.refined());
        const double r0 = d0.value / b0.value, r1 = d1.value / b1.value;
        const double d = drift(r0, r1);
        const bool ok = std::isfinite(r0) && d < c.ratio_drift;
        m["boundary"] = to_json(d0);
        m["box"] = json_number(b0.value);
        m["ratio"] = json_number(r0);
        m["ratio_refined"] = json_number(r1);
        m["drift"] = json_number(d);
        m["pass"] = ok;
        r.measured.push_back(m);
        pass = pass && ok;
    }
    r.pass = pass && used > 0;
}

/// Normalized two-kernel integrals on u = v along radii 1-2^-k; returns max/min.
inline double pzh_band(double r_, double s, double t, int K, const QuadratureConfig& q, ojson* rows) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int k = 0; k <= K; ++k) {
        const double rad = k == 0 ? 0.0 : 1.0 - std::ldexp(1.0, -k);
        const DiscPoint u(cplx(rad, 0.0));
        const double v = pzh_check(u, u, r_, s, t, q).value;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        if (rows) rows->push_back({{"k", k}, {"value", json_number(v)}});
    }
    return hi / lo;
}

inline void task_v6(VerifyContext& ctx, TaskResult& r) {
    const auto& c = ctx.config();
    const SpaceParams sp = ctx.params();
    r.inputs = {{"p", sp.p}, {"lambda", sp.lambda}, {"c_radii", "1-2^-k, k<=" + std::to_string(c.cgrid.K)},
                {"rotations", c.cgrid.rotations}};
    r.thresholds = {{"max_over_min", c.family_ratio}, {"abs_tail_slope", c.slope_threshold}, {"pzh_band", c.pzh_band}};
    const TestFamily& fam = ctx.family(sp);
    std::vector<CGrid::Point> pts;
    std::vector<double> norms;
    ojson rows = ojson::array();
    for (const auto& m : fam.members) {
        pts.push_back(m.at);
        norms.push_back(m.norm.value);
        rows.push_back({{"k", m.at.k}, {"rotation", m.at.rotation}, {"norm", json_number(m.norm.value)}});
    }
    const double slope = family_tail_slope(pts, norms, 5, true);
    const double ratio = fam.max_norm / fam.min_norm;
    r.measured.push_back({{"name", "family_norms"}, {"rows", rows}});
    r.measured.push_back(measure("K_est", fam.max_norm));
    r.measured.push_back(measure("min_norm", fam.min_norm));
    r.measured.push_back(measure("max_over_min", ratio));
    r.measured.push_back(measure("abs_tail_slope", slope));
    // the two-kernel integral behind the family's uniform bound
    ojson prow = ojson::array();
    const double band = pzh_band(2.0 * sp.p, sp.p, 2.0 + sp.growth(), c.cgrid.K, c.quad, &prow);
    r.measured.push_back({{"name", "pzh_family_parameters"}, {"r", 2.0 * sp.p}, {"s", sp.p},
                          {"t", 2.0 + sp.growth()}, {"rows", prow}, {"max_over_min", json_number(band)}});
    r.pass = ratio <= c.family_ratio && slope < c.slope_threshold && band <= c.pzh_band;
}

inline void task_v7(VerifyContext& ctx, TaskResult& r) {
    const auto& c = ctx.config();
    const SpaceParams sp = ctx.params();
    const AnalyticFunction gb = make_taylor({0.5, 0.5});
    const AnalyticFunction gl = make_log1();
    r.inputs = {{"p", sp.p}, {"lambda", sp.lambda}, {"bounded_symbol", gb.describe()}, {"unbounded_symbol", gl.describe()}};
    r.thresholds = {{"slope_threshold", c.slope_threshold}};
    const TestFamily& fam = ctx.family(sp);
    const RatioScanReport rb = ratio_scan(OperatorKind::Ig, gb, fam, c.grid, c.quad);
    const RatioScanReport rl = ratio_scan(OperatorKind::Ig, gl, fam, c.grid, c.quad);
    const NormReport hb = hinf_sup(gb, c.grid);
    r.measured.push_back({{"name", "ig_bounded"}, {"scan", to_json(rb)}, {"hinf", json_number(hb.value)},
                          {"max_ratio_over_hinf", json_number(rb.max_ratio / hb.value)}});
    r.measured.push_back({{"name", "ig_log"}, {"scan", to_json(rl)}});
    r.pass = !rb.unbounded && rl.unbounded && rl.slope > c.slope_threshold;
}

inline void task_v8(VerifyContext& ctx, TaskResult& r) {
    const auto& c = ctx.config();
    const double q = 0.3, p = 0.6;
    const SpaceParams sp(p, q / p);
    const AnalyticFunction g = remark_example(q);
    r.inputs = {{"p", p}, {"lambda", q / p}, {"q", q}, {"symbol", g.describe()}, {"depths", "4..12"}};
    r.thresholds = {{"slope_threshold", c.slope_threshold}, {"correlation_min", c.correlation_min}};
    const TestFamily& fam = ctx.family(sp);
    const RatioScanReport rs = ratio_scan(OperatorKind::Jg, g, fam, c.grid, c.quad);
    std::vector<double> js, vs;
    ojson rows = ojson::array();
    for (int j = 4; j <= 12; ++j) {
        QuadratureConfig qj = c.quad;
        qj.depth = j;
        qj.tail = TailPolicy::Omit;
        const NormReport n = qp_quantity(g, q, c.grid, qj);
        js.push_back(j);
        vs.push_back(n.value);
        rows.push_back({{"depth", j}, {"qp", json_number(n.value)}});
    }
    const double corr = correlation(js, vs);
    r.measured.push_back({{"name", "jg_scan"}, {"scan", to_json(rs)}});
    r.measured.push_back({{"name", "qp_by_depth"}, {"rows", rows}, {"correlation", json_number(corr)},
                          {"slope_per_level", json_number(least_squares_slope(js, vs))}});
    r.pass = !rs.unbounded && corr >= c.correlation_min;
}

inline void task_v9(VerifyContext& ctx, TaskResult& r) {
    const auto& c = ctx.config();
    const double q = 0.3, p = 0.6;
    const int K = 20;
    const GapCoefficients a = remark_coefficients(q);
    r.inputs = {{"q", q}, {"p", p}, {"K", K}, {"coefficients", a.label}};
    const double expected = 1.0 / (1.0 - std::exp2(-(p - q)));
    r.thresholds = {{"limit_relative_tolerance", c.limit_tolerance}, {"expected_limit", expected}};
    const BlockSums at_q = gap_block_sums(a, q, K);
    const BlockSums at_p = gap_block_sums(a, p, K);
    const double rel = std::fabs(at_p.limit - expected) / expected;
    r.measured.push_back({{"name", "blocks_at_q"}, {"sums", to_json(at_q)}});
    r.measured.push_back({{"name", "blocks_at_p"}, {"sums", to_json(at_p)}, {"limit_relative_error", json_number(rel)}});
    r.measured.push_back(measure("yamashita_limsup", yamashita_limsup(a, q, K)));
    r.pass = at_q.divergent && !at_p.divergent && rel <= c.limit_tolerance;
}

inline void task_v10(VerifyContext& ctx, TaskResult& r) {
    const auto& c = ctx.config();
    const SpaceParams sp = ctx.params();
    const auto pts = random_disc_points(static_cast<std::size_t>(c.ibp_samples), c.seed);
    r.inputs = {{"samples", c.ibp_samples}, {"seed", c.seed}, {"max_radius", 0.99}};
    r.thresholds = {{"polynomial", c.ibp_poly_tol}, {"kernel_log", c.ibp_pair_tol}};
    const std::vector<std::pair<std::string, std::string>> poly = {
        {"taylor:1,1", "taylor:0,1"}, {"taylor:1,2,0,1", "taylor:0,0,1"}, {"taylor:0,0,1", "taylor:1,2,0,1"},
        {"taylor:2,-1,0.5", "taylor:0.5,0.5"}};
    const std::string s = detail::fmt_num(sp.half_growth());
    const std::vector<std::pair<std::string, std::string>> pairs = {
        {"kernel:c=0.5,s=" + s, "log1"}, {"kernel:c=0.9,s=" + s, "log1"}, {"kernel:c=0.99,s=" + s, "log1"}};
    bool pass = true;
    for (const auto& [fs, gs] : poly) {
        const double res = ibp_residual(parse_function_spec(fs), parse_function_spec(gs), pts);
        const bool ok = res < c.ibp_poly_tol;
        r.measured.push_back({{"f", fs}, {"g", gs}, {"residual", json_number(res)}, {"pass", ok}});
        pass = pass && ok;
    }
    for (const auto& [fs, gs] : pairs) {
        const double res = ibp_residual(parse_function_spec(fs), parse_function_spec(gs), pts);
        const bool ok = res < c.ibp_pair_tol;
        r.measured.push_back({{"f", fs}, {"g", gs}, {"residual", json_number(res)}, {"pass", ok}});
        pass = pass && ok;
    }
    r.pass = pass;
}

}  // namespace detail

/** \brief The ten verification tasks in id order. */
inline const std::vector<VerificationTask>& verification_tasks() {
    static const std::vector<VerificationTask> tasks = {
        {"V1", "box quantity and squared translate quantity are comparable", detail::task_v1},
        {"V2", "point growth is bounded by the translate norm", detail::task_v2},
        {"V3", "the boundary kernel has lune quantities of order h^(p lambda)", detail::task_v3},
        {"V4", "box integrals with a larger weight exponent are dominated per arc", detail::task_v4},
        {"V5", "boundary double integral and box quantity are comparable", detail::task_v5},
        {"V6", "the power-kernel test family is uniformly bounded in norm", detail::task_v6},
        {"V7", "I_g is bounded for bounded g and unbounded for log(1/(1-z))", detail::task_v7},
        {"V8", "J_g with a lacunary symbol is bounded while the symbol leaves Q_q", detail::task_v8},
        {"V9", "the lacunary example separates W_p from Q_q", detail::task_v9},
        {"V10", "J_g f = M_g f - f(0) g(0) - I_g f", detail::task_v10},
    };
    return tasks;
}

inline TaskResult run_verification(const VerificationTask& task, VerifyContext& ctx) {
    TaskResult r;
    r.id = task.id;
    r.statement = task.statement;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        task.run(ctx, r);
    } catch (const std::exception& e) {
        r.pass = false;
        r.error = e.what();
    }
    r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

/** \brief Tasks selected by ids ("all" selects every task); unknown ids are rejected. */
inline std::vector<VerificationTask> select_tasks(const std::vector<std::string>& ids) {
    const auto& all = verification_tasks();
    std::vector<VerificationTask> out;
    for (const auto& t : all) {
        bool want = false;
        for (const auto& id : ids) want = want || id == "all" || id == t.id;
        if (want) out.push_back(t);
    }
    for (const auto& id : ids) {
        if (id == "all") continue;
        bool known = false;
        for (const auto& t : all) known = known || t.id == id;
        if (!known) throw std::invalid_argument("unknown task id: " + id);
    }
    return out;
}

/** \brief Runs the selected tasks in a worker pool and returns results in task-id order. */
inline std::vector<TaskResult> run_all(const RunConfig& cfg) {
    VerifyContext ctx(cfg);
    const auto tasks = select_tasks(cfg.tasks);
    std::vector<TaskResult> results(tasks.size());
    parallel_for(tasks.size(), cfg.workers(), [&](std::size_t i) { results[i] = run_verification(tasks[i], ctx); });
    return results;
}

inline ojson to_json(const TaskResult& r, bool timing) {
    ojson j;
    j["task_id"] = r.id;
    j["statement"] = r.statement;
    j["inputs"] = r.inputs;
    j["measured"] = r.measured;
    j["thresholds"] = r.thresholds;
    j["pass"] = r.pass;
    j["runtime_ms"] = timing ? std::round(r.runtime_ms) : 0.0;
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

inline ojson report_document(const std::vector<TaskResult>& results, bool timing) {
    ojson doc;
    bool all = true;
    ojson arr = ojson::array();
    for (const auto& r : results) {
        arr.push_back(to_json(r, timing));
        all = all && r.pass;
    }
    doc["tasks"] = arr;
    doc["pass"] = all;
    return doc;
}

inline std::string summary_table(const std::vector<TaskResult>& results, bool timing) {
    std::ostringstream os;
    os << std::left << std::setw(6) << "task" << std::setw(6) << "pass";
    if (timing) os << std::setw(12) << "runtime_ms";
    os << "statement\n";
    for (const auto& r : results) {
        os << std::setw(6) << r.id << std::setw(6) << (r.pass ? "yes" : "NO");
        if (timing) os << std::setw(12) << static_cast<long long>(std::round(r.runtime_ms));
        os << r.statement;
        if (!r.error.empty()) os << "  [error: " << r.error << "]";
        os << "\n";
    }
    return os.str();
}

/** \brief Writes the JSON document to `path` and the text table to `path`.txt. */
inline void emit_report(const std::vector<TaskResult>& results, const std::string& path, bool timing = true) {
    std::ofstream js(path);
    if (!js) throw std::runtime_error("cannot write report: " + path);
    js << report_document(results, timing).dump(2) << "\n";
    if (!js) throw std::runtime_error("write failed: " + path);
    std::ofstream tx(path + ".txt");
    if (!tx) throw std::runtime_error("cannot write report: " + path + ".txt");
    tx << summary_table(results, timing);
}

}  // namespace dirimor
