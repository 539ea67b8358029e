// Runs every acceptance criterion at default settings and prints one line per criterion.
#include "dirimor/verify.hpp"

#include <chrono>
#include <cstdio>
#include <random>

using namespace dirimor;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

bool report(const char* id, bool pass, const std::string& detail) {
    std::printf("%-4s %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    return pass;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

const ojson* find_measure(const TaskResult& r, const std::string& name) {
    for (const auto& m : r.measured)
        if (m.contains("name") && m["name"] == name) return &m;
    return nullptr;
}

double num(const ojson& j) { return j.is_number() ? j.get<double>() : std::nan(""); }

double measure_value(const TaskResult& r, const std::string& name) {
    const ojson* m = find_measure(r, name);
    return m ? num(m->at("value")) : std::nan("");
}

std::string outcome(const TaskResult& r, double secs) {
    std::string s = fmt("%s %.1fs", r.id.c_str(), secs);
    if (!r.error.empty()) s += " error: " + r.error;
    return s;
}

}  // namespace

int main() {
    const RunConfig cfg;
    VerifyContext ctx(cfg);
    std::map<std::string, VerificationTask> tasks;
    for (const auto& t : verification_tasks()) tasks.emplace(t.id, t);
    auto run = [&](const std::string& id, double& secs) {
        const auto t0 = clock_type::now();
        TaskResult r = run_verification(tasks.at(id), ctx);
        secs = seconds_since(t0);
        return r;
    };
    bool all = true;

    {
        const auto t0 = clock_type::now();
        std::mt19937_64 rng(cfg.seed);
        std::normal_distribution<double> N(0.0, 1.0);
        double worst = 0.0;
        for (double p : {0.25, 0.5, 0.75, 1.0})
            for (int deg = 0; deg <= 20; ++deg) {
                std::vector<cplx> a(deg + 1);
                for (auto& c : a) c = cplx(N(rng), N(rng));
                const double exact = dirichlet_norm_coeff(a, p);
                worst = std::max(worst, std::abs(dirichlet_norm(make_taylor(a), p).value - exact) / exact);
            }
        const double secs = seconds_since(t0);
        all &= report("A1", worst < 1e-6 && secs < 10.0, fmt("max relative error %.3g (< 1e-6), %.2fs (< 10s)", worst, secs));
    }
    {
        double secs = 0.0;
        const TaskResult r = run("V1", secs);
        all &= report("A2", r.pass && secs < 300.0, fmt("box/translate ratios in [1/50, 50], drift < 2; %s (< 300s)", outcome(r, secs).c_str()));
    }
    {
        double s2 = 0.0, s3 = 0.0;
        const TaskResult r2 = run("V2", s2);
        const TaskResult r3 = run("V3", s3);
        const ojson& lune = r3.measured.empty() ? ojson() : r3.measured[0];
        const double band = lune.contains("max_factor_from_median") ? num(lune["max_factor_from_median"]) : std::nan("");
        all &= report("A3", r2.pass && r3.pass && s2 + s3 < 120.0,
                      fmt("growth/norm drift %.3g (< 1.5), lune factor from median %.3g (<= 3); %.1fs (< 120s)%s%s",
                          measure_value(r2, "C_est_drift"), band, s2 + s3, r2.error.empty() ? "" : " error: ",
                          r2.error.c_str()));
    }
    {
        double secs = 0.0;
        const TaskResult r = run("V4", secs);
        std::size_t violations = 0, arcs = 0;
        for (const auto& m : r.measured) {
            violations += m.value("violations", std::size_t{0});
            arcs += m.value("arcs", std::size_t{0});
        }
        all &= report("A4", r.pass, fmt("%zu violations over %zu arc checks; %s", violations, arcs, outcome(r, secs).c_str()));
    }
    {
        double secs = 0.0;
        const TaskResult r = run("V5", secs);
        double worst = 0.0;
        for (const auto& m : r.measured)
            if (m.contains("drift")) worst = std::max(worst, num(m["drift"]));
        all &= report("A5", r.pass && secs < 600.0, fmt("max ratio drift %.3g (< 2); %s (< 600s)", worst, outcome(r, secs).c_str()));
    }
    {
        double secs = 0.0;
        const TaskResult r = run("V6", secs);
        const double ratio = measure_value(r, "max_over_min"), slope = measure_value(r, "abs_tail_slope");
        all &= report("A6", ratio <= 10.0 && slope < 0.1 && r.error.empty(),
                      fmt("max/min %.4g (<= 10), |tail slope| %.3g (< 0.1); %s", ratio, slope, outcome(r, secs).c_str()));
    }
    {
        double secs = 0.0;
        const TaskResult r = run("V7", secs);
        const ojson* b = find_measure(r, "ig_bounded");
        const ojson* l = find_measure(r, "ig_log");
        const std::string cb = b ? (*b)["scan"]["classification"].get<std::string>() : "?";
        const std::string cl = l ? (*l)["scan"]["classification"].get<std::string>() : "?";
        const double sl = l ? num((*l)["scan"]["slope"]) : std::nan("");
        all &= report("A7", r.pass, fmt("(1+z)/2: %s; log1: %s, slope %.3g (> 0.1); %s", cb.c_str(), cl.c_str(), sl,
                                        outcome(r, secs).c_str()));
    }
    {
        double secs = 0.0;
        const TaskResult r = run("V8", secs);
        const ojson* s = find_measure(r, "jg_scan");
        const ojson* q = find_measure(r, "qp_by_depth");
        const std::string cls = s ? (*s)["scan"]["classification"].get<std::string>() : "?";
        const double corr = q ? num((*q)["correlation"]) : std::nan("");
        all &= report("A8", r.pass, fmt("Jg scan %s, qp correlation over depth %.4f (>= 0.9); %s", cls.c_str(), corr,
                                        outcome(r, secs).c_str()));
    }
    {
        double secs = 0.0;
        const TaskResult r = run("V9", secs);
        const ojson* m = find_measure(r, "blocks_at_p");
        const double rel = m ? num((*m)["limit_relative_error"]) : std::nan("");
        all &= report("A9", r.pass, fmt("divergent at q, convergent at p, limit error %.3g (<= 0.01); %s", rel,
                                        outcome(r, secs).c_str()));
    }
    {
        double secs = 0.0;
        const TaskResult r = run("V10", secs);
        double poly = 0.0, pair = 0.0;
        for (const auto& m : r.measured) {
            double& slot = m["g"] == "log1" ? pair : poly;
            slot = std::max(slot, num(m["residual"]));
        }
        all &= report("A10", r.pass, fmt("polynomial residual %.3g (< 1e-8), kernel/log1 residual %.3g (< 1e-6); %s", poly,
                                         pair, outcome(r, secs).c_str()));
    }
    {
        const SpaceParams sp(0.5, 0.4);
        const double band = detail::pzh_band(2.0 * sp.p, sp.p, 2.0 + sp.growth(), 10, cfg.quad, nullptr);
        all &= report("A11", band <= 5.0, fmt("max/min over u = 1-2^-k, k <= 10: %.4g (<= 5)", band));
    }
    std::printf("%s\n", all ? "all criteria pass" : "some criteria FAIL");
    return all ? 0 : 1;
}
