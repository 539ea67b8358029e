#include "dirimor/verify.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

using namespace dirimor;

namespace {

struct GlobalFlags {
    std::string config;
    std::string out;
    std::optional<int> workers;
    std::optional<int> depth;
    std::optional<std::uint64_t> seed;
    bool no_timing = false;
};

struct ParamFlags {
    std::optional<double> p;
    std::optional<double> lambda;
    std::optional<int> K_a;
    std::optional<int> K_I;
    std::optional<int> radial_order;
    std::optional<int> angular_min;
};

void add_param_flags(CLI::App* cmd, ParamFlags& pf) {
    cmd->add_option("--p", pf.p, "weight exponent p in (0,1]");
    cmd->add_option("--lambda", pf.lambda, "Morrey index lambda in [0,1]");
    cmd->add_option("--K-a", pf.K_a, "a-grid radii 1-2^-k for k <= K_a");
    cmd->add_option("--K-I", pf.K_I, "arc lengths 2^-j for j <= K_I");
    cmd->add_option("--radial-order", pf.radial_order, "Gauss order per radial panel");
    cmd->add_option("--angular-min", pf.angular_min, "floor on equispaced angular counts");
}

RunConfig resolve_config(const GlobalFlags& g, const ParamFlags* pf = nullptr) {
    RunConfig c;
    std::string path = g.config;
    if (path.empty())
        if (const char* env = std::getenv("DIRIMOR_CONFIG")) path = env;
    if (!path.empty()) c = load_config_file(path, c);
    if (g.workers) c.grid.workers = *g.workers;
    if (g.depth) c.quad.depth = *g.depth;
    if (g.seed) c.seed = *g.seed;
    if (!g.out.empty()) c.out = g.out;
    if (g.no_timing) c.timing = false;
    if (pf) {
        if (pf->p) c.p = *pf->p;
        if (pf->lambda) c.lambda = *pf->lambda;
        if (pf->K_a) c.grid.K_a = *pf->K_a;
        if (pf->K_I) c.grid.K_I = *pf->K_I;
        if (pf->radial_order) c.quad.radial_order = *pf->radial_order;
        if (pf->angular_min) c.quad.angular_min = *pf->angular_min;
    }
    return c;
}

void write_output(const ojson& doc, const std::string& out) {
    if (out.empty()) {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << doc.dump(2) << "\n";
}

ojson config_json(const RunConfig& c) {
    return {{"p", c.p},
            {"lambda", c.lambda},
            {"depth", c.quad.depth},
            {"K_a", c.grid.K_a},
            {"K_I", c.grid.K_I},
            {"arc_centers", c.grid.arc_centers},
            {"tail", c.quad.tail == TailPolicy::Extrapolate ? "extrapolate" : "omit"}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical toolkit for Dirichlet-Morrey spaces on the unit disc"};
    app.require_subcommand(1);
    GlobalFlags g;
    app.add_option("--config", g.config, "JSON config file (fallback: DIRIMOR_CONFIG)");
    app.add_option("--out", g.out, "output path");
    app.add_option("--workers", g.workers, "worker threads");
    app.add_option("--depth", g.depth, "dyadic quadrature depth J");
    app.add_option("--seed", g.seed, "seed for random sample points");
    app.add_flag("--no-timing", g.no_timing, "omit runtimes so reports are byte-identical");
    app.fallthrough();

    // norm
    auto* norm = app.add_subcommand("norm", "compute a norm or Carleson quantity of a function");
    ParamFlags norm_p;
    std::string norm_f, norm_q = "dm-translate", norm_csv;
    std::optional<double> norm_s;
    norm->add_option("--f", norm_f, "function spec")->required();
    norm->add_option("--quantity", norm_q, "quantity name")->check(CLI::IsMember(quantity_names()));
    norm->add_option("--s", norm_s, "weight exponent for --quantity morrey");
    norm->add_option("--csv", norm_csv, "write (level, value) rows to this path");
    add_param_flags(norm, norm_p);

    // operator
    auto* op = app.add_subcommand("operator", "ratio scan of J_g, I_g or M_g over the test family");
    ParamFlags op_p;
    std::string op_kind = "ig", op_g;
    std::optional<int> op_K, op_rot;
    op->add_option("--kind", op_kind, "jg | ig | mg")->check(CLI::IsMember({"jg", "ig", "mg"}));
    op->add_option("--g", op_g, "symbol spec")->required();
    op->add_option("--K-c", op_K, "test-family radii 1-2^-k for k <= K_c");
    op->add_option("--rotations", op_rot, "equispaced rotations per radius");
    add_param_flags(op, op_p);

    // membership
    auto* mem = app.add_subcommand("membership", "gap-series membership criteria");
    std::string mem_crit = "gap-qp", mem_rule;
    double mem_q = 0.3;
    std::optional<double> mem_at;
    int mem_K = 20;
    mem->add_option("--criterion", mem_crit, "gap-qp | yamashita")->check(CLI::IsMember({"gap-qp", "yamashita"}));
    mem->add_option("--q", mem_q, "exponent q in (0,1)");
    mem->add_option("--K", mem_K, "number of dyadic blocks");
    mem->add_option("--coeff-rule", mem_rule, "remark:q=<q> | pow2:e=<e> | zero (default remark at --q)");
    mem->add_option("--at", mem_at, "exponent at which the block sums are formed (default --q)");

    // verify
    auto* ver = app.add_subcommand("verify", "run verification tasks V1..V10");
    std::vector<std::string> ver_tasks, ver_suite;
    ParamFlags ver_p;
    ver->add_option("--task", ver_tasks, "task ids or 'all'")->delimiter(',');
    ver->add_option("--suite", ver_suite, "function specs replacing the default suite");
    add_param_flags(ver, ver_p);

    // sweep
    auto* sw = app.add_subcommand("sweep", "a quantity over a grid of (p, lambda)");
    std::string sw_f, sw_q = "dm-translate";
    std::vector<double> sw_ps{0.25, 0.5, 0.75, 1.0}, sw_ls{0.0, 0.4, 0.8};
    sw->add_option("--f", sw_f, "function spec")->required();
    sw->add_option("--quantity", sw_q, "quantity name")->check(CLI::IsMember(quantity_names()));
    sw->add_option("--p-values", sw_ps, "p grid")->delimiter(',');
    sw->add_option("--lambda-values", sw_ls, "lambda grid")->delimiter(',');
    ParamFlags sw_p;
    add_param_flags(sw, sw_p);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*norm) {
            const RunConfig c = resolve_config(g, &norm_p);
            const AnalyticFunction f = parse_function_spec(norm_f);
            const NormReport r = named_quantity(norm_q, f, SpaceParams(c.p, c.lambda), c.grid, c.quad, norm_s);
            ojson doc;
            doc["function"] = f.describe();
            doc["config"] = config_json(c);
            doc["report"] = to_json(r);
            write_output(doc, c.out);
            if (!norm_csv.empty()) {
                std::ofstream csv(norm_csv);
                if (!csv) throw std::runtime_error("cannot write " + norm_csv);
                csv << level_csv(r);
            }
            return 0;
        }
        if (*op) {
            RunConfig c = resolve_config(g, &op_p);
            if (op_K) c.cgrid.K = *op_K;
            if (op_rot) c.cgrid.rotations = *op_rot;
            const AnalyticFunction sym = parse_function_spec(op_g);
            const SpaceParams sp(c.p, c.lambda);
            const TestFamily fam = make_test_family(sp, c.cgrid, c.grid, c.quad);
            const RatioScanReport r = ratio_scan(parse_operator_kind(op_kind), sym, fam, c.grid, c.quad);
            ojson doc;
            doc["config"] = config_json(c);
            doc["family"] = {{"K_est", json_number(fam.max_norm)}, {"min_norm", json_number(fam.min_norm)}};
            doc["scan"] = to_json(r);
            write_output(doc, c.out);
            return 0;
        }
        if (*mem) {
            const RunConfig c = resolve_config(g);
            const GapCoefficients a = mem_rule.empty() ? remark_coefficients(mem_q) : parse_coeff_rule(mem_rule);
            ojson doc;
            doc["criterion"] = mem_crit;
            doc["coefficients"] = a.label;
            doc["q"] = mem_q;
            doc["K"] = mem_K;
            if (mem_crit == "gap-qp") {
                const double at = mem_at.value_or(mem_q);
                doc["at"] = at;
                doc["sums"] = to_json(gap_block_sums(a, at, mem_K));
            } else {
                doc["limsup_estimate"] = json_number(yamashita_limsup(a, mem_q, mem_K));
            }
            write_output(doc, c.out);
            return 0;
        }
        if (*ver) {
            RunConfig c = resolve_config(g, &ver_p);
            if (!ver_tasks.empty()) c.tasks = ver_tasks;
            if (!ver_suite.empty()) c.suite = ver_suite;
            const auto results = run_all(c);
            if (c.out.empty()) {
                std::cout << report_document(results, c.timing).dump(2) << "\n";
            } else {
                emit_report(results, c.out, c.timing);
                std::cout << summary_table(results, c.timing);
            }
            bool all = true;
            for (const auto& r : results) all = all && r.pass;
            return all ? 0 : 1;
        }
        if (*sw) {
            const RunConfig c = resolve_config(g, &sw_p);
            const AnalyticFunction f = parse_function_spec(sw_f);
            ojson rows = ojson::array();
            for (double p : sw_ps)
                for (double l : sw_ls) {
                    const NormReport r = named_quantity(sw_q, f, SpaceParams(p, l), c.grid, c.quad);
                    rows.push_back({{"p", p},
                                    {"lambda", l},
                                    {"value", json_number(r.value)},
                                    {"refinement_delta", json_number(r.refinement_delta)},
                                    {"trend", trend_label(r.trend.unbounded)},
                                    {"flags", r.flags}});
                }
            ojson doc;
            doc["function"] = f.describe();
            doc["quantity"] = sw_q;
            doc["rows"] = rows;
            write_output(doc, c.out);
            return 0;
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
