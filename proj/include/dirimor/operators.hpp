#pragma once

#include "dirimor/function.hpp"
#include "dirimor/norms.hpp"
#include "dirimor/parallel.hpp"

#include <random>
#include <string>
#include <vector>

namespace dirimor {

enum class OperatorKind { Jg, Ig, Mg };

inline std::string operator_name(OperatorKind k) {
    switch (k) {
        case OperatorKind::Jg: return "jg";
        case OperatorKind::Ig: return "ig";
        case OperatorKind::Mg: return "mg";
    }
    return "?";
}

inline OperatorKind parse_operator_kind(const std::string& s) {
    if (s == "jg" || s == "Jg") return OperatorKind::Jg;
    if (s == "ig" || s == "Ig") return OperatorKind::Ig;
    if (s == "mg" || s == "Mg") return OperatorKind::Mg;
    throw DomainError("unknown operator kind: " + s);
}

/** \brief J_g f (z) = int_0^z f(w) g'(w) dw. */
inline AnalyticFunction apply_Jg(const AnalyticFunction& f, const AnalyticFunction& g) { return make_jg(f, g); }

/** \brief I_g f (z) = int_0^z f'(w) g(w) dw. */
inline AnalyticFunction apply_Ig(const AnalyticFunction& f, const AnalyticFunction& g) { return make_ig(f, g); }

/** \brief M_g f = g f. */
inline AnalyticFunction apply_Mg(const AnalyticFunction& f, const AnalyticFunction& g) { return make_product(f, g); }

inline AnalyticFunction apply_operator(OperatorKind k, const AnalyticFunction& f, const AnalyticFunction& g) {
    switch (k) {
        case OperatorKind::Jg: return apply_Jg(f, g);
        case OperatorKind::Ig: return apply_Ig(f, g);
        case OperatorKind::Mg: return apply_Mg(f, g);
    }
    throw DomainError("unknown operator kind");
}

/** \brief Seeded points uniform in area on |z| <= r_max. */
inline std::vector<cplx> random_disc_points(std::size_t n, std::uint64_t seed, double r_max = 0.99) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<cplx> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = r_max * std::sqrt(U(rng));
        out.push_back(std::polar(r, two_pi * U(rng)));
    }
    return out;
}

/** \brief max over samples of |J_g f - (M_g f - f(0) g(0) - I_g f)|. */
inline double ibp_residual(const AnalyticFunction& f, const AnalyticFunction& g, const std::vector<cplx>& samples) {
    const AnalyticFunction J = apply_Jg(f, g), I = apply_Ig(f, g);
    const cplx f0g0 = f(0.0) * g(0.0);
    double worst = 0.0;
    for (const cplx z : samples) {
        const cplx rhs = f(z) * g(z) - f0g0 - I(z);
        worst = std::max(worst, std::abs(J(z) - rhs));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Test family

/** \brief c = 0 plus radii 1-2^-k, k = 1..K, each at `rotations` equispaced angles. */
struct CGrid {
    int K = 10;
    int rotations = 8;

    struct Point {
        int k;
        int rotation;
        cplx c;
    };
    std::vector<Point> points() const {
        std::vector<Point> out{{0, 0, cplx(0.0)}};
        for (int k = 1; k <= K; ++k)
            for (int m = 0; m < rotations; ++m) out.push_back({k, m, std::polar(1.0 - std::ldexp(1.0, -k), two_pi * m / rotations)});
        return out;
    }
};

struct TestFamilyMember {
    CGrid::Point at;
    AnalyticFunction f;
    NormReport norm;
};

/** \brief f_c = (1 - conj(c) z)^{-p(1-lambda)/2} with D_p^lambda norms. */
struct TestFamily {
    SpaceParams params;
    std::vector<TestFamilyMember> members;
    double max_norm = 0.0;  ///< K_est
    double min_norm = 0.0;
};

inline TestFamily make_test_family(const SpaceParams& sp, const CGrid& cg = {}, const ScanGrid& grid = {},
                                   const QuadratureConfig& q = {}) {
    TestFamily fam{sp, {}, 0.0, 0.0};
    const auto pts = cg.points();
    fam.members.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        fam.members[i].at = pts[i];
        fam.members[i].f = make_power_kernel(DiscPoint(pts[i].c), sp.half_growth());
        fam.members[i].norm = dm_norm_translate(fam.members[i].f, sp, grid, q);
    }
    fam.min_norm = std::numeric_limits<double>::infinity();
    for (const auto& m : fam.members) {
        fam.max_norm = std::max(fam.max_norm, m.norm.value);
        fam.min_norm = std::min(fam.min_norm, m.norm.value);
    }
    return fam;
}

/**
 * \brief Largest least-squares slope, over rotations, of log(values) against log(1/(1-|c|))
 * on the last `window` radii.
 */
inline double family_tail_slope(const std::vector<CGrid::Point>& pts, const std::vector<double>& values,
                                std::size_t window = 5, bool absolute = false) {
    int rotations = 0;
    for (const auto& p : pts) rotations = std::max(rotations, p.rotation + 1);
    double worst = absolute ? 0.0 : -std::numeric_limits<double>::infinity();
    bool any = false;
    for (int m = 0; m < rotations; ++m) {
        std::vector<double> x, y;
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (pts[i].k >= 1 && pts[i].rotation == m && values[i] > 0.0) {
                x.push_back(pts[i].k * std::log(2.0));
                y.push_back(std::log(values[i]));
            }
        if (x.size() > window) {
            x.erase(x.begin(), x.end() - static_cast<long>(window));
            y.erase(y.begin(), y.end() - static_cast<long>(window));
        }
        if (x.size() < 2) continue;
        const double s = least_squares_slope(x, y);
        worst = absolute ? std::max(worst, std::fabs(s)) : std::max(worst, s);
        any = true;
    }
    return any ? worst : 0.0;
}

/** \brief Per-c ratios ||T f_c|| / ||f_c|| in D_p^lambda with their tail trend. */
struct RatioScanReport {
    struct Row {
        CGrid::Point at;
        double norm_f = 0.0;
        double norm_tf = 0.0;
        double ratio = 0.0;
        std::vector<std::string> flags;
    };
    OperatorKind kind = OperatorKind::Jg;
    std::string symbol;
    SpaceParams params;
    std::vector<Row> rows;
    double max_ratio = 0.0;
    double slope = 0.0;
    bool unbounded = false;

    std::string classification() const { return unbounded ? "unbounded-trend" : "bounded-trend"; }
};

inline RatioScanReport ratio_scan(OperatorKind kind, const AnalyticFunction& g, const TestFamily& fam,
                                  const ScanGrid& grid = {}, const QuadratureConfig& q = {}) {
    RatioScanReport rep;
    rep.kind = kind;
    rep.symbol = g.describe();
    rep.params = fam.params;
    rep.rows.resize(fam.members.size());
    for (std::size_t i = 0; i < fam.members.size(); ++i) {
        const auto& m = fam.members[i];
        auto& row = rep.rows[i];
        row.at = m.at;
        row.norm_f = m.norm.value;
        const AnalyticFunction tf = apply_operator(kind, m.f, g);
        const NormReport n = dm_norm_translate(tf, fam.params, grid, q);
        row.norm_tf = n.value;
        row.flags = n.flags;
        row.ratio = row.norm_f > 0.0 ? row.norm_tf / row.norm_f : 0.0;
        rep.max_ratio = std::max(rep.max_ratio, row.ratio);
    }
    std::vector<CGrid::Point> pts;
    std::vector<double> ratios;
    for (const auto& r : rep.rows) {
        pts.push_back(r.at);
        ratios.push_back(r.ratio);
    }
    rep.slope = family_tail_slope(pts, ratios);
    rep.unbounded = rep.slope > 0.1;
    return rep;
}

inline RatioScanReport ratio_scan(OperatorKind kind, const AnalyticFunction& g, const SpaceParams& sp,
                                  const CGrid& cg = {}, const ScanGrid& grid = {}, const QuadratureConfig& q = {}) {
    return ratio_scan(kind, g, make_test_family(sp, cg, grid, q), grid, q);
}

}  // namespace dirimor
