#include "dirimor/gap.hpp"
#include "dirimor/norms.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace dirimor;

namespace {

// sqrt(|a0|^2 + sum n^2 |a_n|^2 Gamma(n) Gamma(p+1) / Gamma(n+p+1)), via lgamma
double coeff_oracle(const std::vector<cplx>& a, double p) {
    double s = std::norm(a[0]);
    for (std::size_t n = 1; n < a.size(); ++n)
        s += double(n * n) * std::norm(a[n]) *
             std::exp(std::lgamma(double(n)) + std::lgamma(p + 1.0) - std::lgamma(n + p + 1.0));
    return std::sqrt(s);
}

ScanGrid small_grid() {
    ScanGrid g;
    g.K_a = 5;
    g.K_I = 6;
    g.arc_centers = 16;
    return g;
}

std::vector<AnalyticFunction> suite() {
    return {make_taylor({0.0, 1.0}), make_taylor({1.0, 2.0, 0.0, 1.0}), make_power_kernel(DiscPoint(0.9, 0.0), 0.35),
            make_power_kernel(DiscPoint(cplx(-0.3, 0.5)), 0.2), remark_example(0.3)};
}

}  // namespace

TEST(DirichletNorm, Examples) {
    EXPECT_NEAR(dirichlet_norm(make_constant(cplx(3.0, 4.0)), 0.5).value, 5.0, 1e-15);
    EXPECT_NEAR(dirichlet_norm(make_taylor({0.0, 1.0}), 1.0).value, std::sqrt(0.5), 1e-9);
    EXPECT_NEAR(dirichlet_norm(make_taylor({0.0, 0.0, 1.0}), 0.5).value, std::sqrt(4.0 / 3.75), 1e-9);
    EXPECT_NEAR(dirichlet_norm_coeff({1.0}, 0.5), 1.0, 1e-15);
    EXPECT_NEAR(dirichlet_norm_coeff({0.0, 1.0}, 1.0), std::sqrt(0.5), 1e-15);
}

TEST(DirichletNorm, PolynomialOracle) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> N(0.0, 1.0);
    for (double p : {0.25, 0.5, 1.0})
        for (int deg : {1, 5, 12, 20}) {
            std::vector<cplx> a(deg + 1);
            for (auto& c : a) c = cplx(N(rng), N(rng));
            const double expect = coeff_oracle(a, p);
            EXPECT_NEAR(dirichlet_norm(make_taylor(a), p).value / expect, 1.0, 1e-6);
            EXPECT_NEAR(dirichlet_norm_coeff(a, p) / expect, 1.0, 1e-12);
            // generic disc quadrature, bypassing any coefficient shortcut
            const AnalyticFunction f = make_taylor(a);
            const Integral I = integrate_disc(
                [&](cplx z) { return std::norm(f.deriv(z)) * std::pow(1.0 - std::norm(z), p); }, f.resolution(),
                QuadratureConfig{});
            EXPECT_NEAR(std::sqrt(std::norm(a[0]) + I.value) / expect, 1.0, 1e-6) << "p=" << p << " deg=" << deg;
        }
}

TEST(TranslateSeminorm, Examples) {
    EXPECT_EQ(translate_seminorm(make_constant(2.0), 0.5, DiscPoint(0.3, 0.3)), 0.0);
    const AnalyticFunction z = make_taylor({0.0, 1.0});
    EXPECT_NEAR(translate_seminorm(z, 1.0, DiscPoint(0.0, 0.0)), std::sqrt(0.5), 1e-9);
    EXPECT_NEAR(translate_seminorm(z, 0.5, DiscPoint(0.5, 0.0)), translate_seminorm(z, 0.5, DiscPoint(0.0, 0.5)), 1e-9);
}

TEST(TranslateSeminorm, RoutesAgree) {
    // the translate route has no coefficient shortcut, so a 2^20-degree gap series is out of reach there
    auto fs = suite();
    fs.back() = make_gap_series(remark_coefficients(0.3).rule, 8, GapPolicy{0.9, 1e-2});
    // f o phi_a of degree n settles only below 1-|z| ~ (1-|a|)/n, past the default depth
    QuadratureConfig q;
    q.depth = 20;
    for (const auto& f : fs)
        for (const cplx a : {cplx(0.0), cplx(0.5, 0.0), cplx(-0.4, 0.6), cplx(0.0, -0.9)}) {
            const double cv = translate_energy(f, 0.5, DiscPoint(a), q).value;
            const double tr = translate_energy(f, 0.5, DiscPoint(a), q, TranslateRoute::Translate).value;
            EXPECT_LT(std::fabs(cv - tr) / cv, 1e-5) << f.describe() << " a=" << a;
        }
}

TEST(TranslateScan, MatchesDirectEvaluation) {
    const ScanGrid g = small_grid();
    for (const auto& f : suite()) {
        const TranslateScan scan = scan_translates(f, 0.5, g);
        for (std::size_t k = 0; k < scan.rings.size(); ++k)
            for (int m : {0, scan.rings[k].count / 3}) {
                const double direct = translate_energy(f, 0.5, DiscPoint(scan.rings[k].point(m))).value;
                EXPECT_NEAR(scan.energy[k][m] / direct, 1.0, 1e-6) << f.describe() << " k=" << k << " m=" << m;
            }
    }
}

TEST(MorreyNorm, Constants) {
    const SpaceParams sp(0.5, 0.4);
    const AnalyticFunction c = make_constant(cplx(0.0, -2.0));
    EXPECT_EQ(dm_norm_translate(c, sp, small_grid()).value, 2.0);
    EXPECT_EQ(dm_seminorm_box(c, sp, small_grid()).value, 0.0);
    EXPECT_EQ(growth_envelope(c, sp, small_grid()).value, 2.0);
    EXPECT_EQ(hinf_sup(c, small_grid()).value, 2.0);
    EXPECT_EQ(general_morrey_norm(c, 0.5, 0.3, small_grid()).value, 2.0);
    EXPECT_EQ(qp_log_quantity(c, 0.5, small_grid()).value, 0.0);
    EXPECT_EQ(boundary_double_seminorm(c, sp, small_grid()).value, 0.0);
    const NormReport gp = gpcm_quantity(c, 0.5, small_grid());
    EXPECT_EQ(gp.value, 0.0);
    EXPECT_TRUE(gp.has_flag("degenerate"));
}

TEST(MorreyNorm, TranslateNormDefinition) {
    // |f(0)| + max (1-|a|^2)^{p(1-lambda)/2} T(a), recomputed from the scan
    const SpaceParams sp(0.5, 0.4);
    const ScanGrid g = small_grid();
    const AnalyticFunction f = make_taylor({1.0, 2.0, 0.0, 1.0});
    const TranslateScan scan = scan_translates(f, sp.p, g);
    double best = 0.0;
    for (std::size_t k = 0; k < scan.rings.size(); ++k)
        for (double e : scan.energy[k])
            best = std::max(best, std::pow(1.0 - std::pow(scan.rings[k].rho, 2), sp.half_growth()) * std::sqrt(e));
    const NormReport r = dm_norm_translate(f, sp, g);
    EXPECT_NEAR(r.value, 1.0 + best, 1e-14);
    EXPECT_EQ(r.maximizer.kind, GridPoint::Kind::Point);
    EXPECT_EQ(r.level_values.size(), scan.rings.size());
}

TEST(MorreyNorm, GeneralMorreyBracketsTranslateNorm) {
    const SpaceParams sp(0.5, 0.4);
    const double s = sp.half_growth();
    for (const auto& f : {make_taylor({0.0, 1.0, 0.5}), make_power_kernel(DiscPoint(0.9, 0.0), 0.35)}) {
        const double f0 = std::abs(f(0.0));
        const double dm = dm_norm_translate(f, sp, small_grid()).value - f0;
        const double gm = general_morrey_norm(f, sp.p, s, small_grid()).value - f0;
        EXPECT_GE(dm, gm * (1.0 - 1e-12));
        EXPECT_LE(dm, gm * std::exp2(s) * (1.0 + 1e-12));
    }
}

TEST(BoxQuantity, ClosedFormArc) {
    // f = z, p = 1: int_{S(I)} (1-|z|^2) dm = |I| (2|I| - |I|^2)^2 / 2
    const ScanGrid g = small_grid();
    const BoxScan scan = scan_boxes(make_taylor({0.0, 1.0}), 1.0, g);
    for (std::size_t i = 0; i < scan.arcs.size(); ++i) {
        const double L = scan.arcs[i].arc.length;
        EXPECT_NEAR(scan.energy[i], L * std::pow(2 * L - L * L, 2) / 2.0, 1e-8 * L) << "L=" << L;
        if (scan.arcs[i].level == 1) EXPECT_NEAR(scan.energy[i] / L, 0.28125, 1e-8);
    }
}

TEST(BoxQuantity, QpIsLambdaOne) {
    const AnalyticFunction f = make_power_kernel(DiscPoint(0.9, 0.0), 0.35);
    EXPECT_EQ(dm_seminorm_box(f, SpaceParams(0.5, 1.0), small_grid()).value, qp_quantity(f, 0.5, small_grid()).value);
}

TEST(BoxQuantity, EnlargingGridNeverDecreasesSupremum) {
    const SpaceParams sp(0.5, 0.4);
    ScanGrid a = small_grid(), b = small_grid();
    b.K_I = 8;
    b.arc_centers = 32;
    for (const auto& f : suite()) {
        EXPECT_LE(dm_seminorm_box(f, sp, a).value, dm_seminorm_box(f, sp, b).value * (1.0 + 1e-12)) << f.describe();
        EXPECT_LE(qp_log_quantity(f, 0.5, a).value, qp_log_quantity(f, 0.5, b).value * (1.0 + 1e-12));
    }
}

TEST(BoxQuantity, WeightExponentInequality) {
    const ScanGrid g = small_grid();
    for (const auto& f : suite()) {
        const BoxScan s1 = scan_boxes(f, 0.3, g), s2 = scan_boxes(f, 0.6, g);
        for (std::size_t i = 0; i < s1.arcs.size(); ++i)
            EXPECT_LE(s2.energy[i], std::pow(2 * s1.arcs[i].arc.length, 0.3) * s1.energy[i]) << f.describe();
    }
}

TEST(BoxQuantity, QpLogInteriorMaximum) {
    const NormReport r = qp_log_quantity(make_taylor({0.0, 1.0}), 0.5, small_grid());
    EXPECT_GT(r.value, 0.0);
    EXPECT_EQ(r.level_values.front(), 0.0);
    EXPECT_GT(r.maximizer.level, 0);
    EXPECT_LT(r.maximizer.level, small_grid().K_I);
    EXPECT_FALSE(r.trend.unbounded);
}

TEST(LuneQuantity, WholeDisc) {
    const SpaceParams sp(1.0, 0.5);
    const Integral I = lune_quantity(make_taylor({0.0, 1.0}), sp, BoundaryPoint(0.3), 2.0);
    EXPECT_NEAR(I.value, 0.5 * std::pow(2.0, -0.5), 1e-8);
    EXPECT_EQ(lune_quantity(make_constant(1.0), sp, BoundaryPoint(0.0), 0.5).value, 0.0);
}

TEST(BoundarySeminorm, IdentityOnFullCircle) {
    // f = z, p = 1/2: int int |u-v|^{1/2} = 2pi 2^{3/2} B(1/2, 3/4)
    const SpaceParams sp(0.5, 0.4);
    ScanGrid g = small_grid();
    g.K_I = 3;
    const double B = std::exp(std::lgamma(0.5) + std::lgamma(0.75) - std::lgamma(1.25));
    const double expect = two_pi * std::pow(2.0, 1.5) * B;
    const NormReport r = boundary_double_seminorm(make_taylor({0.0, 1.0}), sp, g);
    EXPECT_NEAR(r.level_values[0] / expect, 1.0, 1e-4);
    const NormReport rot = boundary_double_seminorm(make_taylor({0.0, cplx(0.6, 0.8)}), sp, g);
    EXPECT_NEAR(rot.level_values[0] / r.level_values[0], 1.0, 1e-10);
    EXPECT_THROW(boundary_double_seminorm(make_log1(), sp, g), UnsupportedFunction);
}

TEST(PointwiseQuantities, GrowthAndHinf) {
    const SpaceParams sp(0.5, 0.4);
    const ScanGrid g = small_grid();
    const NormReport z = growth_envelope(make_taylor({0.0, 1.0}), sp, g);
    EXPECT_LE(z.value, 1.0);
    // r (1-r)^s peaks near 1 - s, so the decrease starts at k = 4
    for (std::size_t k = 4; k < z.level_values.size(); ++k) EXPECT_LT(z.level_values[k], z.level_values[k - 1]);
    // the extremal kernel is |1-r|^{-s}(1-r)^s = 1 on the radius toward 1
    const NormReport fpl = growth_envelope(make_power_kernel(BoundaryPoint(0.0), sp.half_growth()), sp, g);
    for (std::size_t k = 1; k < fpl.level_values.size(); ++k) EXPECT_NEAR(fpl.level_values[k], 1.0, 1e-12);

    const NormReport hz = hinf_sup(make_taylor({0.0, 1.0}), g);
    EXPECT_NEAR(hz.value, 1.0 - std::ldexp(1.0, -g.K_a), 1e-15);
    const NormReport hl = hinf_sup(make_log1(), g);
    for (int k = 1; k <= g.K_a; ++k) EXPECT_GE(hl.level_values[k], k * std::log(2.0) - 1e-12);
    EXPECT_TRUE(hl.trend.unbounded);
}

TEST(CarlesonMeasure, TotalMassAndGpcmOrigin) {
    const WeightedDerivativeMeasure mu(make_taylor({0.0, 1.0}), 0.5);
    // Gamma(1) Gamma(1.5) / Gamma(2.5) = 2/3
    EXPECT_NEAR(mu.mass(box_of_point(DiscPoint(0.0, 0.0))).value, 2.0 / 3.0, 1e-9);
    const WeightedDerivativeMeasure nu(make_power_kernel(DiscPoint(0.5, 0.0), 0.4), 0.5);
    EXPECT_FALSE(nu.exact());
    const Region S = box_of_arc(Arc(0.0, 0.25));
    EXPECT_NEAR(nu.mass(S).value,
                integrate_region([&](cplx z) { return nu.density(z); }, S, nu.symbol().resolution(), QuadratureConfig{}).value,
                1e-6 * nu.mass(S).value);
    ScanGrid g = small_grid();
    g.K_w = 0;
    const NormReport r = gpcm_quantity(make_taylor({0.0, 1.0}), 0.5, g);
    EXPECT_GT(r.value, 0.0);
    EXPECT_TRUE(std::isfinite(r.value));
}
