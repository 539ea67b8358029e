#include "dirimor/gap.hpp"
#include "dirimor/norms.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace dirimor;

TEST(BlockSums, LacunaryRuleDivergesAtItsOwnExponent) {
    const BlockSums b = gap_block_sums(remark_coefficients(0.3), 0.3, 20);
    ASSERT_EQ(b.partial.size(), 20u);
    for (int k = 0; k < 20; ++k) EXPECT_NEAR(b.partial[k], k + 1.0, 1e-12);
    EXPECT_TRUE(b.divergent);
    EXPECT_EQ(b.classification(), "divergent-trend");
    EXPECT_TRUE(std::isinf(b.limit));
}

TEST(BlockSums, GeometricLimitAboveTheExponent) {
    for (double p : {0.4, 0.5, 0.8}) {
        const BlockSums b = gap_block_sums(remark_coefficients(0.3), p, 20);
        const double r = std::exp2(-(p - 0.3));
        EXPECT_NEAR(b.partial.back(), (1.0 - std::pow(r, 20)) / (1.0 - r), 1e-12);
        EXPECT_FALSE(b.divergent) << p;
        EXPECT_NEAR(b.ratio, r, 1e-12);
        EXPECT_NEAR(b.limit, 1.0 / (1.0 - r), 1e-9);
    }
}

TEST(BlockSums, ZeroCoefficients) {
    const BlockSums b = gap_block_sums({[](int) { return cplx(0.0); }, "0"}, 0.5, 10);
    EXPECT_EQ(b.partial.back(), 0.0);
    EXPECT_FALSE(b.divergent);
    EXPECT_EQ(b.limit, 0.0);
}

TEST(BlockSums, SeparatesAtEveryLargerExponent) {
    for (double q : {0.2, 0.3, 0.5}) {
        EXPECT_TRUE(gap_block_sums(remark_coefficients(q), q, 20).divergent);
        for (double p = q + 0.06; p < 1.0; p += 0.1)
            EXPECT_FALSE(gap_block_sums(remark_coefficients(q), p, 20).divergent) << q << " " << p;
    }
}

TEST(BlockSums, PhaseInvariance) {
    const auto base = remark_coefficients(0.3);
    const GapCoefficients rot{[base](int k) { return base(k) * std::polar(1.0, 0.7 * k * k + 1.1); }, "rot"};
    for (double p : {0.3, 0.6}) {
        const BlockSums a = gap_block_sums(base, p, 16), b = gap_block_sums(rot, p, 16);
        EXPECT_EQ(a.divergent, b.divergent);
        for (std::size_t k = 0; k < a.partial.size(); ++k) EXPECT_NEAR(a.partial[k], b.partial[k], 1e-12);
    }
}

TEST(BlockSums, DomainErrors) {
    EXPECT_THROW(gap_block_sums(remark_coefficients(0.3), 0.0, 10), DomainError);
    EXPECT_THROW(gap_block_sums(remark_coefficients(0.3), 1.0, 10), DomainError);
    EXPECT_THROW(gap_block_sums(remark_coefficients(0.3), 0.5, 0), DomainError);
    EXPECT_THROW(remark_example(1.0), DomainError);
}

TEST(Yamashita, Examples) {
    EXPECT_NEAR(yamashita_limsup(remark_coefficients(0.3), 0.3, 20), 1.0, 1e-12);
    EXPECT_EQ(yamashita_limsup({[](int) { return cplx(0.0); }, "0"}, 0.3, 20), 0.0);
    // terms 2^{-0.65 k}, largest at the start of the tail half k = 10
    const GapCoefficients half{[](int k) { return cplx(std::exp2(-k)); }, "2^-k"};
    EXPECT_NEAR(yamashita_limsup(half, 0.3, 20), std::exp2(-0.65 * 10), 1e-15);
}

TEST(Pzh, OriginClosedForm) {
    for (double p : {0.3, 0.5, 0.9}) {
        const double lambda = 0.4;
        const Integral I = pzh_check(DiscPoint(0.0, 0.0), DiscPoint(0.0, 0.0), 2 * p, p, 2 + p * (1 - lambda));
        EXPECT_NEAR(I.value, 1.0 / (p + 1.0), 1e-9);
    }
}

TEST(Pzh, BoundedAlongRadii) {
    double lo = 1e300, hi = 0.0;
    for (int k = 1; k <= 10; ++k) {
        const DiscPoint u(1.0 - std::ldexp(1.0, -k), 0.0);
        const double v = pzh_check(u, u, 1.0, 0.0, 1.5).value;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    EXPECT_LE(hi / lo, 5.0);
}

TEST(Pzh, RandomAdmissibleTriples) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        // s in (-1, 1), r in (0.5, 2.5), then t with 0 < r+t-s-2 < r
        const double s = -0.5 + 1.5 * U(rng), r = 0.5 + 2.0 * U(rng);
        const double c = r * (0.2 + 0.6 * U(rng));
        const double t = c + s + 2.0 - r;
        if (t <= 0.0) continue;
        double lo = 1e300, hi = 0.0;
        for (int k = 1; k <= 8; ++k) {
            const DiscPoint u(std::polar(1.0 - std::ldexp(1.0, -k), 0.3));
            const double v = pzh_check(u, u, r, s, t).value;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        EXPECT_LE(hi / lo, 5.0) << "r=" << r << " s=" << s << " t=" << t;
    }
}

TEST(Pzh, DomainErrors) {
    const DiscPoint o(0.0, 0.0);
    EXPECT_THROW(pzh_check(o, o, 1.0, -1.0, 1.5), DomainError);
    EXPECT_THROW(pzh_check(o, o, 0.0, 0.0, 2.5), DomainError);
    EXPECT_THROW(pzh_check(o, o, 1.0, 0.0, 1.0), DomainError);  // r+t-s-2 = 0
    EXPECT_THROW(pzh_check(o, o, 1.0, 0.0, 2.5), DomainError);  // r+t-s-2 = r
}

TEST(LacunaryExample, DerivativeGrowthFiniteTrend) {
    // sup |f'(z)| (1-|z|)^{(1+q)/2} along radii; each level value is a single-ray maximum
    const double q = 0.3;
    const AnalyticFunction f = remark_example(q);
    std::vector<double> x, y;
    for (int k = 1; k <= 12; ++k) {
        const double r = 1.0 - std::ldexp(1.0, -k);
        double best = 0.0;
        for (int m = 0; m < 64; ++m) best = std::max(best, std::abs(f.deriv(std::polar(r, two_pi * m / 64))));
        x.push_back(k * std::log(2.0));
        y.push_back(best * std::pow(1.0 - r, (1.0 + q) / 2.0));
    }
    EXPECT_FALSE(classify_trend(x, y).unbounded);
}
