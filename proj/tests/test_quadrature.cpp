#include "dirimor/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace dirimor;

namespace {

double beta_fn(double a, double b) { return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)); }

// dm-area of the part of the disc within distance h of a boundary point (lens of radii 1 and h at distance 1)
double lens_area(double h) {
    if (h >= 2.0) return 1.0;
    const double a = std::acos(1.0 - 0.5 * h * h) + h * h * std::acos(0.5 * h) - 0.5 * h * std::sqrt(4.0 - h * h);
    return a / pi;
}

const Resolution plain{};

}  // namespace

TEST(DiscQuadrature, Polynomials) {
    const QuadratureConfig q;
    EXPECT_NEAR(integrate_disc([](cplx) { return 1.0; }, plain, q).value, 1.0, 1e-8);
    EXPECT_NEAR(integrate_disc([](cplx z) { return 1.0 - std::norm(z); }, plain, q).value, 0.5, 0.5e-8);
    EXPECT_NEAR(integrate_disc([](cplx z) { return std::norm(z); }, plain, q).value, 0.5, 0.5e-8);
}

TEST(DiscQuadrature, OmittedRingWithinBound) {
    // without the tail, the mass 1 - (1-2^-J)^2 of the outer ring is missing
    QuadratureConfig q;
    q.tail = TailPolicy::Omit;
    const double r = 1.0 - std::ldexp(1.0, -q.depth);
    const Integral I = integrate_disc([](cplx) { return 1.0; }, plain, q, 2.0);
    EXPECT_NEAR(I.value, r * r, 1e-12);
    EXPECT_GE(I.error, 1.0 - r * r);
}

TEST(DiscQuadrature, RefinementStable) {
    const QuadratureConfig q;
    auto field = [](cplx z) { return std::norm(z * z - 0.5) * (1.0 - std::norm(z)); };
    const double a = integrate_disc(field, plain, q).value, b = integrate_disc(field, plain, q.refined()).value;
    EXPECT_LT(std::fabs(a - b) / b, 1e-8);
}

TEST(DiscQuadrature, BetaMonomials) {
    for (double p : {0.25, 0.5, 0.75, 1.0})
        for (int m = 0; m < 20; ++m) {
            auto field = [=](cplx z) { return std::pow(std::norm(z), m) * std::pow(1.0 - std::norm(z), p); };
            const Integral I = integrate_disc(field, plain, QuadratureConfig{});
            EXPECT_NEAR(I.value / beta_fn(m + 1, p + 1), 1.0, 1e-6) << "p=" << p << " m=" << m;
        }
}

TEST(DiscQuadrature, AngularDependenceIntegratesOut) {
    // |1 + z|^2 = 1 + 2 Re z + |z|^2 has disc mean 1 + 1/2
    const Integral I = integrate_disc([](cplx z) { return std::norm(1.0 + z); }, plain, QuadratureConfig{});
    EXPECT_NEAR(I.value, 1.5, 1e-9);
}

TEST(RegionQuadrature, BoxClosedForms) {
    for (double L : {1.0, 0.5, 0.25, 1.0 / 64}) {
        const double r0 = 1.0 - L;
        const Region S = box_of_arc(Arc(0.3, L));
        EXPECT_NEAR(integrate_region([](cplx) { return 1.0; }, S, plain, QuadratureConfig{}).value,
                    L * (1.0 - r0 * r0), 1e-8 * L);
        EXPECT_NEAR(integrate_region([](cplx z) { return std::norm(z); }, S, plain, QuadratureConfig{}).value,
                    L * (1.0 - std::pow(r0, 4)) / 2.0, 1e-8 * L);
    }
    EXPECT_NEAR(integrate_region([](cplx) { return 1.0; }, box_of_arc(Arc(0.0, 0.5)), plain, QuadratureConfig{}).value,
                0.375, 1e-8);
    EXPECT_NEAR(integrate_region([](cplx z) { return 1.0 - std::norm(z); }, box_of_arc(Arc(2.0, 0.5)), plain,
                                 QuadratureConfig{})
                    .value,
                0.140625, 1e-8);
    EXPECT_NEAR(integrate_region([](cplx) { return 1.0; }, lune(BoundaryPoint(1.0), 2.0), plain, QuadratureConfig{}).value,
                1.0, 1e-8);
}

TEST(RegionQuadrature, BoxOfPointMatchesArcBox) {
    const Region A = box_of_point(DiscPoint(std::polar(0.75, 1.0)));
    const Region B = box_of_arc(Arc(1.0, 0.25));
    auto field = [](cplx z) { return std::norm(z - cplx(0.2, 0.4)); };
    EXPECT_NEAR(integrate_region(field, A, plain, QuadratureConfig{}).value,
                integrate_region(field, B, plain, QuadratureConfig{}).value, 1e-13);
}

TEST(RegionQuadrature, LuneArea) {
    for (double h : {2.0, 1.0, 0.5, 0.125, 1.0 / 1024}) {
        const Integral I = integrate_region([](cplx) { return 1.0; }, lune(BoundaryPoint(0.7), h), plain,
                                            QuadratureConfig{});
        EXPECT_NEAR(I.value / lens_area(h), 1.0, 1e-8) << "h=" << h;
    }
}

TEST(RegionQuadrature, Intersections) {
    const Region A = box_of_arc(Arc(0.0, 0.25));
    const Region B = box_of_arc(Arc(pi * 0.25, 0.25));
    const Region C = region_intersect(A, B);
    ASSERT_FALSE(C.empty());
    EXPECT_EQ(C.r0, 0.75);
    EXPECT_NEAR(C.angles.measure(), pi * 0.25, 1e-15);
    // overlap of the two boxes: a quarter of the angular span at the same radial range
    EXPECT_NEAR(integrate_region([](cplx) { return 1.0; }, C, plain, QuadratureConfig{}).value,
                0.25 * 0.25 * (1.0 - 0.75 * 0.75) / 0.5, 1e-12);
    EXPECT_TRUE(region_intersect(A, box_of_arc(Arc(pi, 0.25))).empty());
    EXPECT_TRUE(integrate_region([](cplx) { return 1.0; }, region_intersect(A, box_of_arc(Arc(pi, 0.25))), plain,
                                 QuadratureConfig{})
                    .has_flag("empty"));
    const DiscPoint w(std::polar(0.8, 2.5));
    const Region Sw = region_intersect(box_of_point(DiscPoint(0.0, 0.0)), box_of_point(w));
    EXPECT_EQ(Sw.r0, box_of_point(w).r0);
    EXPECT_NEAR(Sw.angles.measure(), box_of_point(w).angles.measure(), 1e-15);
    EXPECT_NEAR(region_intersect(box_of_point(w), box_of_point(w)).angles.measure(), two_pi * 0.2, 1e-14);
    EXPECT_TRUE(region_intersect(box_of_point(DiscPoint(0.9, 0.0)), box_of_point(DiscPoint(-0.9, 0.0))).empty());
    EXPECT_THROW(region_intersect(A, lune(BoundaryPoint(0.0), 0.1)), DomainError);
    // a box that wraps through angle 0
    const Region W = region_intersect(box_of_arc(Arc(-0.1, 0.125)), box_of_arc(Arc(two_pi - 0.1, 0.0625)));
    EXPECT_NEAR(W.angles.measure(), two_pi * 0.0625, 1e-12);
}

TEST(RegionQuadrature, AdditiveAndMonotone) {
    auto field = [](cplx z) { return std::norm(1.0 + z) * std::pow(1.0 - std::norm(z), 0.3); };
    const QuadratureConfig q;
    const double whole = integrate_region(field, box_of_arc(Arc(0.5, 0.25)), plain, q).value;
    // split the angular span into halves at the same depth
    Region left = box_of_arc(Arc(0.5, 0.25)), right = left;
    left.angles = AngularSet::interval(0.5 - pi * 0.25, 0.5);
    right.angles = AngularSet::interval(0.5, 0.5 + pi * 0.25);
    const double parts = integrate_region(field, left, plain, q).value + integrate_region(field, right, plain, q).value;
    EXPECT_NEAR(whole / parts, 1.0, 1e-8);
    double prev = 0.0;
    for (double L : {1.0 / 64, 1.0 / 16, 0.25, 0.5, 1.0}) {
        const double v = integrate_region(field, box_of_arc(Arc(0.5, L)), plain, q).value;
        EXPECT_GT(v, prev);
        prev = v;
    }
    EXPECT_LT(prev, integrate_disc(field, plain, q).value + 1e-12);
}

TEST(ArcQuadrature, ConstantAndChordSquared) {
    const QuadratureConfig q;
    auto one = [](BoundaryPoint, BoundaryPoint) { return 1.0; };
    EXPECT_NEAR(arc_double_integral(one, Arc(0.4, 0.25), 0.0, plain, q).value, std::pow(pi / 2, 2), 1e-10);
    auto chord2 = [](BoundaryPoint u, BoundaryPoint v) { return std::norm(u.z() - v.z()); };
    EXPECT_NEAR(arc_double_integral(chord2, Arc(0.0, 1.0), 0.0, plain, q).value, 2.0 * two_pi * two_pi, 1e-9);
}

TEST(ArcQuadrature, IntegrableDiagonalSingularity) {
    // int_0^{2pi} int_0^{2pi} |e^{iu} - e^{iv}|^{-b} = 2pi 2^{1-b} B(1/2, (1-b)/2)
    const double b = 0.5;
    auto field = [b](BoundaryPoint u, BoundaryPoint v) { return std::pow(std::abs(u.z() - v.z()), -b); };
    const double expect = two_pi * std::exp2(1.0 - b) * beta_fn(0.5, 0.5 * (1.0 - b));
    const Integral I = arc_double_integral(field, Arc(0.0, 1.0), b, plain, QuadratureConfig{});
    EXPECT_NEAR(I.value / expect, 1.0, 1e-6);
    EXPECT_THROW(arc_double_integral(field, Arc(0.0, 1.0), 1.0, plain, QuadratureConfig{}), DomainError);
}

TEST(Quadrature, Validation) {
    EXPECT_THROW(Arc(0.0, 0.0), DomainError);
    EXPECT_THROW(Arc(0.0, 1.5), DomainError);
    EXPECT_THROW(lune(BoundaryPoint(0.0), 0.0), DomainError);
    EXPECT_THROW(box_of_point(DiscPoint(0.6, 0.8)), DomainError);
}

TEST(Quadrature, RefinementReducesDifference) {
    auto field = [](cplx z) { return std::pow(1.0 - std::norm(z), -0.5); };
    QuadratureConfig q;
    q.tail = TailPolicy::Omit;
    const double exact = 2.0;  // int_0^1 (1-t)^{-1/2} dt
    const double e1 = std::fabs(integrate_disc(field, plain, q).value - exact);
    const double e2 = std::fabs(integrate_disc(field, plain, q.refined()).value - exact);
    EXPECT_LT(e2, e1);
    q.tail = TailPolicy::Extrapolate;
    EXPECT_NEAR(integrate_disc(field, plain, q).value, exact, 1e-8);
}
