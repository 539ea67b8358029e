#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dirimor {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/** \brief Raised when an argument lies outside an operation's domain. */
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/** \brief Raised when a function lacks a capability an operation needs. */
class UnsupportedFunction : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/** \brief A quadrature node produced a non-finite sample. */
class QuadratureFailure : public std::runtime_error {
public:
    QuadratureFailure(const std::string& what, cplx where)
        : std::runtime_error(what + " at (" + std::to_string(where.real()) + ", " +
                             std::to_string(where.imag()) + ")"),
          where_(where) {}
    cplx where() const noexcept { return where_; }

private:
    cplx where_;
};

/** \brief Point of the open unit disc. */
struct DiscPoint {
    double re = 0.0;
    double im = 0.0;

    constexpr DiscPoint() = default;
    constexpr DiscPoint(double r, double i) : re(r), im(i) {}
    DiscPoint(cplx z) : re(z.real()), im(z.imag()) {}  // NOLINT(google-explicit-constructor)

    cplx z() const { return {re, im}; }
    double modulus() const { return std::hypot(re, im); }
    double arg() const { return std::atan2(im, re); }

    /// Builds a point from polar data.
    static DiscPoint polar(double r, double theta) { return DiscPoint(std::polar(r, theta)); }
};

/** \brief Reduces an angle to [0, 2pi). */
inline double wrap_angle(double theta) {
    double t = std::fmod(theta, two_pi);
    if (t < 0) t += two_pi;
    if (t >= two_pi) t = 0.0;
    return t;
}

/** \brief Point of the unit circle, stored by its angle in [0, 2pi). */
struct BoundaryPoint {
    double theta = 0.0;

    BoundaryPoint() = default;
    explicit BoundaryPoint(double t) : theta(wrap_angle(t)) {}

    cplx z() const { return std::polar(1.0, theta); }
};

/** \brief Smallest absolute angular distance between two angles. */
inline double angular_distance(double a, double b) {
    double d = std::fabs(std::remainder(a - b, two_pi));
    return d;
}

/** \brief The pair (p, lambda) with the exponents used in every norm. */
struct SpaceParams {
    double p = 0.5;
    double lambda = 0.5;

    SpaceParams() = default;
    SpaceParams(double p_, double lambda_) : p(p_), lambda(lambda_) {
        if (!(p > 0.0 && p <= 1.0)) throw DomainError("p must lie in (0,1]");
        if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("lambda must lie in [0,1]");
    }

    double p_lambda() const { return p * lambda; }
    double half_growth() const { return p * (1.0 - lambda) / 2.0; }
    double growth() const { return p * (1.0 - lambda); }
};

/** \brief 1-|z|^2 computed without cancellation near the circle. */
inline double one_minus_mod2(cplx z) {
    const double r = std::abs(z);
    return (1.0 - r) * (1.0 + r);
}

/** \brief The disc automorphism z -> (a-z)/(1-conj(a)z). */
class MobiusMap {
public:
    explicit MobiusMap(DiscPoint a) : a_(a.z()) {
        if (!(std::abs(a_) < 1.0)) throw DomainError("Mobius parameter must satisfy |a| < 1");
    }

    DiscPoint a() const { return DiscPoint(a_); }
    cplx apply(cplx z) const { return (a_ - z) / (1.0 - std::conj(a_) * z); }
    cplx derivative(cplx z) const {
        const cplx d = 1.0 - std::conj(a_) * z;
        return -one_minus_mod2(a_) / (d * d);
    }
    /// 1 - |phi_a(z)|^2 through the product formula, accurate near the circle.
    double one_minus_mod2_image(cplx z) const {
        return one_minus_mod2(a_) * one_minus_mod2(z) / std::norm(1.0 - std::conj(a_) * z);
    }
    /// Pole of the map, at infinity when a = 0.
    bool has_pole() const { return a_ != cplx(0.0); }
    cplx pole() const { return 1.0 / std::conj(a_); }

private:
    cplx a_;
};

inline DiscPoint mobius_apply(DiscPoint a, DiscPoint z) {
    if (!(a.modulus() < 1.0)) throw DomainError("mobius_apply requires |a| < 1");
    if (z.modulus() > 1.0 + 1e-15) throw DomainError("mobius_apply requires |z| <= 1");
    return DiscPoint(MobiusMap(a).apply(z.z()));
}

/** \brief Smallest power of two not below n. */
inline long pow2_ceil(double n) {
    long v = 1;
    while (static_cast<double>(v) < n) v <<= 1;
    return v;
}

}  // namespace dirimor
