#pragma once

#include "dirimor/core.hpp"
#include "dirimor/rules.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace dirimor {

/** \brief A singular point outside (or on) the circle that quadrature should grade toward. */
struct Focus {
    cplx point;
    double sharpness = 1.0;
};

/**
 * \brief Resolution hints a function hands to the quadrature layer.
 *
 * `band(r)` bounds the significant Fourier frequencies of f' on |z| = r.
 * A field without hints sets `known = false` and the quadrature falls back
 * to the fixed angular counts of the grid.
 */
struct Resolution {
    bool known = true;
    std::vector<Focus> foci;
    std::function<double(double)> band;

    double bandwidth(double r) const { return band ? band(r) : 0.0; }

    /// Smallest (distance from the circle of radius r to a focus) / sharpness.
    double focus_scale(double r) const {
        double s = std::numeric_limits<double>::infinity();
        for (const auto& f : foci) s = std::min(s, std::max(std::abs(f.point) - r, 0.0) / f.sharpness);
        return s;
    }

    /// Combines hints of factors of a product (bandwidths add).
    static Resolution product(const Resolution& a, const Resolution& b) {
        Resolution out;
        out.known = a.known && b.known;
        out.foci = a.foci;
        out.foci.insert(out.foci.end(), b.foci.begin(), b.foci.end());
        auto fa = a.band, fb = b.band;
        if (fa || fb)
            out.band = [fa, fb](double r) { return (fa ? fa(r) : 0.0) + (fb ? fb(r) : 0.0); };
        return out;
    }

    /// Combines hints of summands (bandwidths take the maximum).
    static Resolution sum(const Resolution& a, const Resolution& b) {
        Resolution out = product(a, b);
        auto fa = a.band, fb = b.band;
        if (fa || fb)
            out.band = [fa, fb](double r) { return std::max(fa ? fa(r) : 0.0, fb ? fb(r) : 0.0); };
        return out;
    }

    Resolution with_focus(cplx point, double sharpness = 1.0) const {
        Resolution out = *this;
        out.foci.push_back({point, sharpness});
        return out;
    }
};

/** \brief Sparse Taylor view: exponent/coefficient pairs plus truncation metadata. */
struct TaylorData {
    std::vector<std::pair<long long, cplx>> terms;
    long long degree = 0;
    double r_max = 1.0;
    double tail_bound = 0.0;
};

/** \brief Implementation interface behind AnalyticFunction. */
class FunctionImpl {
public:
    virtual ~FunctionImpl() = default;
    virtual cplx value(cplx z) const = 0;
    virtual cplx derivative(cplx z) const = 0;
    virtual const TaylorData* taylor() const { return nullptr; }
    virtual bool boundary_evaluable() const { return false; }
    virtual cplx boundary_value(double theta) const { return value(std::polar(1.0, theta)); }
    virtual Resolution resolution() const { return {}; }
    virtual bool is_constant() const { return false; }
    virtual bool boundary_singular() const { return false; }
    /// Order of growth at infinity, used to grade around Mobius poles.
    virtual double growth_order() const { return 1.0; }
    virtual std::string describe() const = 0;
};

/**
 * \brief Immutable handle to an analytic function on the disc.
 *
 * Copies share the implementation; every method is const and thread-safe.
 */
class AnalyticFunction {
public:
    AnalyticFunction() = default;
    explicit AnalyticFunction(std::shared_ptr<const FunctionImpl> impl) : impl_(std::move(impl)) {}

    cplx operator()(cplx z) const { return impl_->value(z); }
    cplx eval(DiscPoint z) const { return impl_->value(z.z()); }
    cplx deriv(cplx z) const { return impl_->derivative(z); }
    cplx deriv(DiscPoint z) const { return impl_->derivative(z.z()); }

    const TaylorData* taylor() const { return impl_->taylor(); }
    bool has_boundary_eval() const { return impl_->boundary_evaluable(); }
    cplx boundary_eval(BoundaryPoint b) const {
        if (!impl_->boundary_evaluable())
            throw UnsupportedFunction("function has no boundary evaluation: " + describe());
        return impl_->boundary_value(b.theta);
    }
    Resolution resolution() const { return impl_->resolution(); }
    bool is_constant() const { return impl_->is_constant(); }
    bool boundary_singular() const { return impl_->boundary_singular(); }
    double growth_order() const { return impl_->growth_order(); }
    std::string describe() const { return impl_->describe(); }

    /// First focus lying on the circle, if any.
    std::optional<BoundaryPoint> singular_direction() const {
        for (const auto& f : resolution().foci)
            if (std::abs(std::abs(f.point) - 1.0) < 1e-12) return BoundaryPoint(std::arg(f.point));
        return std::nullopt;
    }

    const FunctionImpl& impl() const { return *impl_; }
    const std::shared_ptr<const FunctionImpl>& shared() const { return impl_; }
    explicit operator bool() const { return static_cast<bool>(impl_); }

private:
    std::shared_ptr<const FunctionImpl> impl_;
};

namespace detail {

inline std::string fmt_num(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

inline std::string fmt_cplx(cplx c) {
    std::ostringstream os;
    os.precision(12);
    os << c.real() << (c.imag() < 0 ? "-" : "+") << std::fabs(c.imag()) << "i";
    return os.str();
}

class TaylorImpl final : public FunctionImpl {
public:
    explicit TaylorImpl(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {
        while (c_.size() > 1 && c_.back() == cplx(0.0)) c_.pop_back();
        if (c_.empty()) c_.push_back(0.0);
        data_.degree = static_cast<long long>(c_.size()) - 1;
        for (std::size_t n = 0; n < c_.size(); ++n)
            if (c_[n] != cplx(0.0)) data_.terms.emplace_back(static_cast<long long>(n), c_[n]);
    }
    cplx value(cplx z) const override {
        cplx acc = 0.0;
        for (std::size_t n = c_.size(); n-- > 0;) acc = acc * z + c_[n];
        return acc;
    }
    cplx derivative(cplx z) const override {
        cplx acc = 0.0;
        for (std::size_t n = c_.size(); n-- > 1;) acc = acc * z + static_cast<double>(n) * c_[n];
        return acc;
    }
    const TaylorData* taylor() const override { return &data_; }
    bool boundary_evaluable() const override { return true; }
    Resolution resolution() const override {
        Resolution r;
        const double d = static_cast<double>(data_.degree);
        if (d > 0) r.band = [d](double) { return d; };
        return r;
    }
    bool is_constant() const override { return data_.degree == 0; }
    double growth_order() const override { return std::max<double>(1.0, static_cast<double>(data_.degree)); }
    std::string describe() const override {
        std::string s = "taylor:";
        for (std::size_t n = 0; n < c_.size(); ++n) {
            if (n) s += ",";
            s += c_[n].imag() == 0.0 ? fmt_num(c_[n].real()) : fmt_cplx(c_[n]);
        }
        return s;
    }

private:
    std::vector<cplx> c_;
    TaylorData data_;
};

class GapImpl final : public FunctionImpl {
public:
    GapImpl(std::vector<cplx> a, double r_max, double tail, std::string label)
        : a_(std::move(a)), label_(std::move(label)) {
        data_.r_max = r_max;
        data_.tail_bound = tail;
        const int K = static_cast<int>(a_.size());
        data_.degree = K > 0 ? (1LL << K) : 0;
        for (int k = 1; k <= K; ++k)
            if (a_[k - 1] != cplx(0.0)) data_.terms.emplace_back(1LL << k, a_[k - 1]);
    }
    cplx value(cplx z) const override {
        cplx w = z, acc = 0.0;
        for (const cplx& ak : a_) {
            w *= w;
            acc += ak * w;
            if (w == cplx(0.0)) break;
        }
        return acc;
    }
    cplx derivative(cplx z) const override {
        cplx w = z, pk = 1.0, acc = 0.0;
        double n = 1.0;
        for (const cplx& ak : a_) {
            pk *= w;
            w *= w;
            n *= 2.0;
            acc += ak * n * pk;
            if (pk == cplx(0.0)) break;
        }
        return acc;
    }
    const TaylorData* taylor() const override { return &data_; }
    bool boundary_evaluable() const override { return true; }
    Resolution resolution() const override {
        Resolution r;
        auto a = a_;
        r.band = [a](double rad) { return GapImpl::band_at(a, rad); };
        return r;
    }
    bool is_constant() const override { return data_.terms.empty(); }
    double growth_order() const override { return static_cast<double>(std::max<long long>(1, data_.degree)); }
    std::string describe() const override { return label_; }

    /// Largest exponent 2^k whose derivative term is within 1e-5 of the dominant term on |z| = r.
    static double band_at(const std::vector<cplx>& a, double r) {
        const int K = static_cast<int>(a.size());
        if (K == 0) return 0.0;
        if (r >= 1.0) return std::ldexp(1.0, K);
        const double lr = std::log(std::max(r, 1e-300));
        std::vector<double> lm(K);
        double best = -std::numeric_limits<double>::infinity();
        for (int k = 1; k <= K; ++k) {
            const double n = std::ldexp(1.0, k);
            const double mag = std::abs(a[k - 1]);
            lm[k - 1] = mag > 0 ? std::log(mag * n) + (n - 1.0) * lr : -std::numeric_limits<double>::infinity();
            best = std::max(best, lm[k - 1]);
        }
        int top = 0;
        for (int k = 1; k <= K; ++k)
            if (lm[k - 1] >= best + std::log(1e-5)) top = k;
        return std::ldexp(1.0, top);
    }

private:
    std::vector<cplx> a_;
    std::string label_;
    TaylorData data_;
};

class KernelImpl final : public FunctionImpl {
public:
    KernelImpl(cplx c, double s, bool on_circle) : cbar_(std::conj(c)), s_(s), on_circle_(on_circle) {}
    cplx value(cplx z) const override {
        if (is_constant()) return 1.0;
        return std::exp(-s_ * std::log(1.0 - cbar_ * z));
    }
    cplx derivative(cplx z) const override {
        if (is_constant()) return 0.0;
        return s_ * cbar_ * std::exp((-s_ - 1.0) * std::log(1.0 - cbar_ * z));
    }
    bool boundary_evaluable() const override { return is_constant() || !on_circle_; }
    Resolution resolution() const override {
        Resolution r;
        if (!is_constant()) r.foci.push_back({1.0 / cbar_, 1.0 + s_});
        return r;
    }
    bool is_constant() const override { return s_ == 0.0 || cbar_ == cplx(0.0); }
    bool boundary_singular() const override { return on_circle_ && !is_constant(); }
    std::string describe() const override {
        return "kernel:c=" + fmt_cplx(std::conj(cbar_)) + ",s=" + fmt_num(s_);
    }

private:
    cplx cbar_;
    double s_;
    bool on_circle_;
};

class Log1Impl final : public FunctionImpl {
public:
    cplx value(cplx z) const override { return -std::log(1.0 - z); }
    cplx derivative(cplx z) const override { return 1.0 / (1.0 - z); }
    Resolution resolution() const override {
        Resolution r;
        r.foci.push_back({cplx(1.0), 1.0});
        return r;
    }
    bool boundary_singular() const override { return true; }
    std::string describe() const override { return "log1"; }
};

class SumImpl final : public FunctionImpl {
public:
    SumImpl(std::vector<cplx> w, std::vector<AnalyticFunction> f) : w_(std::move(w)), f_(std::move(f)) {
        bool all = !f_.empty();
        for (const auto& fi : f_) all = all && fi.taylor() != nullptr;
        if (all) {
            std::map<long long, cplx> acc;
            for (std::size_t i = 0; i < f_.size(); ++i) {
                const TaylorData* t = f_[i].taylor();
                for (const auto& [n, a] : t->terms) acc[n] += w_[i] * a;
                data_.r_max = std::min(data_.r_max, t->r_max);
                data_.tail_bound += std::abs(w_[i]) * t->tail_bound;
            }
            for (const auto& [n, a] : acc) {
                if (a == cplx(0.0)) continue;
                data_.terms.emplace_back(n, a);
                data_.degree = std::max(data_.degree, n);
            }
            has_taylor_ = true;
        }
    }
    cplx value(cplx z) const override {
        cplx s = 0.0;
        for (std::size_t i = 0; i < f_.size(); ++i) s += w_[i] * f_[i](z);
        return s;
    }
    cplx derivative(cplx z) const override {
        cplx s = 0.0;
        for (std::size_t i = 0; i < f_.size(); ++i) s += w_[i] * f_[i].deriv(z);
        return s;
    }
    const TaylorData* taylor() const override { return has_taylor_ ? &data_ : nullptr; }
    bool boundary_evaluable() const override {
        for (const auto& fi : f_)
            if (!fi.has_boundary_eval()) return false;
        return true;
    }
    cplx boundary_value(double theta) const override {
        cplx s = 0.0;
        for (std::size_t i = 0; i < f_.size(); ++i) s += w_[i] * f_[i].boundary_eval(BoundaryPoint(theta));
        return s;
    }
    Resolution resolution() const override {
        Resolution r;
        for (const auto& fi : f_) r = Resolution::sum(r, fi.resolution());
        return r;
    }
    bool is_constant() const override {
        for (std::size_t i = 0; i < f_.size(); ++i)
            if (w_[i] != cplx(0.0) && !f_[i].is_constant()) return false;
        return true;
    }
    bool boundary_singular() const override {
        for (const auto& fi : f_)
            if (fi.boundary_singular()) return true;
        return false;
    }
    double growth_order() const override {
        double g = 1.0;
        for (const auto& fi : f_) g = std::max(g, fi.growth_order());
        return g;
    }
    std::string describe() const override {
        std::string s = "sum(";
        for (std::size_t i = 0; i < f_.size(); ++i) {
            if (i) s += " + ";
            s += fmt_cplx(w_[i]) + "*" + f_[i].describe();
        }
        return s + ")";
    }

private:
    std::vector<cplx> w_;
    std::vector<AnalyticFunction> f_;
    TaylorData data_;
    bool has_taylor_ = false;
};

class ProductImpl final : public FunctionImpl {
public:
    ProductImpl(AnalyticFunction f, AnalyticFunction g) : f_(std::move(f)), g_(std::move(g)) {}
    cplx value(cplx z) const override { return f_(z) * g_(z); }
    cplx derivative(cplx z) const override { return f_.deriv(z) * g_(z) + f_(z) * g_.deriv(z); }
    bool boundary_evaluable() const override { return f_.has_boundary_eval() && g_.has_boundary_eval(); }
    cplx boundary_value(double theta) const override {
        const BoundaryPoint b(theta);
        return f_.boundary_eval(b) * g_.boundary_eval(b);
    }
    Resolution resolution() const override { return Resolution::product(f_.resolution(), g_.resolution()); }
    bool is_constant() const override { return f_.is_constant() && g_.is_constant(); }
    bool boundary_singular() const override { return f_.boundary_singular() || g_.boundary_singular(); }
    double growth_order() const override { return f_.growth_order() + g_.growth_order(); }
    std::string describe() const override { return "mul(" + g_.describe() + ", " + f_.describe() + ")"; }

private:
    AnalyticFunction f_, g_;
};

class TranslateImpl final : public FunctionImpl {
public:
    TranslateImpl(AnalyticFunction f, DiscPoint a) : f_(std::move(f)), phi_(a), fa_(f_(a.z())) {}
    cplx value(cplx z) const override { return f_(phi_.apply(z)) - fa_; }
    cplx derivative(cplx z) const override { return f_.deriv(phi_.apply(z)) * phi_.derivative(z); }
    bool boundary_evaluable() const override { return f_.has_boundary_eval(); }
    cplx boundary_value(double theta) const override {
        const cplx w = phi_.apply(std::polar(1.0, theta));
        return f_.boundary_eval(BoundaryPoint(std::arg(w))) - fa_;
    }
    Resolution resolution() const override {
        const Resolution src = f_.resolution();
        Resolution r;
        r.known = src.known;
        for (const auto& fo : src.foci) {
            const cplx den = 1.0 - std::conj(phi_.a().z()) * fo.point;
            if (std::abs(den) > 1e-300) r.foci.push_back({phi_.apply(fo.point), fo.sharpness});
        }
        if (phi_.has_pole() && !f_.is_constant()) r.foci.push_back({phi_.pole(), f_.growth_order()});
        if (src.band) {
            // |z| = rad maps into |w| <= (rad+s)/(1+s rad); angles stretch by at most |phi'|
            const double s = std::abs(phi_.a().z());
            r.band = [band = src.band, s](double rad) {
                const double stretch = (1.0 - s * s) / ((1.0 - s * rad) * (1.0 - s * rad));
                return band((rad + s) / (1.0 + s * rad)) * stretch;
            };
        }
        return r;
    }
    bool is_constant() const override { return f_.is_constant(); }
    bool boundary_singular() const override { return f_.boundary_singular(); }
    std::string describe() const override {
        return "translate(" + f_.describe() + ", a=" + fmt_cplx(phi_.a().z()) + ")";
    }

private:
    AnalyticFunction f_;
    MobiusMap phi_;
    cplx fa_;
};

}  // namespace detail

/** \brief Composite Gauss rule on [0,1] for the radial path integral from 0 to z. */
inline LineRule path_rule(cplx z, const Resolution& res, int order = 12) {
    const GaussRule& g = gauss_legendre(order);
    LineRule rule;
    const double rz = std::abs(z);
    if (rz == 0.0) return rule;
    auto ok = [&](double ta, double tb) {
        const double len = (tb - ta) * rz;
        if (tb - ta > 0.25) return false;
        for (const auto& f : res.foci) {
            const cplx A = ta * z, B = tb * z, P = f.point;
            const cplx d = B - A;
            double u = std::real((P - A) * std::conj(d)) / std::norm(d);
            u = std::clamp(u, 0.0, 1.0);
            const double dist = std::abs(P - (A + u * d));
            if (len > dist / f.sharpness) return false;
        }
        const double bw = res.bandwidth(std::min(1.0, tb * rz));
        if (bw > 0 && len * bw > 4.0) return false;
        return true;
    };
    std::vector<std::pair<double, double>> stack{{0.0, 1.0}};
    std::vector<std::pair<double, double>> panels;
    while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        if (ok(a, b) || b - a < 1e-13) {
            panels.emplace_back(a, b);
        } else {
            const double m = 0.5 * (a + b);
            stack.emplace_back(m, b);
            stack.emplace_back(a, m);
        }
    }
    std::sort(panels.begin(), panels.end());
    for (const auto& [a, b] : panels) rule.append(a, b, g);
    return rule;
}

namespace detail {

enum class PathKind { Jg, Ig };

class PathIntegralImpl final : public FunctionImpl {
public:
    PathIntegralImpl(PathKind kind, AnalyticFunction f, AnalyticFunction g)
        : kind_(kind), f_(std::move(f)), g_(std::move(g)), res_(Resolution::product(f_.resolution(), g_.resolution())) {}
    cplx integrand(cplx w) const { return kind_ == PathKind::Jg ? f_(w) * g_.deriv(w) : f_.deriv(w) * g_(w); }
    cplx value(cplx z) const override {
        if (z == cplx(0.0)) return 0.0;
        const LineRule rule = path_rule(z, res_);
        cplx acc = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) acc += rule.w[i] * integrand(rule.t[i] * z);
        return acc * z;
    }
    cplx derivative(cplx z) const override { return integrand(z); }
    bool boundary_evaluable() const override { return f_.has_boundary_eval() && g_.has_boundary_eval(); }
    cplx boundary_value(double theta) const override { return value(std::polar(1.0, theta)); }
    Resolution resolution() const override { return res_; }
    bool is_constant() const override {
        return kind_ == PathKind::Jg ? g_.is_constant() : f_.is_constant();
    }
    bool boundary_singular() const override { return f_.boundary_singular() || g_.boundary_singular(); }
    double growth_order() const override { return f_.growth_order() + g_.growth_order(); }
    std::string describe() const override {
        return std::string(kind_ == PathKind::Jg ? "Jg(" : "Ig(") + g_.describe() + ", " + f_.describe() + ")";
    }

private:
    PathKind kind_;
    AnalyticFunction f_, g_;
    Resolution res_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Constructors

/** \brief Polynomial with the given coefficients a_0, a_1, ... */
inline AnalyticFunction make_taylor(std::vector<cplx> coeffs) {
    return AnalyticFunction(std::make_shared<detail::TaylorImpl>(std::move(coeffs)));
}

inline AnalyticFunction make_constant(cplx c) { return make_taylor({c}); }

/** \brief (1 - conj(c) z)^(-s), principal branch, for an interior c. */
inline AnalyticFunction make_power_kernel(DiscPoint c, double s) {
    if (!(c.modulus() <= 1.0)) throw DomainError("power kernel requires |c| <= 1");
    if (!(s >= 0.0)) throw DomainError("power kernel requires s >= 0");
    const bool on_circle = std::fabs(c.modulus() - 1.0) < 1e-15;
    return AnalyticFunction(std::make_shared<detail::KernelImpl>(c.z(), s, on_circle));
}

/** \brief (1 - conj(c) z)^(-s) for a boundary point c, flagged boundary-singular when s > 0. */
inline AnalyticFunction make_power_kernel(BoundaryPoint c, double s) {
    if (!(s >= 0.0)) throw DomainError("power kernel requires s >= 0");
    return AnalyticFunction(std::make_shared<detail::KernelImpl>(c.z(), s, true));
}

/** \brief log(1/(1-z)), principal branch. */
inline AnalyticFunction make_log1() { return AnalyticFunction(std::make_shared<detail::Log1Impl>()); }

/** \brief Truncation policy for lacunary series. */
struct GapPolicy {
    double r_max = 1.0 - std::ldexp(1.0, -12);
    double tail_tolerance = 1e-8;
};

/**
 * \brief Truncated lacunary series sum_{k=1..K} a_k z^(2^k).
 *
 * The tail bound sum_{k>K} |a_k| R^(2^k) is estimated at R = r_max; the
 * constructor rejects K when that bound exceeds the policy tolerance.
 */
inline AnalyticFunction make_gap_series(const std::function<cplx(int)>& rule, int K, GapPolicy policy = {},
                                        std::string label = "") {
    if (K < 1) throw DomainError("gap series needs K >= 1");
    if (K > 40) throw DomainError("gap series supports K <= 40");
    std::vector<cplx> a(K);
    for (int k = 1; k <= K; ++k) a[k - 1] = rule(k);
    double tail = 0.0;
    const double lr = std::log(policy.r_max);
    for (int k = K + 1; k <= K + 60; ++k) {
        const double term = std::abs(rule(k)) * std::exp(std::ldexp(1.0, k) * lr);
        tail += term;
        if (term < 1e-300) break;
    }
    if (tail > policy.tail_tolerance)
        throw DomainError("gap series K=" + std::to_string(K) + " leaves tail bound " + detail::fmt_num(tail) +
                          " above tolerance at R_max");
    if (label.empty()) label = "gap(K=" + std::to_string(K) + ")";
    return AnalyticFunction(std::make_shared<detail::GapImpl>(std::move(a), policy.r_max, tail, std::move(label)));
}

/** \brief Sum of weighted functions. */
inline AnalyticFunction linear_combination(std::vector<cplx> w, std::vector<AnalyticFunction> f) {
    if (w.size() != f.size()) throw std::invalid_argument("linear_combination size mismatch");
    return AnalyticFunction(std::make_shared<detail::SumImpl>(std::move(w), std::move(f)));
}

/** \brief Pointwise product f g. */
inline AnalyticFunction make_product(const AnalyticFunction& f, const AnalyticFunction& g) {
    return AnalyticFunction(std::make_shared<detail::ProductImpl>(f, g));
}

/** \brief int_0^z f(w) g'(w) dw along the radius. */
inline AnalyticFunction make_jg(const AnalyticFunction& f, const AnalyticFunction& g) {
    return AnalyticFunction(std::make_shared<detail::PathIntegralImpl>(detail::PathKind::Jg, f, g));
}

/** \brief int_0^z f'(w) g(w) dw along the radius. */
inline AnalyticFunction make_ig(const AnalyticFunction& f, const AnalyticFunction& g) {
    return AnalyticFunction(std::make_shared<detail::PathIntegralImpl>(detail::PathKind::Ig, f, g));
}

/** \brief g(z) = f(phi_a(z)) - f(a). */
inline AnalyticFunction mobius_translate(const AnalyticFunction& f, DiscPoint a) {
    return AnalyticFunction(std::make_shared<detail::TranslateImpl>(f, a));
}

}  // namespace dirimor
