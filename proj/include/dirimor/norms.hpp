#pragma once

#include "dirimor/core.hpp"
#include "dirimor/fft.hpp"
#include "dirimor/function.hpp"
#include "dirimor/parallel.hpp"
#include "dirimor/quadrature.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

namespace dirimor {

// ---------------------------------------------------------------------------
// Trend classification

/** \brief Least-squares slope of log-values against grid levels. */
struct TrendFit {
    double slope = 0.0;
    bool unbounded = false;
};

inline double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2) return 0.0;
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

/** \brief Pearson correlation of two equally long samples. */
inline double correlation(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2) return 0.0;
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return (sxx > 0.0 && syy > 0.0) ? sxy / std::sqrt(sxx * syy) : 0.0;
}

/**
 * \brief Slope of log(y) against x over the last `window` positive samples.
 *
 * Classified unbounded when the slope exceeds `threshold`.
 */
inline TrendFit classify_trend(const std::vector<double>& x, const std::vector<double>& y, std::size_t window = 5,
                               double threshold = 0.1) {
    std::vector<double> xs, ls;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
        if (y[i] > 0.0 && std::isfinite(y[i])) {
            xs.push_back(x[i]);
            ls.push_back(std::log(y[i]));
        }
    if (xs.size() > window) {
        xs.erase(xs.begin(), xs.end() - static_cast<long>(window));
        ls.erase(ls.begin(), ls.end() - static_cast<long>(window));
    }
    TrendFit t;
    t.slope = least_squares_slope(xs, ls);
    t.unbounded = t.slope > threshold;
    return t;
}

inline const char* trend_label(bool unbounded) { return unbounded ? "unbounded-trend" : "finite-trend"; }

// ---------------------------------------------------------------------------
// Parameter grids

/** \brief Grids for suprema over a (and w) in the disc and over boundary arcs. */
struct ScanGrid {
    int K_a = 10;          ///< a-radii 1-2^-k, k = 0..K_a
    int a_angles = 8;      ///< angular count at k is a_angles * 2^k
    int K_I = 12;          ///< arc lengths 2^-j, j = 0..K_I
    int arc_centers = 64;  ///< N_c equispaced arc centers
    int K_w = 3;           ///< w-radii for the GPCM scan
    int w_angles = 8;
    int hinf_angles = 64;  ///< floor on angular samples per radius in hinf_sup
    int workers = 1;

    ScanGrid refined() const {
        ScanGrid g = *this;
        g.K_a += 1;
        g.K_I += 1;
        g.K_w += 1;
        return g;
    }
};

/** \brief One ring of the a-grid; k = 0 is the single point a = 0. */
struct ARing {
    int k = 0;
    double rho = 0.0;
    int count = 1;

    cplx point(int m) const { return std::polar(rho, two_pi * m / count); }
};

inline std::vector<ARing> a_rings(int K, int base) {
    std::vector<ARing> out;
    out.push_back({0, 0.0, 1});
    for (int k = 1; k <= K; ++k) out.push_back({k, 1.0 - std::ldexp(1.0, -k), base << k});
    return out;
}

struct ArcEntry {
    int level = 0;
    Arc arc;
};

/** \brief Dyadic arcs; the full circle appears once. */
inline std::vector<ArcEntry> arc_grid(const ScanGrid& g) {
    std::vector<ArcEntry> out;
    out.push_back({0, Arc(0.0, 1.0)});
    for (int j = 1; j <= g.K_I; ++j)
        for (int m = 0; m < g.arc_centers; ++m) out.push_back({j, Arc(two_pi * m / g.arc_centers, std::ldexp(1.0, -j))});
    return out;
}

// ---------------------------------------------------------------------------
// Reports

/** \brief Grid point attaining a reported supremum. */
struct GridPoint {
    enum class Kind { None, Point, Arc } kind = Kind::None;
    cplx point{0.0, 0.0};
    Arc arc;
    int level = 0;

    static GridPoint at(cplx z, int level) {
        GridPoint g;
        g.kind = Kind::Point;
        g.point = z;
        g.level = level;
        return g;
    }
    static GridPoint on(const Arc& I, int level) {
        GridPoint g;
        g.kind = Kind::Arc;
        g.arc = I;
        g.level = level;
        return g;
    }
};

/** \brief A computed quantity with maximizer, grid description and refinement delta. */
struct NormReport {
    std::string quantity;
    double value = 0.0;
    GridPoint maximizer;
    std::string grid;
    double refinement_delta = 0.0;
    std::vector<std::string> flags;
    std::vector<double> level_values;  ///< max of the quantity at each grid level
    TrendFit trend;

    bool has_flag(const std::string& f) const { return std::find(flags.begin(), flags.end(), f) != flags.end(); }
    void add_flag(const std::string& f) {
        if (!has_flag(f)) flags.push_back(f);
    }
    void set_delta(double coarse) {
        const double scale = std::max(std::fabs(value), 1e-300);
        refinement_delta = value == coarse ? 0.0 : std::fabs(value - coarse) / scale;
    }
    void classify() {
        std::vector<double> x(level_values.size());
        std::iota(x.begin(), x.end(), 0.0);
        trend = classify_trend(x, level_values);
        if (trend.unbounded) add_flag("unbounded-trend");
    }
};

namespace detail {

inline std::string grid_a_text(const ScanGrid& g, const QuadratureConfig& q) {
    return "a-radii 1-2^-k k=0.." + std::to_string(g.K_a) + ", angles " + std::to_string(g.a_angles) +
           "*2^k, depth " + std::to_string(q.depth);
}
inline std::string grid_arc_text(const ScanGrid& g, const QuadratureConfig& q) {
    return "arcs |I|=2^-j j=0.." + std::to_string(g.K_I) + ", " + std::to_string(g.arc_centers) +
           " centers, depth " + std::to_string(q.depth);
}
inline std::string grid_disc_text(const QuadratureConfig& q) {
    return "disc depth " + std::to_string(q.depth) + ", radial order " + std::to_string(q.radial_order);
}

inline void check_p(double p) {
    if (!(p > 0.0 && p <= 1.0)) throw DomainError("p must lie in (0,1]");
}

inline void merge_flags(std::vector<std::string>& into, const std::vector<std::string>& from) {
    for (const auto& f : from)
        if (std::find(into.begin(), into.end(), f) == into.end()) into.push_back(f);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Exact sector energies for sparse Taylor data

/**
 * \brief int over r0 <= |z| < r1, arg z in a set, of |f'|^2 (1-|z|^2)^p dm for a polynomial f.
 *
 * Sum over pairs of derivative terms of incomplete beta radial moments
 * times closed-form angular moments.
 */
class TaylorEnergy {
public:
    TaylorEnergy(const TaylorData& t, double p) : p_(p) {
        for (const auto& [e, c] : t.terms)
            if (e >= 1 && c != cplx(0.0)) {
                exps_.push_back(e - 1);
                coef_.push_back(static_cast<double>(e) * c);
            }
    }

    std::size_t terms() const { return exps_.size(); }

    /// Radial moments int_{r0}^{r1} r^{e_m+e_n+1} (1-r^2)^p dr for every pair m <= n.
    std::vector<double> radial_table(double r0, double r1) const {
        const std::size_t n = exps_.size();
        std::vector<double> R(n * n, 0.0);
        const double u0 = r0 * r0, u1 = r1 * r1;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                const double alpha = 0.5 * static_cast<double>(exps_[i] + exps_[j]) + 1.0;
                const double hi = u1 < 1.0 ? boost::math::betac(alpha, p_ + 1.0, u1) : 0.0;
                const double lo = u0 > 0.0 ? boost::math::betac(alpha, p_ + 1.0, u0) : boost::math::beta(alpha, p_ + 1.0);
                R[i * n + j] = 0.5 * (lo - hi);
            }
        return R;
    }

    double sector(const std::vector<double>& R, const AngularSet& set) const {
        const std::size_t n = exps_.size();
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                const double d = static_cast<double>(exps_[i] - exps_[j]);
                const cplx A = angular_moment(set, d);
                if (A == cplx(0.0)) continue;
                const double t = std::real(coef_[i] * std::conj(coef_[j]) * A) * R[i * n + j];
                total += i == j ? t : 2.0 * t;
            }
        return total / pi;
    }

    double sector(double r0, double r1, const AngularSet& set) const { return sector(radial_table(r0, r1), set); }

    /// int_set e^{i d theta} d theta.
    static cplx angular_moment(const AngularSet& set, double d) {
        if (set.full) return d == 0.0 ? cplx(two_pi) : cplx(0.0);
        cplx out = 0.0;
        for (const auto& [a, b] : set.intervals) {
            if (d == 0.0)
                out += b - a;
            else
                out += (std::polar(1.0, d * b) - std::polar(1.0, d * a)) / cplx(0.0, d);
        }
        return out;
    }

private:
    double p_;
    std::vector<long long> exps_;
    std::vector<cplx> coef_;
};

/** \brief Taylor data small enough for the exact pairwise sector formula. */
inline const TaylorData* sparse_taylor(const AnalyticFunction& f, std::size_t max_terms = 64) {
    const TaylorData* t = f.taylor();
    if (!t || t->terms.size() > max_terms) return nullptr;
    return t;
}

/** \brief Outer radius of a sector with n levels from r0 when the tail is omitted. */
inline double omitted_outer_radius(double r0, int n) { return 1.0 - (1.0 - r0) * std::ldexp(1.0, -n); }

// ---------------------------------------------------------------------------
// Weighted derivative measure

/** \brief d mu_g = |g'|^2 (1-|z|^2)^p dm. */
class WeightedDerivativeMeasure {
public:
    WeightedDerivativeMeasure(AnalyticFunction g, double p, QuadratureConfig q = {}) : g_(std::move(g)), p_(p), q_(q) {
        detail::check_p(p);
        if (const TaylorData* t = sparse_taylor(g_)) taylor_.emplace_back(*t, p);
    }

    const AnalyticFunction& symbol() const { return g_; }
    double p() const { return p_; }
    bool exact() const { return !taylor_.empty(); }

    double density(cplx z) const { return std::norm(g_.deriv(z)) * std::pow(one_minus_mod2(z), p_); }

    /// mu(R) with the exact Taylor formula for sector regions when available.
    Integral mass(const Region& R) const {
        if (R.empty()) {
            Integral out;
            out.flags.push_back("empty");
            return out;
        }
        if (g_.is_constant()) return {};
        if (exact() && R.kind != RegionKind::Lune) {
            Integral out;
            const int n = sector_level_count(R.r0, q_);
            if (q_.tail == TailPolicy::Omit) {
                out.value = taylor_[0].sector(R.r0, omitted_outer_radius(R.r0, n), R.angles);
                out.coarse = taylor_[0].sector(R.r0, omitted_outer_radius(R.r0, n - 1), R.angles);
                out.flags.push_back("tail-omitted");
            } else {
                out.value = taylor_[0].sector(R.r0, 1.0, R.angles);
                out.coarse = out.value;
            }
            out.error = std::fabs(out.value - out.coarse);
            return out;
        }
        return integrate_region([this](cplx z) { return density(z); }, R, g_.resolution(), q_);
    }

    /// Exact sector masses sharing one radial table; requires exact().
    std::vector<double> radial_table(double r0) const {
        const int n = sector_level_count(r0, q_);
        const double r1 = q_.tail == TailPolicy::Omit ? omitted_outer_radius(r0, n) : 1.0;
        return taylor_[0].radial_table(r0, r1);
    }
    double exact_sector(const std::vector<double>& table, const AngularSet& set) const {
        return taylor_[0].sector(table, set);
    }

private:
    AnalyticFunction g_;
    double p_;
    QuadratureConfig q_;
    std::vector<TaylorEnergy> taylor_;
};

// ---------------------------------------------------------------------------
// Dirichlet norms

/** \brief sqrt(|f(0)|^2 + int |f'|^2 (1-|z|^2)^p dm) on the generic disc grid. */
inline NormReport dirichlet_norm(const AnalyticFunction& f, double p, const QuadratureConfig& q = {}) {
    detail::check_p(p);
    NormReport rep;
    rep.quantity = "dp";
    rep.grid = detail::grid_disc_text(q);
    const double f0 = std::norm(f(0.0));
    if (f.is_constant()) {
        rep.value = std::sqrt(f0);
        return rep;
    }
    const Integral I = integrate_disc(
        [&](cplx z) { return std::norm(f.deriv(z)) * std::pow(one_minus_mod2(z), p); }, f.resolution(), q,
        std::ldexp(1.0, static_cast<int>(-q.depth * (p + 1.0))));
    rep.value = std::sqrt(f0 + I.value);
    rep.set_delta(std::sqrt(f0 + std::max(0.0, I.coarse)));
    rep.flags = I.flags;
    return rep;
}

/** \brief Coefficient oracle: sqrt(|a_0|^2 + sum n^2 |a_n|^2 B(n, p+1)). */
inline double dirichlet_norm_coeff(const std::vector<cplx>& a, double p) {
    detail::check_p(p);
    if (a.empty()) return 0.0;
    double s = std::norm(a[0]);
    for (std::size_t n = 1; n < a.size(); ++n) {
        const double nn = static_cast<double>(n);
        s += nn * nn * std::norm(a[n]) * boost::math::beta(nn, p + 1.0);
    }
    return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// Hyperbolic translates

enum class TranslateRoute { ChangeOfVariables, Translate };

/** \brief T^2(a) = ||f o phi_a - f(a)||^2_{D_p} as an integral with error estimate. */
inline Integral translate_energy(const AnalyticFunction& f, double p, DiscPoint a, const QuadratureConfig& q = {},
                                 TranslateRoute route = TranslateRoute::ChangeOfVariables) {
    detail::check_p(p);
    if (f.is_constant()) return {};
    const MobiusMap phi(a);
    if (route == TranslateRoute::Translate) {
        const AnalyticFunction g = mobius_translate(f, a);
        return integrate_disc([&](cplx z) { return std::norm(g.deriv(z)) * std::pow(one_minus_mod2(z), p); },
                              g.resolution(), q);
    }
    Resolution res = f.resolution();
    if (phi.has_pole()) res = res.with_focus(phi.pole(), 1.0);
    if (res.band && phi.has_pole()) {
        // the weight's ring spectrum decays like (|a| r)^m; its width adds to that of |f'|^2
        const double s = a.modulus();
        res.band = [band = res.band, s](double r) {
            return band(r) + std::ceil(std::log(1e-13) / std::log(std::max(s * r, 1e-300)));
        };
    }
    return integrate_disc(
        [&](cplx z) { return std::norm(f.deriv(z)) * std::pow(phi.one_minus_mod2_image(z), p); }, res, q);
}

inline double translate_seminorm(const AnalyticFunction& f, double p, DiscPoint a, const QuadratureConfig& q = {},
                                 TranslateRoute route = TranslateRoute::ChangeOfVariables) {
    return std::sqrt(std::max(0.0, translate_energy(f, p, a, q, route).value));
}

/** \brief T^2 over the whole a-grid, with the values one refinement step coarser. */
struct TranslateScan {
    std::vector<ARing> rings;
    std::vector<std::vector<double>> energy;
    std::vector<std::vector<double>> coarse;
    std::size_t unresolved_tails = 0;
};

namespace detail {

struct RadialNode {
    int level;
    double r;
    double w;        ///< h * gauss weight * r / pi
    double r_outer;  ///< outer radius of the sub-panel
};

inline std::vector<RadialNode> disc_radial_nodes(const Resolution& res, const QuadratureConfig& q) {
    std::vector<RadialNode> out;
    const GaussRule& g = gauss_legendre(q.radial_order);
    for (int l = 0; l < q.depth; ++l) {
        const double lo = 1.0 - std::ldexp(1.0, -l), hi = 1.0 - std::ldexp(1.0, -l - 1);
        for (const auto& [a, b] : level_subpanels(lo, hi, res, q)) {
            const double h = 0.5 * (b - a), m = 0.5 * (a + b);
            for (int i = 0; i < g.order(); ++i) {
                const double r = m + h * g.x[i];
                out.push_back({l, r, h * g.w[i] * r / pi, b});
            }
        }
    }
    return out;
}

inline long ring_sample_count(const Resolution& res, const RadialNode& node, const QuadratureConfig& q) {
    double n = q.angular_min;
    if (!res.known) {
        n = std::max(n, 32.0 * std::ldexp(1.0, node.level));
    } else {
        n = std::max(n, 2.0 * res.bandwidth(node.r_outer) + 2.0);
        const double fs = res.focus_scale(node.r_outer);
        if (std::isfinite(fs)) n = std::max(n, q.oversample * node.r / std::max(fs, 1e-300));
    }
    if (n > double(1 << 26)) throw QuadratureFailure("ring resolution exceeds 2^26 samples", cplx(node.r, 0.0));
    return pow2_ceil(n);
}

/// Real Fourier coefficients of phi -> [(1-rho^2)(1-r^2)/|1-rho r e^{i phi}|^2]^p.
inline std::vector<double> compute_kernel_coefficients(double rho, double r, double p, const QuadratureConfig& q) {
    const double x = rho * r;
    const double d = -std::log(x);
    const long N = pow2_ceil(std::max(64.0, 2.0 * q.oversample / d));
    const double c = (1.0 - rho) * (1.0 + rho) * (1.0 - r) * (1.0 + r);
    fft::Buffer<double> buf(N);
    for (long n = 0; n < N; ++n) {
        const double s = std::sin(pi * n / N);
        buf[n] = std::pow(c / ((1.0 - x) * (1.0 - x) + 4.0 * x * s * s), p);
    }
    const auto coef = fft::real_coefficients(buf);
    std::vector<double> out(coef.size());
    for (std::size_t i = 0; i < coef.size(); ++i) out[i] = coef[i].real();
    return out;
}

/// Process-wide cache of kernel coefficients; cleared when it outgrows its budget.
class KernelBank {
public:
    static KernelBank& instance() {
        static KernelBank bank;
        return bank;
    }

    std::shared_ptr<const std::vector<double>> get(double rho, double r, double p, const QuadratureConfig& q) {
        const Key key{rho, r, p, q.oversample};
        {
            std::lock_guard<std::mutex> lock(mtx_);
            auto it = map_.find(key);
            if (it != map_.end()) return it->second;
        }
        auto v = std::make_shared<const std::vector<double>>(compute_kernel_coefficients(rho, r, p, q));
        std::lock_guard<std::mutex> lock(mtx_);
        if (held_ + v->size() > budget_) {
            map_.clear();
            held_ = 0;
        }
        held_ += v->size();
        return map_.emplace(key, v).first->second;
    }

private:
    using Key = std::tuple<double, double, double, double>;
    std::mutex mtx_;
    std::map<Key, std::shared_ptr<const std::vector<double>>> map_;
    std::size_t held_ = 0;
    std::size_t budget_ = std::size_t(1) << 25;  // doubles
};

inline std::shared_ptr<const std::vector<double>> kernel_coefficients(double rho, double r, double p,
                                                                      const QuadratureConfig& q) {
    return KernelBank::instance().get(rho, r, p, q);
}

/// Low-order Fourier coefficients of |f'|^2 on the circle |z| = node.r, nu = 0..min(NF/2, B).
/// Uses NF uniform samples, or graded Gauss panels with a nonuniform transform when
/// the function's sharpest feature needs far more samples than the B modes kept.
inline std::vector<cplx> ring_coefficients(const AnalyticFunction& f, const Resolution& res, const RadialNode& node,
                                           long NF, long B, const QuadratureConfig& q) {
    auto field = [&](double t) {
        const cplx z = std::polar(node.r, t);
        const double v = std::norm(f.deriv(z));
        if (!std::isfinite(v)) throw QuadratureFailure("non-finite field sample", z);
        return v;
    };
    if (res.known && NF > 4 * B) {
        const std::size_t budget = static_cast<std::size_t>(NF / 2);
        const double width = std::min(pi / 2, 1.0 * q.panel_order / static_cast<double>(B));
        const auto panels = graded_panels(0.0, two_pi, node.r, res, q, width, 2 * budget / q.panel_order + 1);
        const std::size_t n = panels.size() * static_cast<std::size_t>(q.panel_order);
        if (n < budget) {
            LineRule rule;
            const GaussRule& g = gauss_legendre(q.panel_order);
            for (const auto& [a, b] : panels) rule.append(a, b, g);
            std::vector<double> c(rule.size());
            for (std::size_t j = 0; j < rule.size(); ++j) c[j] = rule.w[j] * field(rule.t[j]) / two_pi;
            return fft::nonuniform_coefficients(rule.t, c, B);
        }
    }
    fft::Buffer<double> F(NF);
    for (long n = 0; n < NF; ++n) F[n] = field(two_pi * n / NF);
    auto Fh = fft::real_coefficients(F);
    Fh.resize(std::min<std::size_t>(static_cast<std::size_t>(NF / 2), static_cast<std::size_t>(B) + 1));
    return Fh;
}

}  // namespace detail

/**
 * \brief T^2(a) at every a-grid point by angular convolution on each quadrature ring.
 *
 * On a ring |z| = r the weight (1-|phi_a(z)|^2)^p depends on arg z - arg a only,
 * so one FFT of |f'|^2 per ring serves every a on a grid circle.
 */
inline TranslateScan scan_translates(const AnalyticFunction& f, double p, const ScanGrid& grid,
                                     const QuadratureConfig& q = {}) {
    detail::check_p(p);
    TranslateScan out;
    out.rings = a_rings(grid.K_a, grid.a_angles);
    const std::size_t nr = out.rings.size();
    out.energy.assign(nr, {});
    out.coarse.assign(nr, {});
    for (std::size_t k = 0; k < nr; ++k) {
        out.energy[k].assign(out.rings[k].count, 0.0);
        out.coarse[k].assign(out.rings[k].count, 0.0);
    }
    if (f.is_constant()) return out;

    const Resolution res = f.resolution();
    const QuadratureConfig qa = adapted(res, q);
    const auto nodes = detail::disc_radial_nodes(res, qa);
    const int J = qa.depth;
    // levels[k][m][l]
    std::vector<std::vector<std::vector<double>>> levels(nr);
    for (std::size_t k = 0; k < nr; ++k) levels[k].assign(out.rings[k].count, std::vector<double>(J, 0.0));

    for (int l = 0; l < J; ++l) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].level == l) idx.push_back(i);
        // private bins per node: bins[slot][k] has out.rings[k].count entries
        std::vector<std::vector<std::vector<cplx>>> bins(idx.size());
        parallel_for(idx.size(), grid.workers, [&](std::size_t s) {
            const auto& node = nodes[idx[s]];
            std::vector<std::shared_ptr<const std::vector<double>>> kernels(nr);
            long Bk = 1;
            for (std::size_t k = 0; k < nr; ++k)
                if (out.rings[k].k != 0) {
                    kernels[k] = detail::kernel_coefficients(out.rings[k].rho, node.r, p, q);
                    Bk = std::max<long>(Bk, static_cast<long>(kernels[k]->size()) - 1);
                }
            const long NF = detail::ring_sample_count(res, node, q);
            const std::vector<cplx> Fh = detail::ring_coefficients(f, res, node, NF, Bk, q);
            auto& mine = bins[s];
            mine.resize(nr);
            for (std::size_t k = 0; k < nr; ++k) {
                const ARing& ring = out.rings[k];
                mine[k].assign(ring.count, cplx(0.0));
                if (ring.k == 0) {
                    mine[k][0] = node.w * Fh[0] * std::pow((1.0 - node.r) * (1.0 + node.r), p);
                    continue;
                }
                const auto& Kh = *kernels[k];
                const long B = std::min<long>(static_cast<long>(Fh.size()), static_cast<long>(Kh.size()));
                const long Na = ring.count;
                mine[k][0] += node.w * Fh[0] * Kh[0];
                for (long nu = 1; nu < B; ++nu) {
                    const cplx v = node.w * Fh[nu] * Kh[nu];
                    mine[k][nu % Na] += v;
                    mine[k][(Na - nu % Na) % Na] += std::conj(v);
                }
            }
        });
        for (std::size_t k = 0; k < nr; ++k) {
            std::vector<cplx> acc(out.rings[k].count, cplx(0.0));
            for (std::size_t s = 0; s < idx.size(); ++s)
                for (std::size_t b = 0; b < acc.size(); ++b) acc[b] += bins[s][k][b];
            const auto y = acc.size() == 1 ? acc : fft::backward(acc);
            for (std::size_t m = 0; m < acc.size(); ++m) levels[k][m][l] = two_pi * y[m].real();
        }
    }
    for (std::size_t k = 0; k < nr; ++k)
        for (int m = 0; m < out.rings[k].count; ++m) {
            auto& L = levels[k][m];
            for (double& v : L) v = std::max(v, 0.0);
            bool ok = true;
            out.energy[k][m] = LevelSeries::estimate(L, L.size(), q.tail, q.tail_ratio_max, &ok);
            out.coarse[k][m] = LevelSeries::estimate(L, L.size() - 1, q.tail, q.tail_ratio_max);
            if (!ok && L.back() > 0.0) ++out.unresolved_tails;
        }
    return out;
}

namespace detail {

/// |f(0)| + max over the a-grid of weight(|a|) sqrt(T^2), optionally squared form without |f(0)|.
template <class Weight>
NormReport translate_report(const std::string& name, const AnalyticFunction& f, const TranslateScan& scan,
                            const Weight& weight, bool squared, const ScanGrid& grid, const QuadratureConfig& q) {
    NormReport rep;
    rep.quantity = name;
    rep.grid = grid_a_text(grid, q);
    const double f0 = squared ? 0.0 : std::abs(f(0.0));
    double best = -1.0, best_coarse = 0.0;
    for (std::size_t k = 0; k < scan.rings.size(); ++k) {
        const ARing& ring = scan.rings[k];
        const double w = weight(ring.rho);
        double level_best = 0.0;
        for (int m = 0; m < ring.count; ++m) {
            const double e = std::max(0.0, scan.energy[k][m]);
            const double v = squared ? w * e : w * std::sqrt(e);
            level_best = std::max(level_best, v);
            if (v > best) {
                best = v;
                rep.maximizer = GridPoint::at(ring.point(m), ring.k);
            }
            if (k + 1 < scan.rings.size()) {
                const double c = std::max(0.0, scan.coarse[k][m]);
                best_coarse = std::max(best_coarse, squared ? w * c : w * std::sqrt(c));
            }
        }
        rep.level_values.push_back(level_best);
    }
    rep.value = f0 + std::max(best, 0.0);
    rep.set_delta(f0 + best_coarse);
    if (scan.unresolved_tails) rep.add_flag("tail-unresolved");
    rep.classify();
    return rep;
}

}  // namespace detail

/** \brief |f(0)| + max over the a-grid of (1-|a|^2)^{p(1-lambda)/2} ||f o phi_a - f(a)||_{D_p}. */
inline NormReport dm_norm_translate(const AnalyticFunction& f, const SpaceParams& sp, const ScanGrid& grid = {},
                                    const QuadratureConfig& q = {}) {
    const auto scan = scan_translates(f, sp.p, grid, q);
    const double e = sp.half_growth();
    return detail::translate_report(
        "dm-translate", f, scan, [e](double rho) { return std::pow((1.0 - rho) * (1.0 + rho), e); }, false, grid, q);
}

/** \brief max over the a-grid of (1-|a|^2)^{p(1-lambda)} T^2(a), the squared translate form. */
inline NormReport dm_translate_squared(const AnalyticFunction& f, const SpaceParams& sp, const ScanGrid& grid = {},
                                       const QuadratureConfig& q = {}) {
    const auto scan = scan_translates(f, sp.p, grid, q);
    const double e = sp.growth();
    return detail::translate_report(
        "dm-translate-squared", f, scan, [e](double rho) { return std::pow((1.0 - rho) * (1.0 + rho), e); }, true,
        grid, q);
}

/** \brief |f(0)| + max over the a-grid of (1-|a|)^s ||f o phi_a - f(a)||_{D_p}. */
inline NormReport general_morrey_norm(const AnalyticFunction& f, double p, double s, const ScanGrid& grid = {},
                                      const QuadratureConfig& q = {}) {
    if (!(s >= 0.0)) throw DomainError("Morrey weight exponent must be >= 0");
    const auto scan = scan_translates(f, p, grid, q);
    return detail::translate_report(
        "morrey", f, scan, [s](double rho) { return std::pow(1.0 - rho, s); }, false, grid, q);
}

// ---------------------------------------------------------------------------
// Carleson box quantities

/** \brief int_{S(I)} |f'|^2 (1-|z|^2)^p dm for every arc of the grid. */
struct BoxScan {
    std::vector<ArcEntry> arcs;
    std::vector<double> energy;
    std::vector<double> coarse;
    std::vector<std::string> flags;
};

inline BoxScan scan_boxes(const AnalyticFunction& f, double p, const ScanGrid& grid, const QuadratureConfig& q = {}) {
    detail::check_p(p);
    BoxScan out;
    out.arcs = arc_grid(grid);
    out.energy.assign(out.arcs.size(), 0.0);
    out.coarse.assign(out.arcs.size(), 0.0);
    if (f.is_constant()) return out;
    const WeightedDerivativeMeasure mu(f, p, q);
    std::vector<std::vector<std::string>> flags(out.arcs.size());
    if (mu.exact()) {
        std::map<int, std::pair<std::vector<double>, std::vector<double>>> tables;
        QuadratureConfig qc = q;
        qc.depth -= 1;
        qc.box_min_levels -= 1;
        const WeightedDerivativeMeasure mu_c(f, p, qc);
        for (const auto& e : out.arcs)
            if (!tables.count(e.level)) {
                const double r0 = 1.0 - e.arc.length;
                tables[e.level] = {mu.radial_table(r0), mu_c.radial_table(r0)};
            }
        parallel_for(out.arcs.size(), grid.workers, [&](std::size_t i) {
            const Region R = box_of_arc(out.arcs[i].arc);
            const auto& [t, tc] = tables.at(out.arcs[i].level);
            out.energy[i] = mu.exact_sector(t, R.angles);
            out.coarse[i] = q.tail == TailPolicy::Omit ? mu_c.exact_sector(tc, R.angles) : out.energy[i];
        });
        if (q.tail == TailPolicy::Omit) out.flags.push_back("tail-omitted");
        return out;
    }
    parallel_for(out.arcs.size(), grid.workers, [&](std::size_t i) {
        const Integral I = mu.mass(box_of_arc(out.arcs[i].arc));
        out.energy[i] = I.value;
        out.coarse[i] = I.coarse;
        flags[i] = I.flags;
    });
    for (const auto& fl : flags) detail::merge_flags(out.flags, fl);
    return out;
}

namespace detail {

template <class Weight>
NormReport box_report(const std::string& name, const BoxScan& scan, const Weight& weight, const ScanGrid& grid,
                      const QuadratureConfig& q) {
    NormReport rep;
    rep.quantity = name;
    rep.grid = grid_arc_text(grid, q);
    rep.flags = scan.flags;
    double best = -1.0, best_coarse = 0.0;
    int max_level = 0;
    for (const auto& e : scan.arcs) max_level = std::max(max_level, e.level);
    rep.level_values.assign(max_level + 1, 0.0);
    for (std::size_t i = 0; i < scan.arcs.size(); ++i) {
        const auto& e = scan.arcs[i];
        const double w = weight(e.arc.length);
        const double v = w * std::max(0.0, scan.energy[i]);
        rep.level_values[e.level] = std::max(rep.level_values[e.level], v);
        if (v > best) {
            best = v;
            rep.maximizer = GridPoint::on(e.arc, e.level);
        }
        if (e.level < max_level) best_coarse = std::max(best_coarse, w * std::max(0.0, scan.coarse[i]));
    }
    rep.value = std::max(best, 0.0);
    rep.set_delta(best_coarse);
    rep.classify();
    return rep;
}

}  // namespace detail

/** \brief max over arcs of |I|^{-p lambda} int_{S(I)} |f'|^2 (1-|z|^2)^p dm (not square-rooted). */
inline NormReport dm_seminorm_box(const AnalyticFunction& f, const SpaceParams& sp, const ScanGrid& grid = {},
                                  const QuadratureConfig& q = {}) {
    const auto scan = scan_boxes(f, sp.p, grid, q);
    const double e = sp.p_lambda();
    return detail::box_report(
        sp.lambda == 1.0 ? "qp" : "dm-box", scan, [e](double len) { return std::pow(len, -e); }, grid, q);
}

/** \brief The Q_p Carleson quantity: the box quantity at lambda = 1. */
inline NormReport qp_quantity(const AnalyticFunction& f, double p, const ScanGrid& grid = {},
                              const QuadratureConfig& q = {}) {
    return dm_seminorm_box(f, SpaceParams(p, 1.0), grid, q);
}

/** \brief max over arcs of log(1/|I|)^2 |I|^{-p} int_{S(I)} |g'|^2 (1-|z|^2)^p dm. */
inline NormReport qp_log_quantity(const AnalyticFunction& g, double p, const ScanGrid& grid = {},
                                  const QuadratureConfig& q = {}) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("qp_log_quantity needs 0 < p < 1");
    const auto scan = scan_boxes(g, p, grid, q);
    return detail::box_report(
        "qplog", scan,
        [p](double len) {
            const double L = len >= 1.0 ? 0.0 : std::log(1.0 / len);
            return L * L * std::pow(len, -p);
        },
        grid, q);
}

/** \brief |h|^{-p lambda} int over the lune {|b - z| < h} of |f'|^2 (1-|z|^2)^p dm. */
inline Integral lune_quantity(const AnalyticFunction& f, const SpaceParams& sp, BoundaryPoint b, double h,
                              const QuadratureConfig& q = {}) {
    if (f.is_constant()) return {};
    Integral I = integrate_region(
        [&](cplx z) { return std::norm(f.deriv(z)) * std::pow(one_minus_mod2(z), sp.p); }, lune(b, h),
        f.resolution(), q);
    const double w = std::pow(h, -sp.p_lambda());
    I.value *= w;
    I.coarse *= w;
    I.error *= w;
    return I;
}

// ---------------------------------------------------------------------------
// Boundary double integral

/** \brief max over arcs of |I|^{-p lambda} int_I int_I |f(u)-f(v)|^2 / |u-v|^{2-p} |du| |dv|. */
inline NormReport boundary_double_seminorm(const AnalyticFunction& f, const SpaceParams& sp,
                                           const ScanGrid& grid = {}, const QuadratureConfig& q = {}) {
    if (!f.has_boundary_eval())
        throw UnsupportedFunction("boundary_double_seminorm needs boundary evaluation: " + f.describe());
    BoxScan scan;
    scan.arcs = arc_grid(grid);
    scan.energy.assign(scan.arcs.size(), 0.0);
    scan.coarse.assign(scan.arcs.size(), 0.0);
    if (!f.is_constant()) {
        const Resolution res = f.resolution();
        const double ex = 2.0 - sp.p;
        auto F = [&](BoundaryPoint u, BoundaryPoint v) {
            const double dist = 2.0 * std::fabs(std::sin(0.5 * (u.theta - v.theta)));
            return std::norm(f.boundary_eval(u) - f.boundary_eval(v)) / std::pow(dist, ex);
        };
        std::vector<std::vector<std::string>> flags(scan.arcs.size());
        parallel_for(scan.arcs.size(), grid.workers, [&](std::size_t i) {
            const Integral I = arc_double_integral(F, scan.arcs[i].arc, 0.0, res, q);
            scan.energy[i] = I.value;
            scan.coarse[i] = I.coarse;
            flags[i] = I.flags;
        });
        for (const auto& fl : flags) detail::merge_flags(scan.flags, fl);
    }
    const double e = sp.p_lambda();
    return detail::box_report(
        "boundary", scan, [e](double len) { return std::pow(len, -e); }, grid, q);
}

// ---------------------------------------------------------------------------
// Pointwise quantities

/** \brief max over the a-grid of |f(a)| (1-|a|)^{p(1-lambda)/2}. */
inline NormReport growth_envelope(const AnalyticFunction& f, const SpaceParams& sp, const ScanGrid& grid = {}) {
    NormReport rep;
    rep.quantity = "growth";
    rep.grid = "a-radii 1-2^-k k=0.." + std::to_string(grid.K_a) + ", angles " + std::to_string(grid.a_angles) + "*2^k";
    const double e = sp.half_growth();
    double best = -1.0, best_coarse = 0.0;
    for (const auto& ring : a_rings(grid.K_a, grid.a_angles)) {
        const double w = std::pow(1.0 - ring.rho, e);
        double lv = 0.0;
        for (int m = 0; m < ring.count; ++m) {
            const cplx a = ring.point(m);
            const double v = std::abs(f(a)) * w;
            lv = std::max(lv, v);
            if (v > best) {
                best = v;
                rep.maximizer = GridPoint::at(a, ring.k);
            }
        }
        if (ring.k < grid.K_a) best_coarse = std::max(best_coarse, lv);
        rep.level_values.push_back(lv);
    }
    rep.value = best;
    rep.set_delta(best_coarse);
    rep.classify();
    return rep;
}

/** \brief max |g| over radii 1-2^-k and angular samples max(hinf_angles, 8 * 2^k). */
inline NormReport hinf_sup(const AnalyticFunction& g, const ScanGrid& grid = {}) {
    NormReport rep;
    rep.quantity = "hinf";
    rep.grid = "radii 1-2^-k k=0.." + std::to_string(grid.K_a) + ", angles max(" + std::to_string(grid.hinf_angles) +
               ", 8*2^k)";
    double best = -1.0, best_coarse = 0.0;
    for (int k = 0; k <= grid.K_a; ++k) {
        const double r = k == 0 ? 0.0 : 1.0 - std::ldexp(1.0, -k);
        const int n = k == 0 ? 1 : std::max(grid.hinf_angles, 8 << k);
        double lv = 0.0;
        for (int m = 0; m < n; ++m) {
            const cplx z = std::polar(r, two_pi * m / n);
            const double v = std::abs(g(z));
            lv = std::max(lv, v);
            if (v > best) {
                best = v;
                rep.maximizer = GridPoint::at(z, k);
            }
        }
        if (k < grid.K_a) best_coarse = std::max(best_coarse, lv);
        rep.level_values.push_back(lv);
    }
    rep.value = best;
    rep.set_delta(best_coarse);
    rep.classify();
    return rep;
}

// ---------------------------------------------------------------------------
// GPCM

/** \brief Grid of the inner integral over S(w) in the GPCM quantity. */
struct GpcmConfig {
    int levels = 8;           ///< dyadic levels from |w| toward the circle
    int order = 6;            ///< Gauss order radially and per angular panel
    double box_band = 2.0;    ///< angular panels per (1-|z|) scale
    QuadratureConfig mass{};  ///< grid for masses without exact Taylor data
};

namespace detail {

/// Memo of mu over sector regions keyed by (r0, angular intervals).
class MassMemo {
public:
    explicit MassMemo(const WeightedDerivativeMeasure& mu) : mu_(mu) {}

    double mass(const Region& R) {
        if (R.empty()) return 0.0;
        std::vector<double> key{R.r0, R.angles.full ? 1.0 : 0.0};
        for (const auto& [a, b] : R.angles.intervals) {
            key.push_back(a);
            key.push_back(b);
        }
        {
            std::lock_guard<std::mutex> lock(mtx_);
            auto it = memo_.find(key);
            if (it != memo_.end()) return it->second;
        }
        double v;
        if (mu_.exact())
            v = mu_.exact_sector(table(R.r0), R.angles);
        else
            v = mu_.mass(R).value;
        std::lock_guard<std::mutex> lock(mtx_);
        memo_.emplace(std::move(key), v);
        return v;
    }

    std::size_t size() const { return memo_.size(); }

private:
    const std::vector<double>& table(double r0) {
        {
            std::lock_guard<std::mutex> lock(mtx_);
            auto it = tables_.find(r0);
            if (it != tables_.end()) return it->second;
        }
        auto t = mu_.radial_table(r0);
        std::lock_guard<std::mutex> lock(mtx_);
        return tables_.emplace(r0, std::move(t)).first->second;
    }

    const WeightedDerivativeMeasure& mu_;
    std::mutex mtx_;
    std::map<std::vector<double>, double> memo_;
    std::map<double, std::vector<double>> tables_;
};

}  // namespace detail

/**
 * \brief max over the w-grid of (1/mu(S(w))) int_{S(w)} mu(S(z) cap S(w))^2 / (1-|z|^2)^{2+p} dm(z)
 * with d mu = |g'|^2 (1-|z|^2)^p dm.
 */
inline NormReport gpcm_quantity(const AnalyticFunction& g, double p, const ScanGrid& grid = {},
                                const QuadratureConfig& q = {}, const GpcmConfig& gc = {}) {
    detail::check_p(p);
    NormReport rep;
    rep.quantity = "gpcm";
    rep.grid = "w-radii 1-2^-k k=0.." + std::to_string(grid.K_w) + ", angles " + std::to_string(grid.w_angles) +
               "*2^k, inner levels " + std::to_string(gc.levels);
    const auto rings = a_rings(grid.K_w, grid.w_angles);
    if (g.is_constant()) {
        rep.add_flag("degenerate");
        rep.level_values.assign(rings.size(), 0.0);
        return rep;
    }
    QuadratureConfig mq = gc.mass;
    mq.depth = q.depth;
    mq.tail = q.tail;
    const WeightedDerivativeMeasure mu(g, p, mq);
    detail::MassMemo memo(mu);

    QuadratureConfig qi;
    qi.radial_order = gc.order;
    qi.panel_order = gc.order;
    qi.angular_min = 16;
    qi.tail = q.tail;
    qi.tail_ratio_max = q.tail_ratio_max;
    Resolution inner_res;
    const double band = gc.box_band * 0.5 * gc.order;
    inner_res.band = [band](double r) { return band / std::max(1.0 - r, 1e-300); };

    struct Point {
        int level;
        cplx w;
    };
    std::vector<Point> pts;
    for (const auto& ring : rings)
        for (int m = 0; m < ring.count; ++m) pts.push_back({ring.k, ring.point(m)});
    std::vector<double> val(pts.size(), -1.0), val_c(pts.size(), -1.0);
    std::vector<char> unresolved(pts.size(), 0);
    parallel_for(pts.size(), grid.workers, [&](std::size_t i) {
        const Region Sw = box_of_point(pts[i].w);
        const double Mw = memo.mass(Sw);
        if (!(Mw > 0.0)) return;
        auto field = [&](cplx z) {
            const double M = memo.mass(region_intersect(box_of_point(z), Sw));
            return M * M / std::pow(one_minus_mod2(z), 2.0 + p);
        };
        auto L = sector_levels(field, Sw.r0, Sw.angles, inner_res, qi, gc.levels);
        bool ok = true;
        val[i] = LevelSeries::estimate(L, L.size(), qi.tail, qi.tail_ratio_max, &ok) / Mw;
        val_c[i] = LevelSeries::estimate(L, L.size() - 1, qi.tail, qi.tail_ratio_max) / Mw;
        unresolved[i] = !ok && L.back() > 0.0;
    });
    double best = -1.0, best_c = 0.0;
    std::size_t skipped = 0;
    rep.level_values.assign(rings.size(), 0.0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (val[i] < 0.0) {
            ++skipped;
            continue;
        }
        rep.level_values[pts[i].level] = std::max(rep.level_values[pts[i].level], val[i]);
        if (val[i] > best) {
            best = val[i];
            rep.maximizer = GridPoint::at(pts[i].w, pts[i].level);
        }
        if (pts[i].level < grid.K_w) best_c = std::max(best_c, val_c[i]);
        if (unresolved[i]) rep.add_flag("tail-unresolved");
    }
    if (skipped) rep.add_flag("skipped-points:" + std::to_string(skipped));
    if (skipped == pts.size()) {
        rep.add_flag("degenerate");
        return rep;
    }
    rep.value = best;
    rep.set_delta(best_c);
    rep.classify();
    return rep;
}

}  // namespace dirimor
