#pragma once

#include "dirimor/core.hpp"
#include "dirimor/function.hpp"
#include "dirimor/rules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace dirimor {

/** \brief What to do with the part of an integral beyond the last dyadic level. */
enum class TailPolicy { Extrapolate, Omit };

/** \brief Grid parameters shared by every disc, region and arc integral. */
struct QuadratureConfig {
    int depth = 14;               ///< J: dyadic annuli at radii 1-2^-j, j < J
    int radial_order = 8;         ///< Gauss order per radial panel
    int angular_min = 64;         ///< floor on equispaced angular counts
    int panel_order = 8;          ///< Gauss order per angular panel
    double panel_ratio = 1.0;     ///< panel width <= ratio * distance to the nearest focus
    double oversample = 24.0;     ///< equispaced count * focus scale
    int box_min_levels = 6;       ///< dyadic levels inside every Carleson box at least
    int arc_levels = 18;          ///< dyadic levels toward the diagonal in arc double integrals
    int lune_end_levels = 30;     ///< geometric panels toward the lune's ends
    double tail_ratio_max = 0.95; ///< largest level ratio accepted for geometric extrapolation
    int focus_levels = 8;         ///< levels kept beyond the scale of the closest exterior focus
    int max_depth = 40;
    TailPolicy tail = TailPolicy::Extrapolate;

    /// One refinement step: one more dyadic level everywhere.
    QuadratureConfig refined() const {
        QuadratureConfig q = *this;
        q.depth += 1;
        q.box_min_levels += 1;
        q.arc_levels += 1;
        q.focus_levels += 1;
        return q;
    }
};

/** \brief Contributions of successive dyadic levels plus a tail estimate. */
struct LevelSeries {
    std::vector<double> levels;
    double tail = 0.0;
    bool tail_resolved = true;

    double truncated() const {
        double s = 0.0;
        for (double v : levels) s += v;
        return s;
    }
    double value() const { return truncated() + tail; }

    /// Geometric tail after the first n levels; flagged unresolved when the ratio is too close to 1.
    static std::pair<double, bool> tail_after(const std::vector<double>& L, std::size_t n, double rho_max) {
        if (n < 3) return {0.0, false};
        const double a = L[n - 2], b = L[n - 1];
        if (b == 0.0) return {0.0, true};
        if (!(a > 0.0) || !(b > 0.0)) return {0.0, false};
        const double rho = b / a;
        if (!(rho < rho_max)) return {0.0, false};
        return {b * rho / (1.0 - rho), true};
    }

    /// Truncated sum of the first n levels plus the extrapolated tail.
    ///
    /// The geometric tail is refined by an Aitken step over the totals of
    /// the last three depths when their differences shrink geometrically.
    static double estimate(const std::vector<double>& L, std::size_t n, TailPolicy policy, double rho_max,
                           bool* resolved = nullptr) {
        auto partial = [&](std::size_t m) {
            double s = 0.0;
            for (std::size_t i = 0; i < m; ++i) s += L[i];
            return s;
        };
        if (resolved) *resolved = true;
        if (policy == TailPolicy::Omit) return partial(n);
        auto [t0, ok0] = tail_after(L, n, rho_max);
        if (resolved) *resolved = ok0;
        const double v0 = partial(n) + t0;
        if (!ok0 || n < 5) return v0;
        auto [t1, ok1] = tail_after(L, n - 1, rho_max);
        auto [t2, ok2] = tail_after(L, n - 2, rho_max);
        if (!ok1 || !ok2) return v0;
        const double v1 = partial(n - 1) + t1, v2 = partial(n - 2) + t2;
        const double d1 = v0 - v1, d2 = v1 - v2;
        if (d2 == 0.0 || d1 == 0.0) return v0;
        const double mu = d1 / d2;
        if (!(mu > 0.0 && mu < 0.9)) return v0;
        return v0 + d1 * mu / (1.0 - mu);
    }

    static LevelSeries make(std::vector<double> L, TailPolicy policy, double rho_max) {
        LevelSeries s;
        s.levels = std::move(L);
        if (policy == TailPolicy::Extrapolate) {
            bool ok = true;
            const double v = estimate(s.levels, s.levels.size(), policy, rho_max, &ok);
            s.tail = v - s.truncated();
            s.tail_resolved = ok;
        }
        return s;
    }

    /// Value that one fewer level would have produced under the same policy.
    double coarser_value(TailPolicy policy, double rho_max) const {
        if (levels.size() < 2) return value();
        return estimate(levels, levels.size() - 1, policy, rho_max);
    }
};

/** \brief Integral value with error estimate and diagnostic flags. */
struct Integral {
    double value = 0.0;
    double error = 0.0;
    double coarse = 0.0;  ///< value with one fewer dyadic level
    std::vector<std::string> flags;
    LevelSeries series;

    bool has_flag(const std::string& f) const { return std::find(flags.begin(), flags.end(), f) != flags.end(); }
};

inline Integral finish_integral(std::vector<double> levels, const QuadratureConfig& q, double tail_bound_scale) {
    Integral out;
    out.series = LevelSeries::make(std::move(levels), q.tail, q.tail_ratio_max);
    out.value = out.series.value();
    out.coarse = out.series.coarser_value(q.tail, q.tail_ratio_max);
    out.error = std::fabs(out.value - out.coarse);
    if (q.tail == TailPolicy::Omit) {
        out.error += tail_bound_scale;
        out.flags.push_back("tail-omitted");
    } else if (!out.series.tail_resolved && out.series.levels.size() >= 3 && out.series.levels.back() != 0.0) {
        out.flags.push_back("tail-unresolved");
        out.error += std::fabs(out.series.levels.back());
    }
    return out;
}

/**
 * \brief Depth J raised so the grid reaches focus_levels past the closest exterior focus.
 *
 * Level contributions only become geometric once annuli are thinner than the
 * distance from the circle to the nearest singular point.
 */
inline int effective_depth(const Resolution& res, const QuadratureConfig& q) {
    double s = 1.0;
    for (const auto& f : res.foci) {
        const double d = std::abs(f.point) - 1.0;
        if (d > 0.0) s = std::min(s, d);
    }
    if (s >= 1.0) return q.depth;
    const int need = static_cast<int>(std::ceil(std::log2(1.0 / s))) + q.focus_levels;
    return std::min(std::max(q.depth, need), std::max(q.depth, q.max_depth));
}

inline QuadratureConfig adapted(const Resolution& res, const QuadratureConfig& q) {
    QuadratureConfig out = q;
    out.depth = effective_depth(res, q);
    return out;
}

// ---------------------------------------------------------------------------
// Angular sets and regions

/** \brief Subset of angles: the whole circle or a union of at most two intervals. */
struct AngularSet {
    bool full = true;
    std::vector<std::pair<double, double>> intervals;

    static AngularSet circle() { return {}; }
    static AngularSet interval(double a, double b) {
        AngularSet s;
        if (b - a >= two_pi - 1e-15) return s;
        s.full = false;
        s.intervals.emplace_back(a, b);
        return s;
    }
    bool empty() const { return !full && intervals.empty(); }
    double measure() const {
        if (full) return two_pi;
        double m = 0.0;
        for (const auto& [a, b] : intervals) m += b - a;
        return m;
    }
    bool contains(double theta) const {
        if (full) return true;
        for (const auto& [a, b] : intervals) {
            const double t = a + wrap_angle(theta - a);
            if (t <= b) return true;
        }
        return false;
    }

    /// Intersection with wraparound handling.
    static AngularSet intersect(const AngularSet& A, const AngularSet& B) {
        if (A.full) return B;
        if (B.full) return A;
        AngularSet out;
        out.full = false;
        for (const auto& [a1, a2] : A.intervals)
            for (const auto& [b1, b2] : B.intervals)
                for (int k = -1; k <= 1; ++k) {
                    const double shift = std::round((a1 - b1) / two_pi) * two_pi + k * two_pi;
                    const double lo = std::max(a1, b1 + shift), hi = std::min(a2, b2 + shift);
                    if (hi > lo) out.intervals.emplace_back(lo, hi);
                }
        std::sort(out.intervals.begin(), out.intervals.end());
        return out;
    }
};

/** \brief Boundary arc with |I| = arclength / (2 pi). */
struct Arc {
    double center = 0.0;
    double length = 1.0;

    Arc() = default;
    Arc(double c, double len) : center(c), length(len) {
        if (!(len > 0.0 && len <= 1.0)) throw DomainError("arc length must lie in (0,1]");
    }
    double start() const { return center - pi * length; }
    double end() const { return center + pi * length; }
};

enum class RegionKind { BoxOfArc, BoxOfPoint, Lune, Intersection, Empty };

/** \brief Radially outer annular sector, or a lune {|b - z| < h}. */
struct Region {
    RegionKind kind = RegionKind::Empty;
    double r0 = 0.0;
    AngularSet angles;
    double lune_base = 0.0;
    double lune_h = 0.0;

    bool empty() const { return kind == RegionKind::Empty; }
};

inline Region box_of_arc(const Arc& I) {
    Region R;
    R.kind = RegionKind::BoxOfArc;
    R.r0 = 1.0 - I.length;
    R.angles = I.length >= 1.0 ? AngularSet::circle() : AngularSet::interval(I.start(), I.end());
    return R;
}

inline Region box_of_point(DiscPoint w) {
    const double r = w.modulus();
    if (!(r < 1.0)) throw DomainError("box_of_point requires |w| < 1");
    Region R;
    R.kind = RegionKind::BoxOfPoint;
    R.r0 = r;
    const double half = pi * (1.0 - r);
    R.angles = r == 0.0 ? AngularSet::circle() : AngularSet::interval(w.arg() - half, w.arg() + half);
    return R;
}

inline Region lune(BoundaryPoint b, double h) {
    if (!(h > 0.0)) throw DomainError("lune radius must be positive");
    Region R;
    R.kind = RegionKind::Lune;
    R.lune_base = b.theta;
    R.lune_h = h;
    return R;
}

/** \brief Intersection of two sector regions; empty when the angular parts are disjoint. */
inline Region region_intersect(const Region& A, const Region& B) {
    if (A.empty() || B.empty()) return {};
    if (A.kind == RegionKind::Lune || B.kind == RegionKind::Lune)
        throw DomainError("region_intersect supports sector regions only");
    Region R;
    R.kind = RegionKind::Intersection;
    R.r0 = std::max(A.r0, B.r0);
    R.angles = AngularSet::intersect(A.angles, B.angles);
    if (R.angles.empty()) return {};
    return R;
}

// ---------------------------------------------------------------------------
// Angular rules

namespace detail {

/// Distance from the arc {r e^{i t}: t in [a,b]} to the point P.
inline double arc_point_distance(double r, double a, double b, cplx P) {
    const double ang = std::arg(P);
    const double t = a + wrap_angle(ang - a);
    if (t <= b) return std::fabs(std::abs(P) - r);
    return std::min(std::abs(P - std::polar(r, a)), std::abs(P - std::polar(r, b)));
}

/// Bisects [a,b] until every panel meets the focus and bandwidth criteria at radius r.
inline std::vector<std::pair<double, double>> graded_panels(double a, double b, double r, const Resolution& res,
                                                            const QuadratureConfig& q, double max_width,
                                                            std::size_t cap) {
    const double bw = res.bandwidth(r);
    const double kbw = 0.5 * q.panel_order;
    auto ok = [&](double lo, double hi) {
        const double w = hi - lo;
        if (w > max_width) return false;
        if (bw > 0 && w * bw > kbw) return false;
        for (const auto& f : res.foci) {
            const double d = arc_point_distance(r, lo, hi, f.point);
            if (w * r > q.panel_ratio * d / f.sharpness) return false;
        }
        return true;
    };
    std::vector<std::pair<double, double>> out, stack{{a, b}};
    const double min_w = std::max((b - a) * 1e-14, 1e-15);
    while (!stack.empty()) {
        auto [lo, hi] = stack.back();
        stack.pop_back();
        if (ok(lo, hi) || hi - lo < min_w || out.size() + stack.size() > cap) {
            out.emplace_back(lo, hi);
        } else {
            const double m = 0.5 * (lo + hi);
            stack.emplace_back(m, hi);
            stack.emplace_back(lo, m);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

/**
 * \brief Angular rule on a circle of radius r restricted to `set`.
 *
 * Full circles use the equispaced rule unless graded panels are cheaper;
 * partial arcs always use Gauss panels so box edges are integrated exactly.
 */
inline LineRule angular_rule(const AngularSet& set, double r, const Resolution& res, const QuadratureConfig& q,
                             int level) {
    LineRule rule;
    const GaussRule& g = gauss_legendre(q.panel_order);
    if (!res.known) {
        const double N = std::max<double>(q.angular_min, 8.0 * std::ldexp(1.0, level));
        if (set.full) {
            const long n = static_cast<long>(N);
            for (long i = 0; i < n; ++i) {
                rule.t.push_back(two_pi * (i + 0.5) / n);
                rule.w.push_back(two_pi / n);
            }
        } else {
            for (const auto& [a, b] : set.intervals) {
                const long m = std::max<long>(1, static_cast<long>(std::ceil(N * (b - a) / two_pi / q.panel_order)));
                for (long i = 0; i < m; ++i) rule.append(a + (b - a) * i / m, a + (b - a) * (i + 1) / m, g);
            }
        }
        return rule;
    }
    if (set.full) {
        double n = std::max<double>(q.angular_min, res.bandwidth(r) + 2.0);
        const double fs = res.focus_scale(r);
        if (std::isfinite(fs)) n = std::max(n, q.oversample * r / std::max(fs, 1e-300));
        const std::size_t cap = static_cast<std::size_t>(n / q.panel_order) + 1;
        auto panels = detail::graded_panels(0.0, two_pi, r, res, q, pi / 2, cap);
        if (panels.size() * static_cast<std::size_t>(q.panel_order) < n && panels.size() < cap) {
            for (const auto& [a, b] : panels) rule.append(a, b, g);
            return rule;
        }
        if (n > 1 << 26) throw QuadratureFailure("angular resolution exceeds 2^26 nodes", std::polar(r, 0.0));
        const long N = static_cast<long>(std::ceil(n));
        for (long i = 0; i < N; ++i) {
            rule.t.push_back(two_pi * i / N);
            rule.w.push_back(two_pi / N);
        }
        return rule;
    }
    for (const auto& [a, b] : set.intervals) {
        auto panels = detail::graded_panels(a, b, r, res, q, pi / 2, std::size_t(1) << 24);
        for (const auto& [lo, hi] : panels) rule.append(lo, hi, g);
    }
    return rule;
}

// ---------------------------------------------------------------------------
// Sector integration on dyadic annuli

/** \brief Radial rule for one dyadic level, split into sub-panels by bandwidth and focus scale. */
inline std::vector<std::pair<double, double>> level_subpanels(double lo, double hi, const Resolution& res,
                                                              const QuadratureConfig& q) {
    const double width = hi - lo;
    double n = 1.0;
    const double bw = res.bandwidth(hi);
    if (bw > 0) n = std::max(n, std::ceil(width * bw / (0.5 * q.radial_order)));
    const double fs = res.focus_scale(hi);
    if (std::isfinite(fs) && fs > 0) n = std::max(n, std::ceil(width / (q.panel_ratio * fs)));
    n = std::min(n, 4096.0);
    std::vector<std::pair<double, double>> out;
    const long m = static_cast<long>(n);
    for (long i = 0; i < m; ++i) out.emplace_back(lo + width * i / m, lo + width * (i + 1) / m);
    return out;
}

/**
 * \brief Per-level contributions of int_{sector} field dm over n dyadic levels from r0.
 *
 * Level l covers 1-d 2^-l <= |z| < 1-d 2^-(l+1) with d = 1-r0; dm is area / pi.
 */
template <class Field>
std::vector<double> sector_levels(const Field& field, double r0, const AngularSet& set, const Resolution& res,
                                  const QuadratureConfig& q, int n_levels) {
    std::vector<double> out;
    if (set.empty()) return out;
    const GaussRule& g = gauss_legendre(q.radial_order);
    const double d0 = 1.0 - r0;
    for (int l = 0; l < n_levels; ++l) {
        const double lo = 1.0 - d0 * std::ldexp(1.0, -l);
        const double hi = 1.0 - d0 * std::ldexp(1.0, -l - 1);
        double level_sum = 0.0;
        for (const auto& [a, b] : level_subpanels(lo, hi, res, q)) {
            const LineRule ang = angular_rule(set, b, res, q, l + static_cast<int>(std::round(std::log2(1.0 / d0))));
            const double h = 0.5 * (b - a), m = 0.5 * (a + b);
            for (int i = 0; i < g.order(); ++i) {
                const double r = m + h * g.x[i];
                const double wr = h * g.w[i] * r / pi;
                double ring = 0.0;
                for (std::size_t k = 0; k < ang.size(); ++k) {
                    const cplx z = std::polar(r, ang.t[k]);
                    const double v = field(z);
                    if (!std::isfinite(v)) throw QuadratureFailure("non-finite field sample", z);
                    ring += ang.w[k] * v;
                }
                level_sum += wr * ring;
            }
        }
        out.push_back(level_sum);
    }
    return out;
}

/** \brief Number of levels for a sector starting at r0: absolute depth J, at least box_min_levels. */
inline int sector_level_count(double r0, const QuadratureConfig& q) {
    const double d0 = 1.0 - r0;
    const double j = std::log2(1.0 / d0);
    const int rel = static_cast<int>(std::ceil(q.depth - j - 1e-9));
    return std::max(rel, r0 == 0.0 ? q.depth : q.box_min_levels);
}

/**
 * \brief int_D field dm with dm normalized to total mass 1.
 *
 * The error estimate compares depth J with depth J-1; when the tail is
 * omitted it also carries the bound C 2^(-J(p+1)) with C = `tail_scale`.
 */
template <class Field>
Integral integrate_disc(const Field& field, const Resolution& res, const QuadratureConfig& q0, double tail_scale = 0.0) {
    const QuadratureConfig q = adapted(res, q0);
    auto levels = sector_levels(field, 0.0, AngularSet::circle(), res, q, q.depth);
    return finish_integral(std::move(levels), q, tail_scale);
}

// ---------------------------------------------------------------------------
// Lunes

/**
 * \brief Per-level contributions over the lune {|b - z| < h} in polar coordinates around b.
 *
 * z = b(1 - rho e^{i psi}) with rho < min(h, 2 cos psi); levels are dyadic in rho toward b.
 */
template <class Field>
std::vector<double> lune_levels(const Field& field, double base, double h, const QuadratureConfig& q, int n_levels) {
    const GaussRule& g = gauss_legendre(q.radial_order);
    const GaussRule& gp = gauss_legendre(q.panel_order);
    const cplx b = std::polar(1.0, base);
    const double top = std::min(h, 2.0);
    auto psi_rule = [&](double rho) {
        LineRule rule;
        const double pm = rho < 2.0 ? std::acos(rho / 2.0) : 0.0;
        if (pm <= 0.0) return rule;
        for (int k = 0; k < q.lune_end_levels; ++k) {
            const double lo = pm * (1.0 - std::ldexp(1.0, -k));
            const double hi = pm * (1.0 - std::ldexp(1.0, -k - 1));
            rule.append(lo, hi, gp);
            rule.append(-hi, -lo, gp);
        }
        return rule;
    };
    auto rho_panel = [&](double lo, double hi) {
        double acc = 0.0;
        const double hh = 0.5 * (hi - lo), mm = 0.5 * (hi + lo);
        for (int i = 0; i < g.order(); ++i) {
            const double rho = mm + hh * g.x[i];
            const LineRule pr = psi_rule(rho);
            double inner = 0.0;
            for (std::size_t k = 0; k < pr.size(); ++k) {
                const cplx z = b * (1.0 - std::polar(rho, pr.t[k]));
                const double v = field(z);
                if (!std::isfinite(v)) throw QuadratureFailure("non-finite field sample", z);
                inner += pr.w[k] * v;
            }
            acc += hh * g.w[i] * rho * inner / pi;
        }
        return acc;
    };
    std::vector<double> out;
    for (int l = 0; l < n_levels; ++l) {
        const double lo = top * std::ldexp(1.0, -l - 1), hi = top * std::ldexp(1.0, -l);
        double s = 0.0;
        if (l == 0 && hi > 1.0) {
            // grade toward rho = 2 where the angular range closes up
            double a = lo;
            const double smax = 2.0 - lo;
            for (int k = 1; k <= q.lune_end_levels && a < hi; ++k) {
                double bnd = std::min(hi, 2.0 - smax * std::ldexp(1.0, -k));
                if (k == q.lune_end_levels) bnd = hi;
                if (bnd > a) s += rho_panel(a, bnd);
                a = bnd;
            }
        } else {
            s = rho_panel(lo, hi);
        }
        out.push_back(s);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Region dispatch

template <class Field>
Integral integrate_region(const Field& field, const Region& R, const Resolution& res, const QuadratureConfig& q0) {
    const QuadratureConfig q = adapted(res, q0);
    if (R.empty()) {
        Integral out;
        out.flags.push_back("empty");
        return out;
    }
    if (R.kind == RegionKind::Lune) {
        auto levels = lune_levels(field, R.lune_base, R.lune_h, q, q.depth);
        return finish_integral(std::move(levels), q, 0.0);
    }
    auto levels = sector_levels(field, R.r0, R.angles, res, q, sector_level_count(R.r0, q));
    return finish_integral(std::move(levels), q, 0.0);
}

// ---------------------------------------------------------------------------
// Boundary arc double integrals

/**
 * \brief int_I int_I F(u,v) |du| |dv| with |du| = d theta (unnormalized).
 *
 * Coordinates t = theta - phi in (0, L) and phi; t is graded dyadically toward
 * both ends where u and v meet, so no node lies on the diagonal.  F is
 * assumed symmetric when `symmetric` is set; otherwise both orders are sampled.
 * `beta` is the admissible diagonal blow-up exponent (must be < 1).
 */
template <class F>
Integral arc_double_integral(const F& fn, const Arc& I, double beta, const Resolution& res, const QuadratureConfig& q,
                             bool symmetric = true) {
    if (!(beta < 1.0)) throw DomainError("arc_double_integral needs beta < 1");
    const double L = two_pi * I.length;
    const double th0 = I.start();
    const GaussRule& g = gauss_legendre(q.radial_order);
    const GaussRule& gp = gauss_legendre(q.panel_order);
    const double bw = res.bandwidth(1.0);
    auto inner = [&](double t) {
        // phi in [th0, th0 + L - t]
        const double a = th0, b = th0 + L - t;
        if (b <= a) return 0.0;
        std::vector<std::pair<double, double>> stack{{a, b}}, panels;
        auto ok = [&](double lo, double hi) {
            const double w = hi - lo;
            if (w > pi / 4) return false;
            if (bw > 0 && w * bw > 0.5 * q.panel_order) return false;
            for (const auto& f : res.foci) {
                const double d = std::max(std::abs(f.point) - 1.0, 1e-9);
                for (double ang : {std::arg(f.point), std::arg(f.point) - t}) {
                    const double tt = lo + wrap_angle(ang - lo);
                    const double dist = tt <= hi ? 0.0
                                                 : std::min(angular_distance(ang, lo), angular_distance(ang, hi));
                    if (w > q.panel_ratio * std::max(d, dist) / f.sharpness) return false;
                }
            }
            return true;
        };
        const double min_w = (b - a) * 1e-12;
        while (!stack.empty()) {
            auto [lo, hi] = stack.back();
            stack.pop_back();
            if (ok(lo, hi) || hi - lo < min_w) {
                panels.emplace_back(lo, hi);
            } else {
                const double m = 0.5 * (lo + hi);
                stack.emplace_back(m, hi);
                stack.emplace_back(lo, m);
            }
        }
        double acc = 0.0;
        for (const auto& [lo, hi] : panels) {
            const double hh = 0.5 * (hi - lo), mm = 0.5 * (hi + lo);
            for (int i = 0; i < gp.order(); ++i) {
                const double phi = mm + hh * gp.x[i];
                const BoundaryPoint u(phi + t), v(phi);
                double val = symmetric ? 2.0 * fn(u, v) : fn(u, v) + fn(v, u);
                if (!std::isfinite(val)) throw QuadratureFailure("non-finite arc sample", u.z());
                acc += hh * gp.w[i] * val;
            }
        }
        return acc;
    };
    auto t_levels = [&](bool toward_zero) {
        std::vector<double> out;
        const double half = 0.5 * L;
        for (int m = 0; m < q.arc_levels; ++m) {
            const double lo = half * std::ldexp(1.0, -m - 1), hi = half * std::ldexp(1.0, -m);
            double n = 1.0;
            if (bw > 0) n = std::max(n, std::ceil((hi - lo) * bw / (0.5 * q.radial_order)));
            const long np = static_cast<long>(std::min(n, 1024.0));
            double s = 0.0;
            for (long k = 0; k < np; ++k) {
                const double a = lo + (hi - lo) * k / np, b = lo + (hi - lo) * (k + 1) / np;
                const double hh = 0.5 * (b - a), mm = 0.5 * (a + b);
                for (int i = 0; i < g.order(); ++i) {
                    const double s_node = mm + hh * g.x[i];
                    const double t = toward_zero ? s_node : L - s_node;
                    s += hh * g.w[i] * inner(t);
                }
            }
            out.push_back(s);
        }
        return out;
    };
    Integral lower = finish_integral(t_levels(true), q, 0.0);
    Integral upper = finish_integral(t_levels(false), q, 0.0);
    Integral out;
    out.value = lower.value + upper.value;
    out.coarse = lower.coarse + upper.coarse;
    out.error = lower.error + upper.error;
    out.flags = lower.flags;
    for (const auto& f : upper.flags)
        if (!out.has_flag(f)) out.flags.push_back(f);
    out.series = lower.series;
    return out;
}

}  // namespace dirimor
