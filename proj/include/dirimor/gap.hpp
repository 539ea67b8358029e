#pragma once

#include "dirimor/function.hpp"
#include "dirimor/quadrature.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace dirimor {

/** \brief Coefficient rule k -> a_k of a series sum a_k z^(2^k). */
struct GapCoefficients {
    std::function<cplx(int)> rule;
    std::string label;

    cplx operator()(int k) const { return rule(k); }
};

/** \brief a_k = 2^{-k(1-q)/2}. */
inline GapCoefficients remark_coefficients(double q) {
    return {[q](int k) { return cplx(std::exp2(-k * (1.0 - q) / 2.0)); }, "2^(-k(1-" + detail::fmt_num(q) + ")/2)"};
}

/** \brief Partial sums of sum_k 2^{k(1-q)} |a_k|^2 with a ratio-test classification. */
struct BlockSums {
    std::vector<double> terms;
    std::vector<double> partial;  ///< partial[K-1] = sum over blocks k = 0..K-1
    double ratio = 0.0;           ///< geometric-mean term ratio over the last 5 terms
    bool divergent = false;
    double limit = 0.0;           ///< partial sum plus geometric tail when convergent

    std::string classification() const { return divergent ? "divergent-trend" : "convergent-trend"; }
};

/**
 * \brief S_K = sum_{k=0}^{K-1} 2^{k(1-q)} |a_k|^2, one coefficient per dyadic block.
 *
 * Divergent when the mean ratio of the last five terms is at least `ratio_threshold`.
 */
inline BlockSums gap_block_sums(const GapCoefficients& a, double q, int K, double ratio_threshold = 0.99) {
    if (!(q > 0.0 && q < 1.0)) throw DomainError("gap_block_sums needs 0 < q < 1");
    if (K < 1) throw DomainError("gap_block_sums needs K >= 1");
    BlockSums out;
    double s = 0.0;
    for (int k = 0; k < K; ++k) {
        const double t = std::exp2(k * (1.0 - q)) * std::norm(a(k));
        out.terms.push_back(t);
        s += t;
        out.partial.push_back(s);
    }
    const int n = std::min(K, 5);
    double logsum = 0.0;
    int cnt = 0;
    bool zero_tail = true;
    for (int k = K - n + 1; k < K; ++k) {
        const double t0 = out.terms[k - 1], t1 = out.terms[k];
        if (t1 != 0.0) zero_tail = false;
        if (t0 > 0.0 && t1 > 0.0) {
            logsum += std::log(t1 / t0);
            ++cnt;
        }
    }
    if (zero_tail || cnt == 0) {
        out.ratio = 0.0;
        out.divergent = false;
        out.limit = s;
        return out;
    }
    out.ratio = std::exp(logsum / cnt);
    out.divergent = out.ratio >= ratio_threshold;
    out.limit = out.divergent ? std::numeric_limits<double>::infinity()
                              : s + out.terms.back() * out.ratio / (1.0 - out.ratio);
    return out;
}

/** \brief max of |a_k| 2^{k(1-(1+q)/2)} over the tail half k in [K/2, K]. */
inline double yamashita_limsup(const GapCoefficients& a, double q, int K) {
    double best = 0.0;
    for (int k = std::max(1, K / 2); k <= K; ++k) best = std::max(best, std::abs(a(k)) * std::exp2(k * (1.0 - (1.0 + q) / 2.0)));
    return best;
}

/** \brief sum_{k=1..K} 2^{-k(1-q)/2} z^(2^k). */
inline AnalyticFunction remark_example(double q, int K = 20, GapPolicy policy = {}) {
    if (!(q > 0.0 && q < 1.0)) throw DomainError("remark_example needs 0 < q < 1");
    std::ostringstream label;
    label << "gap:q=" << detail::fmt_num(q) << ",K=" << K;
    return make_gap_series(remark_coefficients(q).rule, K, policy, label.str());
}

/** \brief A point u or v in the closed disc for the two-kernel integral. */
struct KernelPoint {
    cplx z;
    KernelPoint(DiscPoint d) : z(d.z()) {}       // NOLINT(google-explicit-constructor)
    KernelPoint(BoundaryPoint b) : z(b.z()) {}   // NOLINT(google-explicit-constructor)
};

/**
 * \brief (1-|u|^2)^{r+t-s-2} int (1-|z|^2)^s / (|1-conj(u) z|^r |1-conj(v) z|^t) dm.
 */
inline Integral pzh_check(DiscPoint u, KernelPoint v, double r, double s, double t, const QuadratureConfig& q = {}) {
    const double c = r + t - s - 2.0;
    if (!(s > -1.0) || !(r > 0.0) || !(t > 0.0) || !(c > 0.0) || !(c < r))
        throw DomainError("pzh_check requires s > -1, r > 0, t > 0 and 0 < r+t-s-2 < r");
    const cplx uc = std::conj(u.z()), vc = std::conj(v.z);
    Resolution res;
    if (std::abs(uc) > 0.0) res.foci.push_back({1.0 / uc, 1.0 + r / 2.0});
    if (std::abs(vc) > 0.0) res.foci.push_back({1.0 / vc, 1.0 + t / 2.0});
    auto field = [&](cplx z) {
        return std::pow(one_minus_mod2(z), s) * std::pow(std::abs(1.0 - uc * z), -r) *
               std::pow(std::abs(1.0 - vc * z), -t);
    };
    Integral I = integrate_disc(field, res, q);
    const double w = std::pow(one_minus_mod2(u.z()), c);
    I.value *= w;
    I.coarse *= w;
    I.error *= w;
    return I;
}

}  // namespace dirimor
