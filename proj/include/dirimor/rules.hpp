#pragma once

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace dirimor {

/** \brief Gauss-Legendre rule on [-1, 1]. */
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
    int order() const { return static_cast<int>(x.size()); }
};

namespace detail {

inline GaussRule build_gauss_legendre(int n) {
    GaussRule rule;
    const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(n);
    std::vector<std::pair<double, double>> nodes;
    for (double x0 : zeros) {
        const double dp = boost::math::legendre_p_prime(n, x0);
        const double w0 = 2.0 / ((1.0 - x0 * x0) * dp * dp);
        nodes.emplace_back(x0, w0);
        if (x0 != 0.0) nodes.emplace_back(-x0, w0);
    }
    std::sort(nodes.begin(), nodes.end());
    for (const auto& [xi, wi] : nodes) {
        rule.x.push_back(xi);
        rule.w.push_back(wi);
    }
    return rule;
}

}  // namespace detail

/** \brief Cached Gauss-Legendre rule of the given order. */
inline const GaussRule& gauss_legendre(int n) {
    if (n < 1 || n > 200) throw std::invalid_argument("Gauss-Legendre order must be in [1,200]");
    static std::mutex mtx;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussRule>(detail::build_gauss_legendre(n));
    return *slot;
}

/** \brief Nodes and weights of a composite rule on a real interval. */
struct LineRule {
    std::vector<double> t;
    std::vector<double> w;

    void append(double a, double b, const GaussRule& g) {
        const double h = 0.5 * (b - a);
        const double m = 0.5 * (a + b);
        for (int i = 0; i < g.order(); ++i) {
            t.push_back(m + h * g.x[i]);
            w.push_back(h * g.w[i]);
        }
    }
    std::size_t size() const { return t.size(); }
};

}  // namespace dirimor
