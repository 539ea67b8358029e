#pragma once

#include "dirimor/function.hpp"
#include "dirimor/gap.hpp"

#include <cctype>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace dirimor {

/** \brief Malformed function spec; names the offending token. */
class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string& what, std::string token)
        : std::invalid_argument(what + ": '" + token + "'"), token_(std::move(token)) {}
    const std::string& token() const { return token_; }

private:
    std::string token_;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(trim(cur));
    return out;
}

inline double parse_real(const std::string& tok) {
    const std::string t = trim(tok);
    if (t.empty()) throw ParseError("malformed number", tok);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || !std::isfinite(v)) throw ParseError("malformed number", tok);
    return v;
}

/// Accepts "x", "yi", "x+yi", "x-yi", "i", "-i".
inline cplx parse_complex(const std::string& tok) {
    const std::string t = trim(tok);
    if (t.empty()) throw ParseError("malformed number", tok);
    if (t.back() != 'i' && t.back() != 'j') return parse_real(t);
    const std::string body = t.substr(0, t.size() - 1);
    // split position: last '+' or '-' that is not a leading sign or an exponent sign
    std::size_t pos = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            pos = k;
            break;
        }
    }
    auto imag_part = [&](const std::string& s) {
        if (s.empty() || s == "+") return 1.0;
        if (s == "-") return -1.0;
        return parse_real(s);
    };
    try {
        if (pos == std::string::npos) return cplx(0.0, imag_part(body));
        return cplx(parse_real(body.substr(0, pos)), imag_part(body.substr(pos)));
    } catch (const ParseError&) {
        throw ParseError("malformed number", tok);
    }
}

inline std::map<std::string, std::string> parse_kv(const std::string& body, const std::string& whole) {
    std::map<std::string, std::string> kv;
    if (trim(body).empty()) return kv;
    for (const auto& item : split(body, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value", item);
        const std::string key = trim(item.substr(0, eq));
        if (kv.count(key)) throw ParseError("duplicate key", key);
        kv[key] = trim(item.substr(eq + 1));
    }
    (void)whole;
    return kv;
}

inline void allow_keys(const std::map<std::string, std::string>& kv, std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : kv) {
        bool ok = false;
        for (const char* a : keys) ok = ok || k == a;
        if (!ok) throw ParseError("unknown parameter", k);
    }
}

inline const std::string& need(const std::map<std::string, std::string>& kv, const char* key,
                               const std::string& whole) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ParseError(std::string("missing parameter ") + key, whole);
    return it->second;
}

}  // namespace detail

/**
 * \brief Builds a function from the spec mini-language.
 *
 * `taylor:a0,a1,...`, `kernel:c=<complex>,s=<real>`, `gap:q=<real>,K=<int>`,
 * `log1`, and `fpl:p=<real>,lambda=<real>` for the boundary kernel at c = 1
 * with s = p(1-lambda)/2.
 */
inline AnalyticFunction parse_function_spec(const std::string& text) {
    const std::string t = detail::trim(text);
    const auto colon = t.find(':');
    const std::string family = detail::trim(t.substr(0, colon));
    const std::string body = colon == std::string::npos ? "" : t.substr(colon + 1);
    if (family == "log1") {
        if (!detail::trim(body).empty()) throw ParseError("log1 takes no parameters", body);
        return make_log1();
    }
    if (family == "taylor") {
        if (detail::trim(body).empty()) throw ParseError("taylor needs coefficients", t);
        std::vector<cplx> c;
        for (const auto& tok : detail::split(body, ',')) c.push_back(detail::parse_complex(tok));
        return make_taylor(std::move(c));
    }
    if (family == "kernel") {
        const auto kv = detail::parse_kv(body, t);
        detail::allow_keys(kv, {"c", "s"});
        const cplx c = detail::parse_complex(detail::need(kv, "c", t));
        const double s = detail::parse_real(detail::need(kv, "s", t));
        if (std::abs(c) > 1.0 + 1e-12) throw ParseError("kernel point outside the closed disc", kv.at("c"));
        if (s < 0.0) throw ParseError("kernel exponent must be >= 0", kv.at("s"));
        if (std::fabs(std::abs(c) - 1.0) <= 1e-12) return make_power_kernel(BoundaryPoint(std::arg(c)), s);
        return make_power_kernel(DiscPoint(c), s);
    }
    if (family == "gap") {
        const auto kv = detail::parse_kv(body, t);
        detail::allow_keys(kv, {"q", "K"});
        const double q = detail::parse_real(detail::need(kv, "q", t));
        int K = 20;
        if (kv.count("K")) {
            const double k = detail::parse_real(kv.at("K"));
            if (k != std::floor(k)) throw ParseError("K must be an integer", kv.at("K"));
            K = static_cast<int>(k);
        }
        if (!(q > 0.0 && q < 1.0)) throw ParseError("q must lie in (0,1)", kv.at("q"));
        try {
            return remark_example(q, K);
        } catch (const DomainError& e) {
            throw ParseError(e.what(), kv.count("K") ? kv.at("K") : std::string("K"));
        }
    }
    if (family == "fpl") {
        const auto kv = detail::parse_kv(body, t);
        detail::allow_keys(kv, {"p", "lambda"});
        const double p = detail::parse_real(detail::need(kv, "p", t));
        const double l = detail::parse_real(detail::need(kv, "lambda", t));
        try {
            const SpaceParams sp(p, l);
            return make_power_kernel(BoundaryPoint(0.0), sp.half_growth());
        } catch (const DomainError& e) {
            throw ParseError(e.what(), body);
        }
    }
    throw ParseError("unknown function family", family);
}

/**
 * \brief Coefficient rules for gap series: `remark:q=<real>` (a_k = 2^{-k(1-q)/2}),
 * `pow2:e=<real>` (a_k = 2^{-e k}) and `zero`.
 */
inline GapCoefficients parse_coeff_rule(const std::string& text) {
    const std::string t = detail::trim(text);
    const auto colon = t.find(':');
    const std::string family = detail::trim(t.substr(0, colon));
    const std::string body = colon == std::string::npos ? "" : t.substr(colon + 1);
    if (family == "zero") {
        if (!detail::trim(body).empty()) throw ParseError("zero takes no parameters", body);
        return {[](int) { return cplx(0.0); }, "0"};
    }
    if (family == "remark") {
        const auto kv = detail::parse_kv(body, t);
        detail::allow_keys(kv, {"q"});
        const double q = detail::parse_real(detail::need(kv, "q", t));
        if (!(q > 0.0 && q < 1.0)) throw ParseError("q must lie in (0,1)", kv.at("q"));
        return remark_coefficients(q);
    }
    if (family == "pow2") {
        const auto kv = detail::parse_kv(body, t);
        detail::allow_keys(kv, {"e"});
        const double e = detail::parse_real(detail::need(kv, "e", t));
        return {[e](int k) { return cplx(std::exp2(-e * k)); }, "2^(-" + detail::fmt_num(e) + "k)"};
    }
    throw ParseError("unknown coefficient rule", family);
}

}  // namespace dirimor
