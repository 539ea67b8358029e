#pragma once

#include "dirimor/gap.hpp"
#include "dirimor/norms.hpp"
#include "dirimor/operators.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <string>

namespace dirimor {

using ojson = nlohmann::ordered_json;

/** \brief JSON number, or the strings "inf" / "-inf" / "nan" for non-finite values. */
inline ojson json_number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

inline ojson to_json(cplx z) {
    ojson j;
    j["re"] = json_number(z.real());
    j["im"] = json_number(z.imag());
    return j;
}

inline ojson to_json(const GridPoint& g) {
    ojson j;
    switch (g.kind) {
        case GridPoint::Kind::None: j["kind"] = "none"; break;
        case GridPoint::Kind::Point:
            j["kind"] = "point";
            j["re"] = json_number(g.point.real());
            j["im"] = json_number(g.point.imag());
            break;
        case GridPoint::Kind::Arc:
            j["kind"] = "arc";
            j["center"] = json_number(g.arc.center);
            j["length"] = json_number(g.arc.length);
            break;
    }
    j["level"] = g.level;
    return j;
}

inline ojson to_json(const NormReport& r) {
    ojson j;
    j["quantity"] = r.quantity;
    j["value"] = json_number(r.value);
    j["maximizer"] = to_json(r.maximizer);
    j["grid"] = r.grid;
    j["refinement_delta"] = json_number(r.refinement_delta);
    j["flags"] = r.flags;
    j["trend"] = {{"slope", json_number(r.trend.slope)}, {"classification", trend_label(r.trend.unbounded)}};
    ojson lv = ojson::array();
    for (double v : r.level_values) lv.push_back(json_number(v));
    j["level_values"] = lv;
    return j;
}

inline ojson to_json(const RatioScanReport& r) {
    ojson j;
    j["kind"] = operator_name(r.kind);
    j["symbol"] = r.symbol;
    j["p"] = r.params.p;
    j["lambda"] = r.params.lambda;
    ojson rows = ojson::array();
    for (const auto& row : r.rows) {
        ojson o;
        o["c"] = to_json(row.at.c);
        o["k"] = row.at.k;
        o["rotation"] = row.at.rotation;
        o["norm_f"] = json_number(row.norm_f);
        o["norm_tf"] = json_number(row.norm_tf);
        o["ratio"] = json_number(row.ratio);
        o["flags"] = row.flags;
        rows.push_back(o);
    }
    j["rows"] = rows;
    j["max_ratio"] = json_number(r.max_ratio);
    j["slope"] = json_number(r.slope);
    j["classification"] = r.classification();
    return j;
}

inline ojson to_json(const BlockSums& b) {
    ojson j;
    ojson partial = ojson::array();
    for (double v : b.partial) partial.push_back(json_number(v));
    j["partial"] = partial;
    j["ratio"] = json_number(b.ratio);
    j["classification"] = b.classification();
    j["limit"] = json_number(b.limit);
    return j;
}

/** \brief "level,value" rows for external plotting. */
inline std::string level_csv(const NormReport& r) {
    std::string out = "level,value\n";
    char buf[64];
    for (std::size_t i = 0; i < r.level_values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, r.level_values[i]);
        out += buf;
    }
    return out;
}

}  // namespace dirimor
