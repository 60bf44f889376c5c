#pragma once

#include <ostream>

#include <json.hpp>

#include "harness.hpp"

namespace edt {

using json = nlohmann::json;

inline json to_json(const ExclusionRecord& r) {
    return json{{"excluded", r.excluded}, {"dominator", r.dominator}, {"cr1", r.cr1}, {"cr2", r.cr2}};
}

inline json to_json(const ChoiceSet& cs) {
    json rationale = json::array();
    for (const auto& r : cs.rationale) rationale.push_back(to_json(r));
    return json{{"chosen", cs.chosen}, {"rationale", rationale}};
}

inline json to_json(const StatValue& sv) {
    json w{{"shift", sv.witness.shift},
           {"scale_u", sv.witness.scale_u},
           {"scale_v", sv.witness.scale_v},
           {"capped", sv.witness.capped}};
    switch (sv.witness.kind) {
        case StatWitness::Kind::EuFunction:
            w["kind"] = "eu_function";
            break;
        case StatWitness::Kind::UpperSet:
            w["kind"] = "upper_set";
            w["upper_set"] = sv.witness.upper_set;
            break;
        case StatWitness::Kind::GridIndex:
            w["kind"] = "grid_index";
            w["index"] = sv.witness.index;
            break;
        case StatWitness::Kind::FiniteIndex:
            w["kind"] = "finite_index";
            w["index"] = sv.witness.index;
            break;
    }
    return json{{"value", sv.value}, {"witness", w}};
}

inline json resample_summary(const std::vector<double>& stats) {
    std::vector<double> s = stats;
    std::sort(s.begin(), s.end());
    const auto q = [&](double p) {
        const std::size_t k = static_cast<std::size_t>(p * static_cast<double>(s.size() - 1));
        return s[k];
    };
    return json{{"count", s.size()}, {"min", s.front()},   {"q05", q(0.05)}, {"median", q(0.5)},
                {"q95", q(0.95)},    {"max", s.back()}};
}

inline json to_json(const PairwiseResult& r) {
    return json{{"j", r.j},
                {"i", r.i},
                {"observed", to_json(r.observed)},
                {"p_value", r.p_value},
                {"reject", r.reject},
                {"quantile", r.quantile},
                {"resamples", resample_summary(r.resample_stats)}};
}

inline json to_json(const TestConfig& cfg) {
    return json{{"alpha", cfg.alpha},
                {"n_resamples", cfg.n_resamples},
                {"seed", cfg.seed},
                {"mode", cfg.mode == TestConfig::Mode::Permutation ? "permutation" : "bootstrap"}};
}

inline json to_json(const TestReport& rep) {
    json pw = json::array();
    for (const auto& r : rep.pairwise) pw.push_back(to_json(r));
    return json{{"target", rep.target},
                {"competitors", rep.competitors},
                {"pairwise", pw},
                {"global_reject", rep.global_reject},
                {"config", to_json(rep.config)}};
}

inline json to_json(const BreakdownCurve& c) {
    json pts = json::array();
    for (const auto& [g, pv] : c.points) pts.push_back(json{{"share", g}, {"p_value", pv}});
    json out{{"j", c.j}, {"i", c.i}, {"points", pts}};
    if (c.breakdown_share) out["breakdown_share"] = *c.breakdown_share;
    return out;
}

/* share,p_value rows, one per evaluated contamination share. */
inline void write_breakdown_csv(std::ostream& out, const BreakdownCurve& c) {
    out << "share,p_value\n";
    out.precision(17);
    for (const auto& [g, pv] : c.points) out << g << "," << pv << "\n";
}

/* round,z_min,<one 0/1 column per action> membership matrix. */
inline void write_trace_csv(std::ostream& out, const EvolutionTrace& trace,
                            const std::vector<ActionId>& actions) {
    out << "round,z_min";
    for (const auto& a : actions) out << "," << a;
    out << "\n";
    for (std::size_t r = 0; r < trace.choice_sets.size(); ++r) {
        out << (r + 1) << "," << trace.z_min[r];
        const auto& cs = trace.choice_sets[r];
        for (const auto& a : actions)
            out << "," << (std::find(cs.begin(), cs.end(), a) != cs.end() ? 1 : 0);
        out << "\n";
    }
}

}  // namespace edt
