#pragma once

#include <array>
#include <string>
#include <vector>

#include "inference.hpp"

namespace edt {

/* Simulation scenario: i.i.d. binomial consequences per action, the
 * deterministic-adversary cautionary generator, or a protocol from file. */
struct ScenarioSpec {
    enum class Kind { BinomialIid, DeterministicAdversary, FromFile };
    Kind kind = Kind::BinomialIid;
    std::vector<ActionId> actions;
    std::vector<double> binom_p;  // per action
    int binom_size = 10;
    std::vector<std::vector<double>> adversary_table;  // actions x states
    int adversary_trigger = 0;      // action index that triggers state_if_trigger
    int state_if_trigger = 0;
    int state_otherwise = 2;
    std::string path;               // FromFile
    int rounds = 500;
    std::uint64_t seed = 0;
};

/* Which empirical choice function drives a scenario trace. */
struct EngineConfig {
    enum class Kind { Eu, FsdDominance, FsdRegularized };
    Kind kind = Kind::FsdDominance;
    std::vector<double> eu_weights = {1.0};
    RegularizationSchedule schedule;
};

struct EvolutionTrace {
    std::vector<std::vector<ActionId>> choice_sets;  // per round
    std::vector<std::size_t> z_min;                  // per round
};

namespace scenario {

inline ChoiceSet evaluate(const Protocol& p, const EngineConfig& engine) {
    auto sp = sub_protocol(p, p.actions);
    switch (engine.kind) {
        case EngineConfig::Kind::Eu:
            return ecf_eu(sp, engine.eu_weights);
        case EngineConfig::Kind::FsdDominance:
            return ecf_dominance(sp, FunctionClassSpec::fsd());
        case EngineConfig::Kind::FsdRegularized:
            return ecf_regularized(sp, FunctionClassSpec::fsd(), engine.schedule);
    }
    throw std::logic_error("unreachable");
}

}  // namespace scenario

/* Grows a protocol round by round (one consequence per action per round)
 * and records the configured ECF's choice set after each round. */
inline EvolutionTrace run_scenario(const ScenarioSpec& spec, const EngineConfig& engine) {
    EvolutionTrace trace;
    if (spec.kind == ScenarioSpec::Kind::FromFile) {
        const auto p = load_protocol(spec.path, ConsequenceSpace::maximize_all(1));
        const auto cs = scenario::evaluate(p, engine);
        trace.choice_sets.push_back(cs.chosen);
        trace.z_min.push_back(p.min_count());
        return trace;
    }
    if (spec.actions.empty()) throw std::invalid_argument("scenario without actions");
    Protocol p;
    p.space = ConsequenceSpace::maximize_all(1);
    SplitMix64 g(mix_keys(spec.seed, 0x5ce7u));
    for (int r = 0; r < spec.rounds; ++r) {
        for (std::size_t a = 0; a < spec.actions.size(); ++a) {
            double value = 0.0;
            if (spec.kind == ScenarioSpec::Kind::BinomialIid) {
                value = static_cast<double>(g.binomial(spec.binom_size, spec.binom_p[a]));
            } else {
                const int state = (static_cast<int>(a) == spec.adversary_trigger)
                                      ? spec.state_if_trigger
                                      : spec.state_otherwise;
                value = spec.adversary_table[a][state];
            }
            p.add_entry(spec.actions[a], {value});
        }
        const auto cs = scenario::evaluate(p, engine);
        trace.choice_sets.push_back(cs.chosen);
        trace.z_min.push_back(p.min_count());
    }
    return trace;
}

// ---- Bundled running examples --------------------------------------------

inline const std::vector<ActionId>& card_colors() {
    static const std::vector<ActionId> colors = {"Red", "Blue", "Green", "Yellow", "Black"};
    return colors;
}

/* Five colored clock-out cards, five trials each (values in EUR). */
inline Protocol table1_protocol() {
    static const std::array<std::array<double, 5>, 5> rows = {{
        {3, 1, 6, 2, 5},  // Red
        {1, 7, 2, 1, 3},  // Blue
        {5, 2, 1, 7, 0},  // Green
        {2, 1, 3, 0, 4},  // Yellow
        {1, 2, 1, 3, 0},  // Black
    }};
    Protocol p;
    p.space = ConsequenceSpace::maximize_all(1);
    for (std::size_t a = 0; a < rows.size(); ++a)
        for (double v : rows[a]) p.add_entry(card_colors()[a], {v});
    return p;
}

/* Groundtruth payoff table of the deterministic-adversary example. */
inline ScenarioSpec adversary_scenario(int rounds, std::uint64_t seed = 0) {
    ScenarioSpec s;
    s.kind = ScenarioSpec::Kind::DeterministicAdversary;
    s.actions = card_colors();
    s.adversary_table = {{4, 1, 1}, {6, 3, 2}, {5, 3, 3}, {10, 2, 2}, {8, 2, 3}};
    s.adversary_trigger = 0;  // Red -> state s1, otherwise s3
    s.rounds = rounds;
    s.seed = seed;
    return s;
}

inline ScenarioSpec example4_scenario(int variant, int rounds, std::uint64_t seed) {
    ScenarioSpec s;
    s.actions = card_colors();
    s.binom_p = (variant == 1) ? std::vector<double>{0.25, 0.2, 0.22, 0.22, 0.21}
                               : std::vector<double>{0.32, 0.32, 0.45, 0.8, 0.8};
    s.rounds = rounds;
    s.seed = seed;
    return s;
}

/* Schedule used by the bundled binomial FSD study: strict first condition
 * (the identically distributed pair breaks antisymmetry of the criterion)
 * and a constant placing 4*delta between the noise scale and the smallest
 * separated-pair criterion gap. */
inline RegularizationSchedule example4_schedule() {
    RegularizationSchedule sched;
    sched.c = 0.15;
    sched.L = 2.0;
    sched.strict_first_condition = true;
    return sched;
}

// ---- Prompting study ------------------------------------------------------

inline ConsequenceSpace prompting_space() {
    // (PPL, Coh): perplexity minimized, coherence maximized
    return ConsequenceSpace(2, {Direction::Minimize, Direction::Maximize});
}

struct PromptingBundle {
    ChoiceSet choice_set;
    std::vector<PairwiseResult> pairwise;  // all six ordered pairs
    TestReport membership_neutral;
    BreakdownCurve breakdown_polite_neutral;
    BreakdownCurve breakdown_inpolite_neutral;
};

/* Full analysis of the bundled prompting protocol: FSD choice set, six
 * pairwise permutation tests, the membership test for `neutral`, and
 * breakdown curves for the two pairs flagged in the reference study. */
inline PromptingBundle replicate_prompting_study(const Protocol& p, const TestConfig& cfg) {
    const auto cls = FunctionClassSpec::fsd();
    PromptingBundle b;
    b.choice_set = ecf_dominance(sub_protocol(p, p.actions), cls);
    for (const auto& j : p.actions)
        for (const auto& i : p.actions)
            if (j != i) b.pairwise.push_back(pairwise_permutation_test(p, j, i, cls, cfg));
    b.membership_neutral = membership_test(p, "neutral", p.actions, cls, cfg);
    std::vector<double> shares;
    for (int k = 0; k <= 50; ++k) shares.push_back(0.01 * k);
    b.breakdown_polite_neutral = breakdown_curve(p, "polite", "neutral", cls, cfg, shares);
    b.breakdown_inpolite_neutral = breakdown_curve(p, "inpolite", "neutral", cls, cfg, shares);
    return b;
}

inline PromptingBundle replicate_prompting_study(const std::string& csv_path, const TestConfig& cfg) {
    return replicate_prompting_study(load_protocol(csv_path, prompting_space()), cfg);
}

// ---- SSD demonstration ----------------------------------------------------

struct SsdDemoResult {
    std::vector<double> t1;  // statistic on the original split
    std::vector<double> t2;  // statistic on a random split of the pooled sample
};

/* Mean-preserving-spread pair: Y ~ Exp(20)+20, X ~ Exp(20)+20+eps with
 * eps ~ Exp(1)-1; the SSD statistic is evaluated on the real and on a
 * permuted split to probe the worst-case-ordering assumption.  The tested
 * (true) hypothesis is that Y dominates X, so the statistic is T(y, x). */
inline SsdDemoResult ssd_assumption3_demo(std::size_t n, int n_rep, std::uint64_t seed) {
    const auto cls = FunctionClassSpec::ssd(GridSpec{0.0, 40.0, 50000});
    const auto space = ConsequenceSpace::maximize_all(1);
    SsdDemoResult out;
    for (int rep = 0; rep < n_rep; ++rep) {
        SplitMix64 g(mix_keys(seed, static_cast<std::uint64_t>(rep) + 1));
        std::vector<double> pooled;
        EmpiricalSample x, y;
        for (std::size_t s = 0; s < n; ++s) y.points.push_back({g.exponential(20.0) + 20.0});
        for (std::size_t s = 0; s < n; ++s) {
            const double eps = g.exponential(1.0) - 1.0;
            x.points.push_back({g.exponential(20.0) + 20.0 + eps});
        }
        out.t1.push_back(t_statistic(cls, space, y, x).value);
        std::vector<Consequence> z = detail::pool(x, y);
        g.shuffle(z);
        EmpiricalSample u, v;
        u.points.assign(z.begin(), z.begin() + n);
        v.points.assign(z.begin() + n, z.end());
        out.t2.push_back(t_statistic(cls, space, v, u).value);
    }
    return out;
}

/* Fraction of evaluation points where the ECDF of t1 lies strictly above
 * the ECDF of t2 (an FSD-ordering violation between the two statistics). */
inline double ecdf_violation_fraction(std::vector<double> t1, std::vector<double> t2) {
    std::sort(t1.begin(), t1.end());
    std::sort(t2.begin(), t2.end());
    std::vector<double> grid = t1;
    grid.insert(grid.end(), t2.begin(), t2.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    const auto ecdf = [](const std::vector<double>& s, double t) {
        return static_cast<double>(std::upper_bound(s.begin(), s.end(), t) - s.begin()) /
               static_cast<double>(s.size());
    };
    std::size_t violations = 0;
    for (double t : grid) violations += (ecdf(t1, t) > ecdf(t2, t));
    return static_cast<double>(violations) / static_cast<double>(grid.size());
}

}  // namespace edt
