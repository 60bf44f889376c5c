#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "choice.hpp"
#include "rng.hpp"
#include "statistic.hpp"

namespace edt {

struct TestConfig {
    enum class Mode { Permutation, Bootstrap };
    double alpha = 0.05;
    int n_resamples = 10000;
    std::uint64_t seed = 0;
    Mode mode = Mode::Permutation;

    void validate() const {
        if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("alpha must lie in (0, 0.5)");
        if (n_resamples < 1) throw std::invalid_argument("n_resamples must be positive");
    }
};

struct PairwiseResult {
    ActionId j, i;            // tested hypothesis: a_j weakly dominates a_i
    StatValue observed;
    std::vector<double> resample_stats;  // one statistic per resample
    double p_value = 1.0;
    bool reject = false;
    double quantile = 0.0;    // robust tests: Q(alpha, j, i)
};

struct TestReport {
    ActionId target;
    std::vector<ActionId> competitors;
    std::vector<PairwiseResult> pairwise;
    bool global_reject = false;
    TestConfig config;
};

struct BreakdownCurve {
    ActionId j, i;
    std::vector<std::pair<double, double>> points;  // (share, p_value)
    std::optional<double> breakdown_share;          // largest share still rejecting
};

namespace detail {

/* One resampled split of the pooled two-sample data: positions of the
 * pseudo-j sample followed by the pseudo-i sample. */
inline void draw_split(SplitMix64& g, TestConfig::Mode mode, std::size_t l,
                       std::vector<std::size_t>& idx) {
    idx.resize(l);
    if (mode == TestConfig::Mode::Permutation) {
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        g.shuffle(idx);
    } else {
        for (auto& x : idx) x = g.below(l);
    }
}

inline void split_samples(const std::vector<Consequence>& pooled, const std::vector<std::size_t>& idx,
                          std::size_t zj, EmpiricalSample& u, EmpiricalSample& v) {
    u.points.clear();
    v.points.clear();
    for (std::size_t m = 0; m < idx.size(); ++m)
        (m < zj ? u : v).points.push_back(pooled[idx[m]]);
}

template <typename Stat>
inline std::vector<double> resample_statistics(const std::vector<Consequence>& pooled, std::size_t zj,
                                               const TestConfig& cfg, std::uint64_t pair_seed,
                                               Stat stat) {
    std::vector<double> out(cfg.n_resamples);
    std::vector<std::size_t> idx;
    EmpiricalSample u, v;
    for (int k = 0; k < cfg.n_resamples; ++k) {
        SplitMix64 g(mix_keys(pair_seed, static_cast<std::uint64_t>(k) + 1));
        draw_split(g, cfg.mode, pooled.size(), idx);
        split_samples(pooled, idx, zj, u, v);
        out[k] = stat(u, v);
    }
    return out;
}

inline double add_one_p_value(const std::vector<double>& resampled, double observed) {
    std::size_t count = 0;
    for (double t : resampled) count += (t <= observed);
    return static_cast<double>(1 + count) / static_cast<double>(resampled.size() + 1);
}

/* Lower empirical quantile: order statistic floor(alpha*(N+1)), floored at 1. */
inline double lower_quantile(std::vector<double> v, double alpha) {
    std::size_t k = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(v.size() + 1)));
    if (k < 1) k = 1;
    if (k > v.size()) k = v.size();
    std::nth_element(v.begin(), v.begin() + (k - 1), v.end());
    return v[k - 1];
}

}  // namespace detail

/* Permutation (or bootstrap) test for the pairwise hypothesis that a_j
 * weakly dominates a_i; small p-values speak against dominance. */
inline PairwiseResult pairwise_test_on_samples(const ConsequenceSpace& space,
                                               const EmpiricalSample& sj, const EmpiricalSample& si,
                                               const FunctionClassSpec& cls, const TestConfig& cfg,
                                               std::uint64_t pair_seed) {
    cfg.validate();
    PairwiseResult r;
    r.observed = t_statistic(cls, space, sj, si);
    auto pooled = detail::pool(sj, si);
    r.resample_stats = detail::resample_statistics(
        pooled, sj.size(), cfg, pair_seed,
        [&](const EmpiricalSample& u, const EmpiricalSample& v) {
            return t_statistic(cls, space, u, v).value;
        });
    r.p_value = detail::add_one_p_value(r.resample_stats, r.observed.value);
    r.reject = r.p_value < cfg.alpha;
    return r;
}

inline PairwiseResult pairwise_permutation_test(const Protocol& p, const ActionId& j,
                                                const ActionId& i, const FunctionClassSpec& cls,
                                                const TestConfig& cfg) {
    if (j == i) throw std::domain_error("pairwise test needs two distinct actions");
    const std::uint64_t pair_seed = mix_keys(cfg.seed, static_cast<std::uint64_t>(p.action_index(j)),
                                             static_cast<std::uint64_t>(p.action_index(i)));
    auto r = pairwise_test_on_samples(p.space, sample_of(p, j), sample_of(p, i), cls, cfg, pair_seed);
    r.j = j;
    r.i = i;
    return r;
}

/* Conjunction membership test: reject "target not in the choice set" iff
 * every pairwise dominance hypothesis against the target is rejected. */
inline TestReport membership_test(const Protocol& p, const ActionId& target,
                                  const std::vector<ActionId>& D, const FunctionClassSpec& cls,
                                  const TestConfig& cfg) {
    if (D.size() < 2) throw std::domain_error("membership test needs at least two actions");
    if (std::find(D.begin(), D.end(), target) == D.end())
        throw std::domain_error("target not contained in D");
    TestReport rep;
    rep.target = target;
    rep.config = cfg;
    rep.global_reject = true;
    for (const auto& j : D) {
        if (j == target) continue;
        rep.competitors.push_back(j);
        rep.pairwise.push_back(pairwise_permutation_test(p, j, target, cls, cfg));
        rep.global_reject = rep.global_reject && rep.pairwise.back().reject;
    }
    return rep;
}

/* Robust pairwise test: observed statistic worst-cased upward
 * (robust sup), resampled statistics worst-cased downward (robust inf);
 * reject iff d0 < Q(alpha, j, i), ties conservatively not rejected. */
inline PairwiseResult robust_pairwise_test(const Protocol& p, const ActionId& j, const ActionId& i,
                                           const FunctionClassSpec& cls, const ContaminationSpec& spec,
                                           const TestConfig& cfg) {
    if (j == i) throw std::domain_error("pairwise test needs two distinct actions");
    cfg.validate();
    const auto sj = sample_of(p, j), si = sample_of(p, i);
    const double gj = spec.gamma(j, sj.size()), gi = spec.gamma(i, si.size());
    const std::uint64_t pair_seed = mix_keys(cfg.seed, static_cast<std::uint64_t>(p.action_index(j)),
                                             static_cast<std::uint64_t>(p.action_index(i)));
    PairwiseResult r;
    r.j = j;
    r.i = i;
    r.observed = robust_t_sup(cls, p.space, sj, si, gj, gi);
    auto pooled = detail::pool(sj, si);
    r.resample_stats = detail::resample_statistics(
        pooled, sj.size(), cfg, pair_seed,
        [&](const EmpiricalSample& u, const EmpiricalSample& v) {
            return robust_t_inf(cls, p.space, u, v, gj, gi).value;
        });
    r.p_value = detail::add_one_p_value(r.resample_stats, r.observed.value);
    r.quantile = detail::lower_quantile(r.resample_stats, cfg.alpha);
    r.reject = r.observed.value < r.quantile;
    return r;
}

inline TestReport robust_membership_test(const Protocol& p, const ActionId& target,
                                         const std::vector<ActionId>& D, const FunctionClassSpec& cls,
                                         const ContaminationSpec& spec, const TestConfig& cfg) {
    if (D.size() < 2) throw std::domain_error("membership test needs at least two actions");
    if (std::find(D.begin(), D.end(), target) == D.end())
        throw std::domain_error("target not contained in D");
    TestReport rep;
    rep.target = target;
    rep.config = cfg;
    rep.global_reject = true;
    for (const auto& j : D) {
        if (j == target) continue;
        rep.competitors.push_back(j);
        rep.pairwise.push_back(robust_pairwise_test(p, j, target, cls, spec, cfg));
        rep.global_reject = rep.global_reject && rep.pairwise.back().reject;
    }
    return rep;
}

namespace detail {

/* Core profile value m of one split; robust statistics at equal share g are
 * affine in m: FSD sup = min(0, g + (1-g)m), inf = min(0, -g + (1-g)m);
 * EU sup/inf = (1-g)m +/- g(B-A).  This is the closed form in the
 * contamination parameter used by the breakdown curves. */
inline double core_profile(const FunctionClassSpec& cls, const ConsequenceSpace& space,
                           const EmpiricalSample& u, const EmpiricalSample& v) {
    switch (cls.variant) {
        case FunctionClassSpec::Variant::EuSingleton:
            return eu_mean(cls, u) - eu_mean(cls, v);
        case FunctionClassSpec::Variant::FsdIsotoneIndicators: {
            FsdCore core(space, pool(u, v));
            return fsd_core_min(core, u.size(), v.size(), 1.0, 1.0).value;
        }
        default:
            throw std::domain_error("breakdown curves unsupported for this class");
    }
}

inline double robust_from_profile(const FunctionClassSpec& cls, double m, double g, bool sup) {
    if (cls.variant == FunctionClassSpec::Variant::EuSingleton) {
        const double width = g * (cls.upper_bound - cls.lower_bound);
        return (1.0 - g) * m + (sup ? width : -width);
    }
    return std::min(0.0, (sup ? g : -g) + (1.0 - g) * m);
}

}  // namespace detail

/* p-value of the robust test as a function of the contamination share,
 * over one shared permutation stream (common random numbers). */
inline BreakdownCurve breakdown_curve(const Protocol& p, const ActionId& j, const ActionId& i,
                                      const FunctionClassSpec& cls, const TestConfig& cfg,
                                      const std::vector<double>& shares) {
    cfg.validate();
    if (!std::is_sorted(shares.begin(), shares.end()))
        throw std::invalid_argument("breakdown shares must be sorted ascending");
    const auto sj = sample_of(p, j), si = sample_of(p, i);
    const std::uint64_t pair_seed = mix_keys(cfg.seed, static_cast<std::uint64_t>(p.action_index(j)),
                                             static_cast<std::uint64_t>(p.action_index(i)));
    const double m_obs = detail::core_profile(cls, p.space, sj, si);
    auto pooled = detail::pool(sj, si);
    const auto m_resampled = detail::resample_statistics(
        pooled, sj.size(), cfg, pair_seed,
        [&](const EmpiricalSample& u, const EmpiricalSample& v) {
            return detail::core_profile(cls, p.space, u, v);
        });
    BreakdownCurve curve;
    curve.j = j;
    curve.i = i;
    for (double g : shares) {
        if (g < 0.0 || g > 1.0) throw std::domain_error("share outside [0,1]");
        const double d0 = detail::robust_from_profile(cls, m_obs, g, /*sup=*/true);
        std::size_t count = 0;
        for (double m : m_resampled)
            count += (detail::robust_from_profile(cls, m, g, /*sup=*/false) <= d0);
        const double pv = static_cast<double>(1 + count) / static_cast<double>(cfg.n_resamples + 1);
        curve.points.emplace_back(g, pv);
        if (pv < cfg.alpha) curve.breakdown_share = g;
    }
    return curve;
}

/* Empirical check of the level guarantee: rejection rate of the pairwise
 * test under equal-distribution binomial sampling. */
inline double type1_error_simulation(double binom_p, int binom_n, std::size_t z,
                                     const FunctionClassSpec& cls, const TestConfig& cfg,
                                     int n_trials) {
    const ConsequenceSpace space = ConsequenceSpace::maximize_all(1);
    int rejections = 0;
    for (int t = 0; t < n_trials; ++t) {
        SplitMix64 g(mix_keys(cfg.seed, 0x7431u, static_cast<std::uint64_t>(t)));
        EmpiricalSample a, b;
        for (std::size_t s = 0; s < z; ++s)
            a.points.push_back({static_cast<double>(g.binomial(binom_n, binom_p))});
        for (std::size_t s = 0; s < z; ++s)
            b.points.push_back({static_cast<double>(g.binomial(binom_n, binom_p))});
        const std::uint64_t pair_seed = mix_keys(cfg.seed, 0x9e2au, static_cast<std::uint64_t>(t));
        if (pairwise_test_on_samples(space, a, b, cls, cfg, pair_seed).reject) ++rejections;
    }
    return static_cast<double>(rejections) / static_cast<double>(n_trials);
}

}  // namespace edt
