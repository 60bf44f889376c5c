#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "statistic.hpp"

namespace edt {

/* Records why an action was excluded: the dominating action and the
 * criterion values that triggered the exclusion. */
struct ExclusionRecord {
    ActionId excluded;
    ActionId dominator;
    double cr1 = 0.0;
    double cr2 = 0.0;
};

struct ChoiceSet {
    std::vector<ActionId> chosen;  // in sub-protocol order
    std::vector<ExclusionRecord> rationale;

    bool contains(const ActionId& a) const {
        return std::find(chosen.begin(), chosen.end(), a) != chosen.end();
    }
};

/* eps_z = c * z_min^(-1/4), delta(eps) = L * eps (Lipschitz surrogate for
 * the intractable sup-based regularizer).  strict_first_condition switches
 * the exclusion rule's first clause from cr1 > 0 to cr1 > 4*delta, the
 * variant that stays consistent without antisymmetry of the criterion. */
struct RegularizationSchedule {
    double c = 1.0;
    double L = 2.0;
    bool strict_first_condition = false;

    double four_delta(std::size_t z_min) const {
        return 4.0 * L * c * std::pow(static_cast<double>(z_min), -0.25);
    }
};

namespace detail {
inline std::vector<EmpiricalSample> samples_of(const SubProtocol& sp) {
    std::vector<EmpiricalSample> out;
    out.reserve(sp.selected.size());
    for (const auto& a : sp.selected) out.push_back(sample_of(*sp.parent, a));
    return out;
}
}  // namespace detail

/* Argmax set of empirical mean utility; exact ties all included. */
inline ChoiceSet ecf_eu(const SubProtocol& sp, const std::vector<double>& utility_weights) {
    const auto cls = FunctionClassSpec::eu(utility_weights, 0.0, 1.0);  // bounds unused here
    auto samples = detail::samples_of(sp);
    std::vector<double> means(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) means[i] = detail::eu_mean(cls, samples[i]);
    const double best = *std::max_element(means.begin(), means.end());
    ChoiceSet cs;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (means[i] == best) {
            cs.chosen.push_back(sp.selected[i]);
        } else {
            const std::size_t j = static_cast<std::size_t>(
                std::max_element(means.begin(), means.end()) - means.begin());
            cs.rationale.push_back({sp.selected[i], sp.selected[j], best - means[i], best - means[i]});
        }
    }
    return cs;
}

/* Generic pairwise exclusion engine: a_i is excluded iff some a_j satisfies
 * first(cr1) and second(cr2). */
template <typename First, typename Second>
inline ChoiceSet pairwise_exclusion(const SubProtocol& sp, const FunctionClassSpec& cls,
                                    First first, Second second) {
    const auto& space = sp.parent->space;
    auto samples = detail::samples_of(sp);
    const std::size_t n = samples.size();
    ChoiceSet cs;
    for (std::size_t i = 0; i < n; ++i) {
        bool excluded = false;
        for (std::size_t j = 0; j < n && !excluded; ++j) {
            if (i == j) continue;
            const auto cp = criterion_pair(cls, space, samples[i], samples[j]);
            if (first(cp.cr1) && second(cp.cr2)) {
                excluded = true;
                cs.rationale.push_back({sp.selected[i], sp.selected[j], cp.cr1, cp.cr2});
            }
        }
        if (!excluded) cs.chosen.push_back(sp.selected[i]);
    }
    return cs;
}

/* Naive ECF: exclude a_i iff some a_j strictly empirically dominates it
 * (cr1 > 0 and cr2 >= 0). */
inline ChoiceSet ecf_dominance(const SubProtocol& sp, const FunctionClassSpec& cls) {
    return pairwise_exclusion(
        sp, cls, [](double cr1) { return cr1 > 0.0; }, [](double cr2) { return cr2 >= 0.0; });
}

/* Regularized ECF: exclude iff cr1 > 0 (or cr1 > 4*delta with the strict
 * first condition) and cr2 + 4*delta(eps_zmin) >= 0. */
inline ChoiceSet ecf_regularized(const SubProtocol& sp, const FunctionClassSpec& cls,
                                 const RegularizationSchedule& sched) {
    const double fd = sched.four_delta(sp.parent->min_count(sp.selected));
    if (sched.strict_first_condition)
        return pairwise_exclusion(
            sp, cls, [fd](double cr1) { return cr1 > fd; }, [fd](double cr2) { return cr2 + fd >= 0.0; });
    return pairwise_exclusion(
        sp, cls, [](double cr1) { return cr1 > 0.0; }, [fd](double cr2) { return cr2 + fd >= 0.0; });
}

/* Gamma-robust RECF: exclude a_i only when a_j strictly dominates it for
 * every pair of credal-set members — cr1 worst-cased via robust_t_sup and
 * cr2 via robust_t_inf.  A superset of ecf_dominance's choice set. */
inline ChoiceSet recf_gamma_robust(const SubProtocol& sp, const FunctionClassSpec& cls,
                                   const ContaminationSpec& spec) {
    const auto& space = sp.parent->space;
    auto samples = detail::samples_of(sp);
    const std::size_t n = samples.size();
    std::vector<double> gammas(n);
    for (std::size_t i = 0; i < n; ++i)
        gammas[i] = spec.gamma(sp.selected[i], sp.parent->count(sp.selected[i]));
    ChoiceSet cs;
    for (std::size_t i = 0; i < n; ++i) {
        bool excluded = false;
        for (std::size_t j = 0; j < n && !excluded; ++j) {
            if (i == j) continue;
            const double cr1 =
                -robust_t_sup(cls, space, samples[i], samples[j], gammas[i], gammas[j]).value;
            const double cr2 =
                robust_t_inf(cls, space, samples[j], samples[i], gammas[j], gammas[i]).value;
            if (cr1 > 0.0 && cr2 >= 0.0) {
                excluded = true;
                cs.rationale.push_back({sp.selected[i], sp.selected[j], cr1, cr2});
            }
        }
        if (!excluded) cs.chosen.push_back(sp.selected[i]);
    }
    return cs;
}

}  // namespace edt
