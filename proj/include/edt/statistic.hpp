#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "function_class.hpp"
#include "maxflow.hpp"
#include "order.hpp"
#include "protocol.hpp"

namespace edt {

/* Witness of the minimizing function: enough to re-evaluate the statistic
 * value independently (upper set + affine adjustment for FSD, the single
 * utility for EU, a grid index for SSD, a list index for finite classes). */
struct StatWitness {
    enum class Kind { EuFunction, UpperSet, GridIndex, FiniteIndex };
    Kind kind = Kind::UpperSet;
    std::vector<Consequence> upper_set;  // minimizing upper set (possibly empty = zero function)
    int index = -1;                      // grid index / function index
    double shift = 0.0;                  // additive contamination term
    double scale_u = 1.0, scale_v = 1.0; // (1 - gamma) factors on the two samples
    bool capped = false;                 // class contains the zero function
};

struct StatValue {
    double value = 0.0;
    StatWitness witness;
};

struct CriterionPair {
    double cr1 = 0.0;
    double cr2 = 0.0;
};

/* Per-action contamination shares gamma (linear-vacuous credal sets), or
 * contaminated-point counts k with gamma = k / z_a. */
struct ContaminationSpec {
    std::map<ActionId, double> gamma_per_action;
    std::map<ActionId, std::size_t> k_per_action;

    double gamma(const ActionId& a, std::size_t z) const {
        if (auto it = gamma_per_action.find(a); it != gamma_per_action.end()) {
            if (it->second < 0.0 || it->second > 1.0) throw std::domain_error("gamma outside [0,1]");
            return it->second;
        }
        if (auto it = k_per_action.find(a); it != k_per_action.end()) {
            if (it->second > z) throw std::domain_error("contaminated-point count exceeds trials");
            return static_cast<double>(it->second) / static_cast<double>(z);
        }
        return 0.0;
    }
    static ContaminationSpec uniform(const std::vector<ActionId>& actions, double g) {
        ContaminationSpec s;
        for (const auto& a : actions) s.gamma_per_action[a] = g;
        return s;
    }
};

// ---- FSD core: minimize a node-weighted sum over upper sets --------------

/* Precomputed pooled structure so that permutation splits can be evaluated
 * repeatedly without rebuilding the dominance DAG. */
class FsdCore {
  public:
    FsdCore(const ConsequenceSpace& space, std::vector<Consequence> pooled)
        : space_(space), pooled_(std::move(pooled)), dag_(build_dominance_dag(space, pooled_)) {
        point_node_.reserve(pooled_.size());
        for (const auto& p : pooled_) {
            auto it = std::lower_bound(dag_.nodes.begin(), dag_.nodes.end(), p);
            point_node_.push_back(static_cast<int>(it - dag_.nodes.begin()));
        }
    }

    const DominanceDag& dag() const { return dag_; }
    int node_of(std::size_t pooled_pos) const { return point_node_[pooled_pos]; }

    struct Result {
        double value = 0.0;
        std::vector<int> nodes;  // the minimizing upper set
    };

    /* min over all upper sets U (including empty and full) of sum_{i in U} w_i. */
    Result minimize(const std::vector<double>& w) const {
        return space_.dim == 1 ? minimize_chain(w) : minimize_mincut(w);
    }

    /* Chain path (dim 1): upper sets are value suffixes. */
    Result minimize_chain(const std::vector<double>& w) const {
        const int n = static_cast<int>(dag_.size());
        double s = 0.0, best = 0.0;
        int best_start = n;  // empty suffix
        for (int i = n - 1; i >= 0; --i) {
            s += w[i];
            if (s < best) {
                best = s;
                best_start = i;
            }
        }
        Result r;
        r.nodes.reserve(n - best_start);
        for (int i = best_start; i < n; ++i) r.nodes.push_back(i);
        r.value = witness_sum(w, r.nodes);
        return r;
    }

    /* Min-cut path (any dim): max-weight closure under the successor relation. */
    Result minimize_mincut(const std::vector<double>& w) const {
        const int n = static_cast<int>(dag_.size());
        const int src = n, snk = n + 1;
        Dinic dinic(n + 2);
        double pos_total = 0.0;
        const double inf = 1e18;
        for (int i = 0; i < n; ++i) {
            const double p = -w[i];  // closure gain of selecting node i
            if (p > 0.0) {
                dinic.add_edge(src, i, p);
                pos_total += p;
            } else if (p < 0.0) {
                dinic.add_edge(i, snk, -p);
            }
            for (int j : dag_.succ[i]) dinic.add_edge(i, j, inf);
        }
        dinic.max_flow(src, snk);
        auto side = dinic.min_cut_source_side();
        Result r;
        for (int i = 0; i < n; ++i)
            if (side[i]) r.nodes.push_back(i);
        r.value = witness_sum(w, r.nodes);
        (void)pos_total;
        return r;
    }

    /* Deterministic re-summation (descending node order, mirroring the chain
     * accumulation) so both paths produce comparable floating-point values. */
    static double witness_sum(const std::vector<double>& w, const std::vector<int>& nodes) {
        double s = 0.0;
        for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) s += w[*it];
        return s;
    }

    /* Node weights for samples given as multiplicities per node. */
    std::vector<double> weights(const std::vector<std::size_t>& mult_u, double scale_u,
                                const std::vector<std::size_t>& mult_v, double scale_v) const {
        std::vector<double> w(dag_.size());
        for (std::size_t i = 0; i < w.size(); ++i)
            w[i] = scale_u * static_cast<double>(mult_u[i]) - scale_v * static_cast<double>(mult_v[i]);
        return w;
    }

    std::vector<std::size_t> multiplicities(const std::vector<std::size_t>& pooled_positions) const {
        std::vector<std::size_t> m(dag_.size(), 0);
        for (auto p : pooled_positions) ++m[point_node_[p]];
        return m;
    }

  private:
    ConsequenceSpace space_;
    std::vector<Consequence> pooled_;
    DominanceDag dag_;
    std::vector<int> point_node_;
};

namespace detail {

inline std::vector<Consequence> pool(const EmpiricalSample& u, const EmpiricalSample& v) {
    std::vector<Consequence> all = u.points;
    all.insert(all.end(), v.points.begin(), v.points.end());
    return all;
}

/* Core minimum m = min over upper sets of (scale_u*P_u(U) - scale_v*P_v(U)). */
inline FsdCore::Result fsd_core_min(const FsdCore& core, std::size_t n_u, std::size_t n_v,
                                    double scale_u, double scale_v) {
    std::vector<std::size_t> mu(core.dag().size(), 0), mv(core.dag().size(), 0);
    for (std::size_t p = 0; p < n_u; ++p) ++mu[core.node_of(p)];
    for (std::size_t p = 0; p < n_v; ++p) ++mv[core.node_of(n_u + p)];
    auto w = core.weights(mu, scale_u / static_cast<double>(n_u), mv,
                          scale_v / static_cast<double>(n_v));
    return core.minimize(w);
}

inline StatValue fsd_stat(const ConsequenceSpace& space, const EmpiricalSample& u,
                          const EmpiricalSample& v, double gamma_u, double gamma_v, double shift) {
    FsdCore core(space, pool(u, v));
    auto res = fsd_core_min(core, u.size(), v.size(), 1.0 - gamma_u, 1.0 - gamma_v);
    StatValue sv;
    sv.value = std::min(0.0, shift + res.value);
    sv.witness.kind = StatWitness::Kind::UpperSet;
    sv.witness.shift = shift;
    sv.witness.scale_u = 1.0 - gamma_u;
    sv.witness.scale_v = 1.0 - gamma_v;
    sv.witness.capped = true;
    for (int i : res.nodes) sv.witness.upper_set.push_back(core.dag().nodes[i]);
    if (shift + res.value >= 0.0) sv.witness.upper_set.clear();  // zero function wins
    return sv;
}

inline double eu_mean(const FunctionClassSpec& cls, const EmpiricalSample& s) {
    double sum = 0.0;
    for (const auto& p : s.points) sum += cls.eu_value(p);
    return sum / static_cast<double>(s.size());
}

inline void require_dim1(const ConsequenceSpace& space) {
    if (space.dim != 1) throw std::domain_error("SsdConcave requires a one-dimensional space");
}

inline GridSpec ssd_default_grid(const EmpiricalSample& u, const EmpiricalSample& v) {
    double lo = 1e300, hi = -1e300;
    for (const auto& p : u.points) lo = std::min(lo, p[0]), hi = std::max(hi, p[0]);
    for (const auto& p : v.points) lo = std::min(lo, p[0]), hi = std::max(hi, p[0]);
    return GridSpec{lo - 1.0, hi + 1.0, 50000};
}

/* SSD grid statistic: (span/len) * min_k (1/t_k) * sum_{j<=k} (F_v - F_u)(t_j)
 * over the grid without its first point, capped at 0 (zero function).  The
 * orientation follows inf_f (E_u f - E_v f) over concave increasing f via
 * f_t(x) = min(x, t): E min(X, t) = t - integral of F_X up to t. */
inline StatValue ssd_stat(const ConsequenceSpace& space, const EmpiricalSample& u,
                          const EmpiricalSample& v, const GridSpec& g) {
    require_dim1(space);
    g.validate();
    std::vector<double> xs, ys;
    for (const auto& p : u.points) xs.push_back(p[0]);
    for (const auto& p : v.points) ys.push_back(p[0]);
    for (double x : xs)
        if (x < g.lo || x > g.hi) throw std::domain_error("SSD grid does not cover the data");
    for (double y : ys)
        if (y < g.lo || y > g.hi) throw std::domain_error("SSD grid does not cover the data");
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    const auto ecdf = [](const std::vector<double>& s, double t) {
        return static_cast<double>(std::upper_bound(s.begin(), s.end(), t) - s.begin()) /
               static_cast<double>(s.size());
    };
    const double step = (g.hi - g.lo) / static_cast<double>(g.points - 1);
    double cum = 0.0, best = 0.0;
    int best_k = -1;
    for (int k = 1; k < g.points; ++k) {
        const double t = g.lo + step * static_cast<double>(k);
        cum += ecdf(ys, t) - ecdf(xs, t);
        const double val = cum / t;
        if (val < best) {
            best = val;
            best_k = k;
        }
    }
    StatValue sv;
    sv.value = (g.hi - g.lo) / static_cast<double>(g.points) * best;
    if (sv.value > 0.0) sv.value = 0.0;
    sv.witness.kind = StatWitness::Kind::GridIndex;
    sv.witness.index = best_k;
    sv.witness.capped = true;
    return sv;
}

}  // namespace detail

/* T = inf over f in F of (E_u f - E_v f), exact per class. */
inline StatValue t_statistic(const FunctionClassSpec& cls, const ConsequenceSpace& space,
                             const EmpiricalSample& u, const EmpiricalSample& v) {
    if (u.size() == 0 || v.size() == 0) throw std::domain_error("t_statistic: empty sample");
    switch (cls.variant) {
        case FunctionClassSpec::Variant::EuSingleton: {
            StatValue sv;
            sv.value = detail::eu_mean(cls, u) - detail::eu_mean(cls, v);
            sv.witness.kind = StatWitness::Kind::EuFunction;
            return sv;
        }
        case FunctionClassSpec::Variant::FsdIsotoneIndicators:
            return detail::fsd_stat(space, u, v, 0.0, 0.0, 0.0);
        case FunctionClassSpec::Variant::SsdConcave:
            return detail::ssd_stat(space, u, v, cls.grid ? *cls.grid : detail::ssd_default_grid(u, v));
        case FunctionClassSpec::Variant::ExplicitFinite: {
            StatValue sv;
            sv.value = 1e300;
            for (std::size_t fi = 0; fi < cls.fs.size(); ++fi) {
                double su = 0.0, svv = 0.0;
                for (const auto& p : u.points) su += cls.fs[fi](p);
                for (const auto& p : v.points) svv += cls.fs[fi](p);
                const double val = su / static_cast<double>(u.size()) - svv / static_cast<double>(v.size());
                if (val < sv.value) {
                    sv.value = val;
                    sv.witness.index = static_cast<int>(fi);
                }
            }
            sv.witness.kind = StatWitness::Kind::FiniteIndex;
            return sv;
        }
    }
    throw std::logic_error("unreachable");
}

inline CriterionPair criterion_pair(const FunctionClassSpec& cls, const ConsequenceSpace& space,
                                    const EmpiricalSample& x, const EmpiricalSample& y) {
    CriterionPair cp;
    cp.cr1 = -t_statistic(cls, space, x, y).value;
    cp.cr2 = t_statistic(cls, space, y, x).value;
    return cp;
}

namespace detail {
inline void check_gamma(double g) {
    if (g < 0.0 || g > 1.0) throw std::domain_error("gamma outside [0,1]");
}
}  // namespace detail

/* sup of the statistic over the two gamma-contamination credal sets.
 * Contamination mass sits on a virtual top point for u and a virtual bottom
 * point for v; for FSD this collapses to min(0, gamma_u + m) with m the
 * core upper-set minimum at scales (1-gamma); for EU the virtual points
 * evaluate to the class bounds B / A. */
inline StatValue robust_t_sup(const FunctionClassSpec& cls, const ConsequenceSpace& space,
                              const EmpiricalSample& u, const EmpiricalSample& v, double gamma_u,
                              double gamma_v) {
    detail::check_gamma(gamma_u);
    detail::check_gamma(gamma_v);
    switch (cls.variant) {
        case FunctionClassSpec::Variant::EuSingleton: {
            StatValue sv;
            sv.value = (1.0 - gamma_u) * detail::eu_mean(cls, u) + gamma_u * cls.upper_bound -
                       (1.0 - gamma_v) * detail::eu_mean(cls, v) - gamma_v * cls.lower_bound;
            sv.witness.kind = StatWitness::Kind::EuFunction;
            sv.witness.shift = gamma_u * cls.upper_bound - gamma_v * cls.lower_bound;
            sv.witness.scale_u = 1.0 - gamma_u;
            sv.witness.scale_v = 1.0 - gamma_v;
            return sv;
        }
        case FunctionClassSpec::Variant::FsdIsotoneIndicators:
            return detail::fsd_stat(space, u, v, gamma_u, gamma_v, gamma_u);
        default:
            throw std::domain_error("robust bounds unsupported for this class");
    }
}

/* inf counterpart: contamination on u's bottom / v's top. */
inline StatValue robust_t_inf(const FunctionClassSpec& cls, const ConsequenceSpace& space,
                              const EmpiricalSample& u, const EmpiricalSample& v, double gamma_u,
                              double gamma_v) {
    detail::check_gamma(gamma_u);
    detail::check_gamma(gamma_v);
    switch (cls.variant) {
        case FunctionClassSpec::Variant::EuSingleton: {
            StatValue sv;
            sv.value = (1.0 - gamma_u) * detail::eu_mean(cls, u) + gamma_u * cls.lower_bound -
                       (1.0 - gamma_v) * detail::eu_mean(cls, v) - gamma_v * cls.upper_bound;
            sv.witness.kind = StatWitness::Kind::EuFunction;
            sv.witness.shift = gamma_u * cls.lower_bound - gamma_v * cls.upper_bound;
            sv.witness.scale_u = 1.0 - gamma_u;
            sv.witness.scale_v = 1.0 - gamma_v;
            return sv;
        }
        case FunctionClassSpec::Variant::FsdIsotoneIndicators:
            return detail::fsd_stat(space, u, v, gamma_u, gamma_v, -gamma_v);
        default:
            throw std::domain_error("robust bounds unsupported for this class");
    }
}

/* Re-evaluates a witness against the samples it was produced from; used to
 * validate the 1e-12 reproduction invariant. */
inline double reevaluate_witness(const FunctionClassSpec& cls, const ConsequenceSpace& space,
                                 const StatValue& sv, const EmpiricalSample& u,
                                 const EmpiricalSample& v) {
    switch (sv.witness.kind) {
        case StatWitness::Kind::EuFunction:
            return sv.witness.shift + sv.witness.scale_u * detail::eu_mean(cls, u) -
                   sv.witness.scale_v * detail::eu_mean(cls, v);
        case StatWitness::Kind::UpperSet: {
            const auto member = [&](const Consequence& p) {
                for (const auto& q : sv.witness.upper_set)
                    if (q == p) return true;
                return false;
            };
            std::size_t cu = 0, cv = 0;
            for (const auto& p : u.points) cu += member(p);
            for (const auto& p : v.points) cv += member(p);
            const double val = sv.witness.shift +
                               sv.witness.scale_u * static_cast<double>(cu) / static_cast<double>(u.size()) -
                               sv.witness.scale_v * static_cast<double>(cv) / static_cast<double>(v.size());
            return std::min(0.0, val);
        }
        case StatWitness::Kind::GridIndex: {
            const GridSpec g = cls.grid ? *cls.grid : detail::ssd_default_grid(u, v);
            if (sv.witness.index < 0) return 0.0;
            std::vector<double> xs, ys;
            for (const auto& p : u.points) xs.push_back(p[0]);
            for (const auto& p : v.points) ys.push_back(p[0]);
            std::sort(xs.begin(), xs.end());
            std::sort(ys.begin(), ys.end());
            const auto ecdf = [](const std::vector<double>& s, double t) {
                return static_cast<double>(std::upper_bound(s.begin(), s.end(), t) - s.begin()) /
                       static_cast<double>(s.size());
            };
            const double step = (g.hi - g.lo) / static_cast<double>(g.points - 1);
            double cum = 0.0;
            for (int k = 1; k <= sv.witness.index; ++k) {
                const double t = g.lo + step * static_cast<double>(k);
                cum += ecdf(ys, t) - ecdf(xs, t);
            }
            const double t = g.lo + step * static_cast<double>(sv.witness.index);
            return std::min(0.0, (g.hi - g.lo) / static_cast<double>(g.points) * (cum / t));
        }
        case StatWitness::Kind::FiniteIndex: {
            double su = 0.0, svv = 0.0;
            for (const auto& p : u.points) su += cls.fs[sv.witness.index](p);
            for (const auto& p : v.points) svv += cls.fs[sv.witness.index](p);
            return su / static_cast<double>(u.size()) - svv / static_cast<double>(v.size());
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace edt
