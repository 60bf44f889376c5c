#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "protocol.hpp"

namespace edt {

/* Componentwise order after direction normalization: x dominates y iff
 * x >= y in every coordinate. */
inline bool dominates(const ConsequenceSpace& space, const Consequence& x, const Consequence& y) {
    if (static_cast<int>(x.size()) != space.dim || static_cast<int>(y.size()) != space.dim)
        throw std::domain_error("dominates: dimension mismatch");
    for (int d = 0; d < space.dim; ++d)
        if (x[d] < y[d]) return false;
    return true;
}

/* DAG over the distinct pooled points with an edge x -> y whenever
 * x <= y componentwise (transitive reduction stored).  Nodes carry the
 * multiplicity of each distinct point in the pooled input. */
struct DominanceDag {
    std::vector<Consequence> nodes;          // distinct points, sorted lexicographically
    std::vector<std::size_t> multiplicity;   // pooled multiplicity per node
    std::vector<std::vector<int>> succ;      // covering successors (transitive reduction)
    std::vector<std::vector<bool>> leq;      // leq[i][j]: node i <= node j (full relation)

    std::size_t size() const { return nodes.size(); }
};

inline DominanceDag build_dominance_dag(const ConsequenceSpace& space,
                                        const std::vector<Consequence>& points) {
    if (points.empty()) throw std::invalid_argument("build_dominance_dag: empty point list");
    DominanceDag dag;
    std::map<Consequence, std::size_t> mult;
    for (const auto& p : points) {
        if (static_cast<int>(p.size()) != space.dim)
            throw std::domain_error("build_dominance_dag: dimension mismatch");
        ++mult[p];
    }
    for (auto& [pt, m] : mult) {
        dag.nodes.push_back(pt);
        dag.multiplicity.push_back(m);
    }
    const int n = static_cast<int>(dag.nodes.size());
    dag.leq.assign(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            dag.leq[i][j] = dominates(space, dag.nodes[j], dag.nodes[i]);
    dag.succ.assign(n, {});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j || !dag.leq[i][j]) continue;
            bool covering = true;  // no strictly intermediate node
            for (int k = 0; k < n && covering; ++k)
                if (k != i && k != j && dag.leq[i][k] && dag.leq[k][j]) covering = false;
            if (covering) dag.succ[i].push_back(j);
        }
    return dag;
}

/* Brute-force enumeration of every upper set (including the empty and the
 * full set) as node bitmasks.  Oracle for the min-cut path; guarded by
 * `limit` against exponential blow-up. */
inline std::vector<std::uint64_t> enumerate_upper_sets(const DominanceDag& dag, std::size_t limit) {
    const int n = static_cast<int>(dag.size());
    if (n > 62) throw std::runtime_error("enumerate_upper_sets: too many nodes");
    std::vector<std::uint64_t> out;
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
        bool upper = true;
        for (int i = 0; i < n && upper; ++i) {
            if (!(mask >> i & 1)) continue;
            for (int j : dag.succ[i])
                if (!(mask >> j & 1)) {
                    upper = false;
                    break;
                }
        }
        if (upper) {
            out.push_back(mask);
            if (out.size() > limit) throw std::runtime_error("enumerate_upper_sets: limit exceeded");
        }
    }
    return out;
}

}  // namespace edt
