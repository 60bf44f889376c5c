#pragma once

#include <edt/harness.hpp>

namespace edt::testing {

/* Random small-integer samples: heavy ties exercise node multiplicities. */
inline EmpiricalSample random_sample(SplitMix64& g, int dim, std::size_t n, int lo = 0, int hi = 5) {
    EmpiricalSample s;
    for (std::size_t k = 0; k < n; ++k) {
        Consequence c(dim);
        for (int d = 0; d < dim; ++d)
            c[d] = static_cast<double>(lo + static_cast<int>(g.below(hi - lo + 1)));
        s.points.push_back(std::move(c));
    }
    return s;
}

/* Exhaustive FSD statistic: min over every upper set of the pooled DAG. */
inline double fsd_stat_bruteforce(const ConsequenceSpace& space, const EmpiricalSample& u,
                                  const EmpiricalSample& v, double scale_u = 1.0,
                                  double scale_v = 1.0) {
    auto pooled = detail::pool(u, v);
    FsdCore core(space, pooled);
    std::vector<double> w(core.dag().size(), 0.0);
    for (std::size_t p = 0; p < u.size(); ++p)
        w[core.node_of(p)] += scale_u / static_cast<double>(u.size());
    for (std::size_t p = 0; p < v.size(); ++p)
        w[core.node_of(u.size() + p)] -= scale_v / static_cast<double>(v.size());
    double best = 0.0;
    for (auto mask : enumerate_upper_sets(core.dag(), 1u << 13)) {
        double s = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (mask >> i & 1) s += w[i];
        best = std::min(best, s);
    }
    return best;
}

inline Protocol random_protocol(SplitMix64& g, int n_actions, int dim, std::size_t trials) {
    Protocol p;
    p.space = ConsequenceSpace::maximize_all(dim);
    for (int a = 0; a < n_actions; ++a) {
        const ActionId id = "a" + std::to_string(a + 1);
        for (std::size_t t = 0; t < trials; ++t) {
            Consequence c(dim);
            for (int d = 0; d < dim; ++d) c[d] = static_cast<double>(g.below(6));
            p.add_entry(id, std::move(c));
        }
    }
    return p;
}

}  // namespace edt::testing
