#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "protocol.hpp"

namespace edt {

/* Evaluation grid for the SSD statistic (integrated weighted ECDF
 * differences).  Must cover all observed sample values. */
struct GridSpec {
    double lo = 0.0;
    double hi = 40.0;
    int points = 50000;

    void validate() const {
        if (!(lo < hi) || points < 2) throw std::invalid_argument("GridSpec: need lo < hi, points >= 2");
    }
};

/* Declarative description of the function class F driving each statistic
 * engine.  FsdIsotoneIndicators and SsdConcave contain the zero function,
 * so their statistics are non-positive. */
struct FunctionClassSpec {
    enum class Variant { EuSingleton, FsdIsotoneIndicators, SsdConcave, ExplicitFinite };

    Variant variant = Variant::FsdIsotoneIndicators;
    std::vector<double> eu_weights;  // per-coordinate linear weights (EuSingleton)
    std::optional<GridSpec> grid;    // SsdConcave; defaulted from data when absent
    std::vector<std::function<double(const Consequence&)>> fs;  // ExplicitFinite
    double lower_bound = 0.0;  // A
    double upper_bound = 1.0;  // B

    bool contains_zero() const {
        return variant == Variant::FsdIsotoneIndicators || variant == Variant::SsdConcave;
    }

    static FunctionClassSpec fsd() {
        FunctionClassSpec c;
        c.variant = Variant::FsdIsotoneIndicators;
        c.lower_bound = 0.0;
        c.upper_bound = 1.0;
        return c;
    }
    static FunctionClassSpec eu(std::vector<double> weights, double A, double B) {
        if (!(A < B)) throw std::invalid_argument("FunctionClassSpec: need A < B");
        FunctionClassSpec c;
        c.variant = Variant::EuSingleton;
        c.eu_weights = std::move(weights);
        c.lower_bound = A;
        c.upper_bound = B;
        return c;
    }
    static FunctionClassSpec ssd(std::optional<GridSpec> g = std::nullopt) {
        if (g) g->validate();
        FunctionClassSpec c;
        c.variant = Variant::SsdConcave;
        c.grid = g;
        c.lower_bound = 0.0;
        c.upper_bound = 1.0;
        return c;
    }
    static FunctionClassSpec explicit_finite(
        std::vector<std::function<double(const Consequence&)>> fs, double A, double B) {
        if (!(A < B)) throw std::invalid_argument("FunctionClassSpec: need A < B");
        if (fs.empty()) throw std::invalid_argument("FunctionClassSpec: empty function list");
        FunctionClassSpec c;
        c.variant = Variant::ExplicitFinite;
        c.fs = std::move(fs);
        c.lower_bound = A;
        c.upper_bound = B;
        return c;
    }

    double eu_value(const Consequence& x) const {
        if (eu_weights.size() != x.size())
            throw std::domain_error("EuSingleton: weight/consequence dimension mismatch");
        double v = 0.0;
        for (std::size_t d = 0; d < x.size(); ++d) v += eu_weights[d] * x[d];
        return v;
    }
};

}  // namespace edt
