#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace edt {

enum class Direction { Maximize, Minimize };

/* Dimension and per-coordinate optimization direction of the consequence
 * space.  Minimize coordinates are negated once at ingestion so all
 * downstream code can assume componentwise Maximize. */
struct ConsequenceSpace {
    int dim = 1;
    std::vector<Direction> directions;  // length dim

    ConsequenceSpace() : directions{Direction::Maximize} {}
    ConsequenceSpace(int d, std::vector<Direction> dirs) : dim(d), directions(std::move(dirs)) {
        if (dim < 1 || static_cast<int>(directions.size()) != dim)
            throw std::invalid_argument("ConsequenceSpace: need one direction per dimension");
    }
    static ConsequenceSpace maximize_all(int d) {
        return ConsequenceSpace(d, std::vector<Direction>(d, Direction::Maximize));
    }
};

using Consequence = std::vector<double>;  // length space.dim, direction-normalized
using ActionId = std::string;

inline void check_finite(const Consequence& c) {
    for (double v : c)
        if (!std::isfinite(v)) throw std::invalid_argument("consequence has non-finite entry");
}

struct ProtocolEntry {
    ActionId action;
    Consequence consequence;
};

/* Observed family of (action, consequence) pairs in observation order.
 * Actions are listed in first-appearance order; every action has >= 1 entry. */
struct Protocol {
    ConsequenceSpace space;
    std::vector<ActionId> actions;
    std::vector<ProtocolEntry> entries;

    Protocol() = default;
    Protocol(ConsequenceSpace sp, std::vector<ProtocolEntry> es) : space(std::move(sp)) {
        for (auto& e : es) add_entry(e.action, e.consequence);
        validate();
    }

    void add_entry(const ActionId& a, Consequence c) {
        if (static_cast<int>(c.size()) != space.dim)
            throw std::invalid_argument("consequence dimension mismatch for action " + a);
        check_finite(c);
        if (std::find(actions.begin(), actions.end(), a) == actions.end()) actions.push_back(a);
        entries.push_back({a, std::move(c)});
    }

    void validate() const {
        if (actions.empty()) throw std::invalid_argument("protocol has no actions");
        for (const auto& a : actions)
            if (count(a) == 0) throw std::invalid_argument("action with zero trials: " + a);
    }

    std::size_t count(const ActionId& a) const {
        std::size_t z = 0;
        for (const auto& e : entries) z += (e.action == a);
        return z;
    }

    int action_index(const ActionId& a) const {
        auto it = std::find(actions.begin(), actions.end(), a);
        if (it == actions.end()) throw std::domain_error("unknown action: " + a);
        return static_cast<int>(it - actions.begin());
    }

    // Smallest per-action trial count z_min over the given actions (all if empty).
    std::size_t min_count(const std::vector<ActionId>& subset = {}) const {
        const auto& as = subset.empty() ? actions : subset;
        std::size_t z = SIZE_MAX;
        for (const auto& a : as) z = std::min(z, count(a));
        return z;
    }
};

/* View of a protocol restricted to a subset M of its actions. */
struct SubProtocol {
    const Protocol* parent = nullptr;
    std::vector<ActionId> selected;  // kept in parent order

    std::size_t size() const {
        std::size_t n = 0;
        for (const auto& e : parent->entries)
            if (contains(e.action)) ++n;
        return n;
    }
    bool contains(const ActionId& a) const {
        return std::find(selected.begin(), selected.end(), a) != selected.end();
    }
};

inline SubProtocol sub_protocol(const Protocol& p, const std::vector<ActionId>& M) {
    if (M.empty()) throw std::domain_error("sub_protocol: empty action subset");
    SubProtocol sp;
    sp.parent = &p;
    for (const auto& a : p.actions)  // parent order, dedup
        if (std::find(M.begin(), M.end(), a) != M.end()) sp.selected.push_back(a);
    if (sp.selected.size() != M.size())
        for (const auto& a : M)
            if (std::find(p.actions.begin(), p.actions.end(), a) == p.actions.end())
                throw std::domain_error("sub_protocol: unknown action " + a);
    return sp;
}

/* Uniformly weighted sample of consequences observed under one action. */
struct EmpiricalSample {
    std::vector<Consequence> points;  // observation order
    std::size_t size() const { return points.size(); }
};

inline EmpiricalSample sample_of(const Protocol& p, const ActionId& a) {
    p.action_index(a);  // throws on unknown action
    EmpiricalSample s;
    for (const auto& e : p.entries)
        if (e.action == a) s.points.push_back(e.consequence);
    return s;
}

// ---- CSV ingestion -------------------------------------------------------

namespace detail {
inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}
inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}
}  // namespace detail

/* Loads `action,<c1>,<c2>,...` rows; Minimize coordinates are negated here,
 * once, so the rest of the library sees a componentwise-Maximize space. */
inline Protocol load_protocol(std::istream& in, const ConsequenceSpace& schema) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("parse error: empty protocol file");
    auto header = detail::split_csv_line(line);
    if (static_cast<int>(header.size()) != schema.dim + 1)
        throw std::runtime_error("schema error: header has " + std::to_string(header.size()) +
                                 " columns, expected " + std::to_string(schema.dim + 1));
    Protocol p;
    p.space = schema;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        auto cells = detail::split_csv_line(line);
        if (static_cast<int>(cells.size()) != schema.dim + 1)
            throw std::runtime_error("parse error at line " + std::to_string(lineno));
        Consequence c(schema.dim);
        for (int d = 0; d < schema.dim; ++d) {
            try {
                std::size_t pos = 0;
                const std::string cell = detail::trim(cells[d + 1]);
                c[d] = std::stod(cell, &pos);
                if (pos != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw std::runtime_error("parse error at line " + std::to_string(lineno) +
                                         ": bad number '" + cells[d + 1] + "'");
            }
            if (schema.directions[d] == Direction::Minimize) c[d] = -c[d];
        }
        p.add_entry(detail::trim(cells[0]), std::move(c));
    }
    p.validate();
    return p;
}

inline Protocol load_protocol(const std::string& path, const ConsequenceSpace& schema) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open protocol file: " + path);
    return load_protocol(f, schema);
}

/* Writes the same CSV contract back out (undoing the direction normalization
 * so that save -> load round-trips bit-exactly). */
inline void save_protocol(std::ostream& out, const Protocol& p) {
    out << "action";
    for (int d = 0; d < p.space.dim; ++d) out << ",c" << (d + 1);
    out << "\n";
    out.precision(17);
    for (const auto& e : p.entries) {
        out << e.action;
        for (int d = 0; d < p.space.dim; ++d) {
            double v = e.consequence[d];
            if (p.space.directions[d] == Direction::Minimize) v = -v;
            out << "," << v;
        }
        out << "\n";
    }
}

}  // namespace edt
