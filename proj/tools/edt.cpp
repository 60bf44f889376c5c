#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <edt/json_io.hpp>

namespace {

using namespace edt;

std::vector<std::string> csv_header(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open protocol file: " + path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("parse error: empty protocol file");
    auto cells = edt::detail::split_csv_line(line);
    if (cells.size() < 2) throw std::runtime_error("schema error: need an action column plus data");
    return cells;
}

/* Consequence-space schema from the CSV header plus --min/--max flags; a
 * `<name>.meta.json` sidecar with {"directions": ["min"|"max", ...]} seeds
 * the defaults (all columns otherwise Maximize). */
ConsequenceSpace schema_for(const std::string& path, const std::vector<std::string>& minimize,
                            const std::vector<std::string>& maximize) {
    const auto header = csv_header(path);
    const int dim = static_cast<int>(header.size()) - 1;
    std::vector<Direction> dirs(dim, Direction::Maximize);
    std::string meta_path = path;
    if (const auto dot = meta_path.rfind('.'); dot != std::string::npos)
        meta_path = meta_path.substr(0, dot);
    if (std::ifstream meta(meta_path + ".meta.json"); meta) {
        const auto j = edt::json::parse(meta);
        if (j.contains("directions")) {
            const auto& ds = j.at("directions");
            if (static_cast<int>(ds.size()) != dim)
                throw std::runtime_error("sidecar declares wrong number of directions");
            for (int d = 0; d < dim; ++d)
                dirs[d] = ds[d] == "min" ? Direction::Minimize : Direction::Maximize;
        }
    }
    const auto apply = [&](const std::vector<std::string>& names, Direction d) {
        for (const auto& n : names) {
            auto it = std::find(header.begin() + 1, header.end(), n);
            if (it == header.end())
                throw std::runtime_error("unknown column in direction flag: " + n);
            dirs[it - header.begin() - 1] = d;
        }
    };
    apply(maximize, Direction::Maximize);
    apply(minimize, Direction::Minimize);
    return ConsequenceSpace(dim, dirs);
}

std::vector<double> parse_numbers(const std::string& s, char sep) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep)) out.push_back(std::stod(tok));
    return out;
}

/* --class grammar: fsd | eu:<w1,w2,...> | ssd:<lo>:<hi>:<points> | file:<path>
 * (file: one row of linear weights per function). */
FunctionClassSpec parse_class(const std::string& s, const std::string& bounds) {
    const auto ab = parse_numbers(bounds, ':');
    if (ab.size() != 2) throw std::runtime_error("--bounds expects A:B");
    if (s == "fsd") return FunctionClassSpec::fsd();
    if (s.rfind("eu:", 0) == 0)
        return FunctionClassSpec::eu(parse_numbers(s.substr(3), ','), ab[0], ab[1]);
    if (s.rfind("ssd:", 0) == 0) {
        const auto g = parse_numbers(s.substr(4), ':');
        if (g.size() != 3) throw std::runtime_error("--class ssd expects ssd:<lo>:<hi>:<points>");
        return FunctionClassSpec::ssd(GridSpec{g[0], g[1], static_cast<int>(g[2])});
    }
    if (s.rfind("file:", 0) == 0) {
        std::ifstream f(s.substr(5));
        if (!f) throw std::runtime_error("cannot open function-class file: " + s.substr(5));
        std::vector<std::function<double(const Consequence&)>> fs;
        std::string line;
        while (std::getline(f, line)) {
            if (edt::detail::trim(line).empty()) continue;
            std::vector<double> w;
            std::stringstream ss(line);
            double x;
            while (ss >> x) w.push_back(x);
            fs.push_back([w](const Consequence& c) {
                double v = 0.0;
                for (std::size_t d = 0; d < w.size() && d < c.size(); ++d) v += w[d] * c[d];
                return v;
            });
        }
        return FunctionClassSpec::explicit_finite(fs, ab[0], ab[1]);
    }
    throw std::runtime_error("unknown --class value: " + s);
}

ContaminationSpec parse_contamination(const Protocol& p, const std::vector<std::string>& gamma,
                                      const std::vector<std::string>& kflag) {
    ContaminationSpec spec;
    const auto assign = [&](const std::string& s, bool is_k) {
        const auto eq = s.find('=');
        const auto put = [&](const ActionId& a, const std::string& val) {
            if (is_k)
                spec.k_per_action[a] = static_cast<std::size_t>(std::stoul(val));
            else
                spec.gamma_per_action[a] = std::stod(val);
        };
        if (eq == std::string::npos)
            for (const auto& a : p.actions) put(a, s);
        else
            put(s.substr(0, eq), s.substr(eq + 1));
    };
    for (const auto& s : gamma) assign(s, false);
    for (const auto& s : kflag) assign(s, true);
    return spec;
}

void print_choice(const ChoiceSet& cs) {
    std::cout << to_json(cs).dump(2) << "\n";
    std::cerr << "chosen:";
    for (const auto& a : cs.chosen) std::cerr << " " << a;
    std::cerr << "\n";
    for (const auto& r : cs.rationale)
        std::cerr << "excluded " << r.excluded << " (dominated by " << r.dominator
                  << ", cr1=" << r.cr1 << ", cr2=" << r.cr2 << ")\n";
}

void write_or_print_csv(const std::string& path, const std::function<void(std::ostream&)>& emit) {
    if (path.empty()) {
        emit(std::cerr);
    } else {
        std::ofstream f(path);
        if (!f) throw std::runtime_error("cannot open output file: " + path);
        emit(f);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Empirical decision theory: choice sets, membership tests, robustness"};
    app.require_subcommand(1);

    std::string input, class_flag = "fsd", bounds = "0:1", mode = "permutation";
    std::vector<std::string> min_cols, max_cols, gamma_flags, k_flags;
    std::string target, shares_flag = "0:0.5:0.01", pair_j, pair_i, out_csv;
    double alpha = 0.05, reg_c = 1.0, reg_L = 2.0;
    int resamples = 10000, rounds = 500;
    std::uint64_t seed = 0;
    bool regularized = false, strict = false;

    const auto add_common = [&](CLI::App* sub, bool needs_input) {
        auto* in = sub->add_option("--input", input, "protocol CSV (action,<c1>,...)");
        if (needs_input) in->required();
        sub->add_option("--min", min_cols, "columns to minimize");
        sub->add_option("--max", max_cols, "columns to maximize (default)");
        sub->add_option("--class", class_flag, "fsd | eu:<w,...> | ssd:<lo>:<hi>:<pts> | file:<path>");
        sub->add_option("--bounds", bounds, "function-class bounds A:B (eu/file classes)");
    };
    const auto add_test_flags = [&](CLI::App* sub) {
        sub->add_option("--alpha", alpha, "test level in (0, 0.5)");
        sub->add_option("--resamples", resamples, "number of resamples");
        sub->add_option("--seed", seed, "RNG seed");
        sub->add_option("--mode", mode, "permutation|bootstrap");
    };

    auto* choice = app.add_subcommand("choice", "empirical choice set of a protocol");
    add_common(choice, true);
    choice->add_flag("--regularized", regularized, "use the regularized exclusion rule");
    choice->add_option("--c", reg_c, "regularization scale c in eps_z = c*z^(-1/4)");
    choice->add_option("--L", reg_L, "Lipschitz factor L in delta(eps) = L*eps");
    choice->add_flag("--strict", strict, "strict first condition cr1 > 4*delta");
    choice->add_option("--gamma", gamma_flags, "robust choice: share or action=share (repeatable)");
    choice->add_option("--k", k_flags, "robust choice: contaminated count or action=count");

    auto* test = app.add_subcommand("test", "membership test for a target action");
    add_common(test, true);
    test->add_option("--target", target, "action whose membership is tested")->required();
    add_test_flags(test);

    auto* robust = app.add_subcommand("robust", "gamma-robust membership test");
    add_common(robust, true);
    robust->add_option("--target", target, "action whose membership is tested")->required();
    add_test_flags(robust);
    robust->add_option("--gamma", gamma_flags, "share or action=share (repeatable)");
    robust->add_option("--k", k_flags, "contaminated count or action=count");

    auto* breakdown = app.add_subcommand("breakdown", "p-value vs contamination share");
    add_common(breakdown, true);
    breakdown->add_option("--j", pair_j, "candidate dominator")->required();
    breakdown->add_option("--i", pair_i, "dominated candidate")->required();
    add_test_flags(breakdown);
    breakdown->add_option("--shares", shares_flag, "lo:hi:step grid of shares");
    breakdown->add_option("--out", out_csv, "share,p_value CSV output path");

    std::string scenario_flag = "binomial", engine_flag = "fsd", p_flag, weights_flag = "1";
    auto* simulate = app.add_subcommand("simulate", "round-by-round choice-set evolution");
    simulate->add_option("--scenario", scenario_flag, "binomial|adversary|file");
    simulate->add_option("--input", input, "protocol CSV for --scenario file");
    simulate->add_option("--p", p_flag, "binomial success probabilities, comma separated");
    simulate->add_option("--rounds", rounds, "number of rounds");
    simulate->add_option("--seed", seed, "RNG seed");
    simulate->add_option("--engine", engine_flag, "eu|fsd|fsd-regularized");
    simulate->add_option("--weights", weights_flag, "utility weights for --engine eu");
    simulate->add_option("--c", reg_c, "regularization scale c");
    simulate->add_option("--L", reg_L, "Lipschitz factor L");
    simulate->add_flag("--strict", strict, "strict first condition");
    simulate->add_option("--out", out_csv, "trace CSV output path");

    std::string study;
    auto* replicate = app.add_subcommand("replicate", "bundled studies");
    replicate->add_option("study", study, "table1|example4-eu|example4-fsd|prompting|ssd-demo")
        ->required();
    replicate->add_option("--data", input, "prompting protocol CSV (default data/prompting.csv)");
    replicate->add_option("--rounds", rounds, "rounds for the simulation studies");
    add_test_flags(replicate);
    replicate->add_option("--out", out_csv, "CSV output path for plot data");

    CLI11_PARSE(app, argc, argv);

    try {
        TestConfig cfg;
        cfg.alpha = alpha;
        cfg.n_resamples = resamples;
        cfg.seed = seed;
        cfg.mode = (mode == "bootstrap") ? TestConfig::Mode::Bootstrap : TestConfig::Mode::Permutation;

        if (choice->parsed()) {
            const auto p = load_protocol(input, schema_for(input, min_cols, max_cols));
            const auto cls = parse_class(class_flag, bounds);
            const auto sp = sub_protocol(p, p.actions);
            ChoiceSet cs;
            if (!gamma_flags.empty() || !k_flags.empty()) {
                cs = recf_gamma_robust(sp, cls, parse_contamination(p, gamma_flags, k_flags));
            } else if (regularized) {
                RegularizationSchedule sched{reg_c, reg_L, strict};
                cs = ecf_regularized(sp, cls, sched);
            } else if (cls.variant == FunctionClassSpec::Variant::EuSingleton) {
                cs = ecf_eu(sp, cls.eu_weights);
            } else {
                cs = ecf_dominance(sp, cls);
            }
            print_choice(cs);
        } else if (test->parsed()) {
            const auto p = load_protocol(input, schema_for(input, min_cols, max_cols));
            const auto rep = membership_test(p, target, p.actions, parse_class(class_flag, bounds), cfg);
            std::cout << to_json(rep).dump(2) << "\n";
            return rep.global_reject ? 0 : 1;
        } else if (robust->parsed()) {
            const auto p = load_protocol(input, schema_for(input, min_cols, max_cols));
            const auto spec = parse_contamination(p, gamma_flags, k_flags);
            const auto rep =
                robust_membership_test(p, target, p.actions, parse_class(class_flag, bounds), spec, cfg);
            std::cout << to_json(rep).dump(2) << "\n";
            return rep.global_reject ? 0 : 1;
        } else if (breakdown->parsed()) {
            const auto p = load_protocol(input, schema_for(input, min_cols, max_cols));
            const auto g = parse_numbers(shares_flag, ':');
            if (g.size() != 3) throw std::runtime_error("--shares expects lo:hi:step");
            std::vector<double> shares;
            for (double s = g[0]; s <= g[1] + 1e-12; s += g[2]) shares.push_back(s);
            const auto curve =
                breakdown_curve(p, pair_j, pair_i, parse_class(class_flag, bounds), cfg, shares);
            std::cout << to_json(curve).dump(2) << "\n";
            write_or_print_csv(out_csv, [&](std::ostream& o) { write_breakdown_csv(o, curve); });
        } else if (simulate->parsed()) {
            ScenarioSpec spec;
            spec.rounds = rounds;
            spec.seed = seed;
            if (scenario_flag == "binomial") {
                spec.actions = card_colors();
                spec.binom_p = p_flag.empty() ? std::vector<double>{0.25, 0.2, 0.22, 0.22, 0.21}
                                              : parse_numbers(p_flag, ',');
                if (spec.binom_p.size() <= spec.actions.size()) {
                    spec.actions.resize(spec.binom_p.size());
                } else {
                    spec.actions.clear();
                    for (std::size_t a = 0; a < spec.binom_p.size(); ++a)
                        spec.actions.push_back("a" + std::to_string(a + 1));
                }
            } else if (scenario_flag == "adversary") {
                spec = adversary_scenario(rounds, seed);
            } else if (scenario_flag == "file") {
                spec.kind = ScenarioSpec::Kind::FromFile;
                spec.path = input;
            } else {
                throw std::runtime_error("unknown scenario: " + scenario_flag);
            }
            EngineConfig engine;
            if (engine_flag == "eu") {
                engine.kind = EngineConfig::Kind::Eu;
                engine.eu_weights = parse_numbers(weights_flag, ',');
            } else if (engine_flag == "fsd-regularized") {
                engine.kind = EngineConfig::Kind::FsdRegularized;
                engine.schedule = RegularizationSchedule{reg_c, reg_L, strict};
            }
            const auto trace = run_scenario(spec, engine);
            const auto actions = spec.kind == ScenarioSpec::Kind::FromFile
                                     ? load_protocol(spec.path, ConsequenceSpace::maximize_all(1)).actions
                                     : spec.actions;
            json out{{"rounds", trace.choice_sets.size()},
                     {"final_choice_set", trace.choice_sets.back()}};
            std::cout << out.dump(2) << "\n";
            write_or_print_csv(out_csv, [&](std::ostream& o) { write_trace_csv(o, trace, actions); });
        } else if (replicate->parsed()) {
            if (study == "table1") {
                const auto p = table1_protocol();
                const auto sp = sub_protocol(p, p.actions);
                json out{{"eu_choice_set", to_json(ecf_eu(sp, {1.0}))},
                         {"fsd_choice_set", to_json(ecf_dominance(sp, FunctionClassSpec::fsd()))}};
                std::cout << out.dump(2) << "\n";
            } else if (study == "example4-eu" || study == "example4-fsd") {
                const bool eu = (study == "example4-eu");
                auto spec = example4_scenario(eu ? 1 : 2, rounds, seed);
                EngineConfig engine;
                if (eu) {
                    engine.kind = EngineConfig::Kind::Eu;
                } else {
                    engine.kind = EngineConfig::Kind::FsdRegularized;
                    engine.schedule = example4_schedule();
                }
                const auto trace = run_scenario(spec, engine);
                json out{{"rounds", trace.choice_sets.size()},
                         {"final_choice_set", trace.choice_sets.back()}};
                std::cout << out.dump(2) << "\n";
                write_or_print_csv(out_csv,
                                   [&](std::ostream& o) { write_trace_csv(o, trace, spec.actions); });
            } else if (study == "prompting") {
                const std::string path = input.empty() ? "data/prompting.csv" : input;
                const auto bundle = replicate_prompting_study(path, cfg);
                json pw = json::array();
                for (const auto& r : bundle.pairwise) pw.push_back(to_json(r));
                json out{{"fsd_choice_set", to_json(bundle.choice_set)},
                         {"pairwise", pw},
                         {"membership_neutral", to_json(bundle.membership_neutral)},
                         {"breakdown_polite_neutral", to_json(bundle.breakdown_polite_neutral)},
                         {"breakdown_inpolite_neutral", to_json(bundle.breakdown_inpolite_neutral)}};
                std::cout << out.dump(2) << "\n";
                write_or_print_csv(out_csv, [&](std::ostream& o) {
                    write_breakdown_csv(o, bundle.breakdown_polite_neutral);
                });
            } else if (study == "ssd-demo") {
                json out = json::object();
                for (std::size_t n : {std::size_t{5}, std::size_t{50}}) {
                    const auto res = ssd_assumption3_demo(n, resamples, seed);
                    out["n" + std::to_string(n)] = {
                        {"violation_fraction", ecdf_violation_fraction(res.t1, res.t2)}};
                }
                std::cout << out.dump(2) << "\n";
            } else {
                throw std::runtime_error("unknown study: " + study);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
