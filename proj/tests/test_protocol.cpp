#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "helpers.hpp"

using namespace edt;

TEST_CASE("csv ingestion negates minimize coordinates once") {
    std::istringstream in("action,ppl,coh\nA,18,0.95\nA,20,0.92\nB,17,0.96\n");
    const ConsequenceSpace space(2, {Direction::Minimize, Direction::Maximize});
    const auto p = load_protocol(in, space);
    CHECK(p.actions == std::vector<ActionId>{"A", "B"});
    CHECK(p.entries[0].consequence == Consequence{-18.0, 0.95});
    CHECK(p.entries[2].consequence == Consequence{-17.0, 0.96});
    CHECK(p.count("A") == 2);
    CHECK(p.min_count() == 1);
}

TEST_CASE("csv round trip is exact") {
    std::istringstream in("action,ppl,coh\nA,18.25,0.95\nB,17,0.96\n");
    const ConsequenceSpace space(2, {Direction::Minimize, Direction::Maximize});
    const auto p = load_protocol(in, space);
    std::ostringstream out;
    save_protocol(out, p);
    std::istringstream in2(out.str());
    const auto q = load_protocol(in2, space);
    CHECK(q.entries.size() == p.entries.size());
    for (std::size_t k = 0; k < p.entries.size(); ++k) {
        CHECK(q.entries[k].action == p.entries[k].action);
        CHECK(q.entries[k].consequence == p.entries[k].consequence);
    }
}

TEST_CASE("csv errors name the offending line") {
    std::istringstream bad_num("action,c1\nA,1\nB,oops\n");
    CHECK_THROWS_WITH_AS(load_protocol(bad_num, ConsequenceSpace::maximize_all(1)),
                         doctest::Contains("line 3"), std::runtime_error);
    std::istringstream bad_cols("action,c1\nA,1,2\n");
    CHECK_THROWS_AS(load_protocol(bad_cols, ConsequenceSpace::maximize_all(1)), std::runtime_error);
    std::istringstream bad_header("action,c1,c2\nA,1,2\n");
    CHECK_THROWS_AS(load_protocol(bad_header, ConsequenceSpace::maximize_all(1)), std::runtime_error);
    std::istringstream empty("");
    CHECK_THROWS_AS(load_protocol(empty, ConsequenceSpace::maximize_all(1)), std::runtime_error);
}

TEST_CASE("protocol validation") {
    Protocol p;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.space = ConsequenceSpace::maximize_all(2);
    CHECK_THROWS_AS(p.add_entry("A", {1.0}), std::invalid_argument);
    const double nan = std::nan("");
    CHECK_THROWS_AS(p.add_entry("A", {1.0, nan}), std::invalid_argument);
    p.add_entry("A", {1.0, 2.0});
    CHECK_NOTHROW(p.validate());
    CHECK(p.action_index("A") == 0);
    CHECK_THROWS_AS(p.action_index("missing"), std::domain_error);
}

TEST_CASE("sub-protocol keeps parent order and rejects unknown actions") {
    const auto p = table1_protocol();
    const auto sp = sub_protocol(p, {"Black", "Red"});
    CHECK(sp.selected == std::vector<ActionId>{"Red", "Black"});
    CHECK(sp.size() == 10);
    CHECK_THROWS_AS(sub_protocol(p, {"Purple"}), std::domain_error);
    CHECK_THROWS_AS(sub_protocol(p, {}), std::domain_error);
}

TEST_CASE("sample_of collects observation-ordered consequences") {
    const auto p = table1_protocol();
    const auto s = sample_of(p, "Black");
    REQUIRE(s.size() == 5);
    CHECK(s.points == std::vector<Consequence>{{1}, {2}, {1}, {3}, {0}});
    CHECK_THROWS_AS(sample_of(p, "Purple"), std::domain_error);
}

TEST_CASE("bundled data files load to the bundled protocols") {
    const auto p = load_protocol(std::string(EDT_DATA_DIR) + "/table1.csv",
                                 ConsequenceSpace::maximize_all(1));
    const auto q = table1_protocol();
    REQUIRE(p.entries.size() == q.entries.size());
    for (std::size_t k = 0; k < p.entries.size(); ++k)
        CHECK(p.entries[k].consequence == q.entries[k].consequence);

    const auto pr = load_protocol(std::string(EDT_DATA_DIR) + "/prompting.csv", prompting_space());
    CHECK(pr.count("neutral") == 11);
    CHECK(pr.count("inpolite") == 10);
    CHECK(pr.count("polite") == 14);
    CHECK(pr.entries[0].consequence == Consequence{-18.0, 0.95});
}
