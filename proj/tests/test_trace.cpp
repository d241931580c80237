#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polystab/errors.hpp"
#include "polystab/trace.hpp"

#include <algorithm>
#include <string>

using namespace polystab;

namespace {

const std::string root = POLYSTAB_SOURCE_DIR;

std::vector<trace::TraceEntry> table() {
    return trace::trace_check(root).entries;
}

std::vector<std::string> tests() { return trace::collect_test_names(root + "/tests"); }

}  // namespace

TEST_CASE("trace complete table passes") {
    const auto r = trace::trace_check(root);
    CHECK(r.entries.size() == trace::required_ids().size());
    CHECK(!r.out_of_scope.empty());
    CHECK(r.tests_known > 50);
}

TEST_CASE("trace missing criterion row is detected") {
    auto t = table();
    t.erase(std::remove_if(t.begin(), t.end(),
                           [](const trace::TraceEntry& e) { return e.equation_id == "asymptotics.criterion"; }),
            t.end());
    CHECK_THROWS_AS(trace::check(t, tests()), MissingTrace);
}

TEST_CASE("trace duplicate row is detected") {
    auto t = table();
    t.push_back(t.front());
    CHECK_THROWS_AS(trace::check(t, tests()), MissingTrace);
}

TEST_CASE("trace empty references are detected") {
    auto t = table();
    t[3].test_ref.clear();
    CHECK_THROWS_AS(trace::check(t, tests()), MissingTrace);
    t = table();
    t[5].code_ref.clear();
    CHECK_THROWS_AS(trace::check(t, tests()), MissingTrace);
    t = table();
    t[2].test_ref = "no such test";
    CHECK_THROWS_AS(trace::check(t, tests()), MissingTrace);
}

TEST_CASE("trace table parser") {
    CHECK_THROWS_AS(trace::parse_table(""), MissingTrace);
    CHECK_THROWS_AS(trace::parse_table("a\tb\n"), MissingTrace);
    CHECK_THROWS_AS(trace::parse_table("equation_id\tquote\tcode_ref\ttest_ref\nx\ty\n"), MissingTrace);
    const auto rows = trace::parse_table("equation_id\tquote\tcode_ref\ttest_ref\nx\ty\tz\tw\n");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].test_ref == "w");
}
