#pragma once

#include <string>
#include <vector>

namespace polystab::trace {

struct TraceEntry {
    std::string equation_id;
    std::string quote;
    std::string code_ref;
    std::string test_ref;
};

struct TraceReport {
    std::vector<TraceEntry> entries;
    std::vector<std::string> out_of_scope;
    int tests_known = 0;
};

/// Relation identifiers that must each appear exactly once in the table.
const std::vector<std::string>& required_ids();

/// Tab-separated, header row first.
std::vector<TraceEntry> parse_table(const std::string& text);

/// Names of every TEST_CASE under `tests_dir`.
std::vector<std::string> collect_test_names(const std::string& tests_dir);

/// Checks the table text against `required_ids()` and, when test_names is
/// non-empty, resolves every test_ref. Throws MissingTrace.
void check(const std::vector<TraceEntry>& table, const std::vector<std::string>& test_names);

/// Reads the trace table and the out-of-scope ledger from `root` and checks them.
TraceReport trace_check(const std::string& root);

}  // namespace polystab::trace
