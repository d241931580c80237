#include "polystab/trace.hpp"

#include "polystab/errors.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

namespace polystab::trace {

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw MissingTrace("cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, '\t')) out.push_back(cell);
    if (!line.empty() && line.back() == '\t') out.emplace_back();
    return out;
}

}  // namespace

const std::vector<std::string>& required_ids() {
    static const std::vector<std::string> ids = {
        "model.coefficients",
        "stationary.flux",
        "stationary.pressure",
        "stationary.velocity",
        "stationary.closure",
        "stationary.heat",
        "stationary.field",
        "stationary.walls",
        "linear.coefficients",
        "linear.ansatz",
        "linear.system",
        "linear.elimination",
        "linear.first_order",
        "transform.matrix",
        "transform.jordan",
        "transform.system",
        "transform.diagonal",
        "amplitude.cauchy",
        "fundamental.main_term",
        "boundary.transformed",
        "dispersion.determinant",
        "asymptotics.spectrum",
        "asymptotics.criterion",
        "invariant.divergence",
        "morphology.base_flow",
    };
    return ids;
}

std::vector<TraceEntry> parse_table(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw MissingTrace("trace table is empty");
    const auto header = split_tabs(line);
    const std::vector<std::string> expected{"equation_id", "quote", "code_ref", "test_ref"};
    if (header != expected) throw MissingTrace("trace table header must be equation_id, quote, code_ref, test_ref");
    std::vector<TraceEntry> rows;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto cells = split_tabs(line);
        if (cells.size() != 4) throw MissingTrace("line " + std::to_string(lineno) + ": expected 4 columns");
        rows.push_back({cells[0], cells[1], cells[2], cells[3]});
    }
    return rows;
}

std::vector<std::string> collect_test_names(const std::string& tests_dir) {
    static const std::regex test_case(R"re(TEST_CASE\s*\(\s*"([^"]+)")re");
    std::vector<std::string> names;
    for (const auto& f : std::filesystem::recursive_directory_iterator(tests_dir)) {
        if (!f.is_regular_file() || f.path().extension() != ".cpp") continue;
        const std::string src = read_file(f.path());
        for (std::sregex_iterator it(src.begin(), src.end(), test_case), end; it != end; ++it) {
            names.push_back((*it)[1].str());
        }
    }
    return names;
}

void check(const std::vector<TraceEntry>& table, const std::vector<std::string>& test_names) {
    std::map<std::string, int> seen;
    for (const auto& e : table) {
        if (++seen[e.equation_id] > 1) throw MissingTrace("duplicate row for " + e.equation_id);
    }
    for (const auto& id : required_ids()) {
        if (!seen.count(id)) throw MissingTrace("no row for " + id);
    }
    const std::set<std::string> known(test_names.begin(), test_names.end());
    for (const auto& e : table) {
        if (std::find(required_ids().begin(), required_ids().end(), e.equation_id) == required_ids().end()) {
            throw MissingTrace("unknown relation id " + e.equation_id);
        }
        if (e.quote.empty()) throw MissingTrace(e.equation_id + " has no anchor");
        if (e.code_ref.empty()) throw MissingTrace(e.equation_id + " has no code_ref");
        if (e.test_ref.empty()) throw MissingTrace(e.equation_id + " has no test_ref");
        if (!known.empty() && !known.count(e.test_ref)) {
            throw MissingTrace(e.equation_id + " refers to unknown test '" + e.test_ref + "'");
        }
    }
}

TraceReport trace_check(const std::string& root) {
    namespace fs = std::filesystem;
    TraceReport r;
    r.entries = parse_table(read_file(fs::path(root) / "TRACE.tsv"));
    const auto names = collect_test_names((fs::path(root) / "tests").string());
    r.tests_known = static_cast<int>(names.size());
    check(r.entries, names);

    std::istringstream oos(read_file(fs::path(root) / "OUT_OF_SCOPE.tsv"));
    std::string line;
    std::getline(oos, line);
    while (std::getline(oos, line)) {
        if (line.empty()) continue;
        const auto cells = split_tabs(line);
        if (cells.size() != 2 || cells[0].empty() || cells[1].empty()) {
            throw MissingTrace("malformed out-of-scope row: " + line);
        }
        r.out_of_scope.push_back(cells[0]);
    }
    if (r.out_of_scope.empty()) throw MissingTrace("out-of-scope ledger is empty");
    return r;
}

}  // namespace polystab::trace
