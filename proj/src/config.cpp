#include "polystab/config.hpp"

#include "polystab/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace polystab::cli {

using nlohmann::json;

lin::Variant parse_variant(const std::string& s) {
    if (s == "exact") return lin::Variant::exact;
    if (s == "truncated") return lin::Variant::truncated;
    throw ConfigError("variant must be 'exact' or 'truncated', got '" + s + "'");
}

OutputFormat parse_format(const std::string& s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    throw ConfigError("format must be 'csv' or 'json', got '" + s + "'");
}

model::R44Variant parse_r44(const std::string& s) {
    if (s == "consistent") return model::R44Variant::consistent;
    if (s == "literal") return model::R44Variant::literal;
    throw ConfigError("r44_variant must be 'consistent' or 'literal', got '" + s + "'");
}

std::string to_string(lin::Variant v) { return v == lin::Variant::exact ? "exact" : "truncated"; }

void RunConfig::validate() const {
    params.validate();
    if (grid_n < 33 || grid_n % 2 == 0) throw ConfigError("grid_n must be odd and at least 33");
    if (!(tol > 0.0 && tol < 1e-3)) throw ConfigError("tol must lie in (0, 1e-3)");
    if (k_min < 1) throw ConfigError("k_min must be at least 1");
    if (k_max < k_min) throw ConfigError("k_max must be at least k_min");
    if (out_dir.empty()) throw ConfigError("out_dir is empty");
}

namespace {

double number(const json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
    return v.get<double>();
}

int integer(const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
    return v.get<int>();
}

std::string text(const json& v, const std::string& key) {
    if (!v.is_string()) throw ConfigError("'" + key + "' must be a string");
    return v.get<std::string>();
}

}  // namespace

RunConfig parse_config_text(const std::string& src) {
    json doc;
    try {
        doc = json::parse(src);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");

    RunConfig cfg;
    const auto& names = model::ModelParams::field_names();
    for (const auto& [key, v] : doc.items()) {
        if (std::find(names.begin(), names.end(), key) != names.end()) {
            cfg.params.set(key, number(v, key));
        } else if (key == "grid_n") {
            cfg.grid_n = integer(v, key);
        } else if (key == "tol") {
            cfg.tol = number(v, key);
        } else if (key == "k_min") {
            cfg.k_min = integer(v, key);
        } else if (key == "k_max") {
            cfg.k_max = integer(v, key);
        } else if (key == "out_dir") {
            cfg.out_dir = text(v, key);
        } else if (key == "format") {
            cfg.format = parse_format(text(v, key));
        } else if (key == "variant") {
            cfg.variant = parse_variant(text(v, key));
        } else if (key == "r44_variant") {
            cfg.params.r44_variant = parse_r44(text(v, key));
        } else {
            throw ConfigError("unknown key '" + key + "'");
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace polystab::cli
