#pragma once

#include "polystab/linearized.hpp"
#include "polystab/model.hpp"

#include <string>

namespace polystab::cli {

enum class OutputFormat { csv, json };

struct RunConfig {
    model::ModelParams params;
    int grid_n = 129;
    /// Relative tolerance of the eigenvalue integrator.
    double tol = 1e-10;
    int k_min = 10;
    int k_max = 20;
    std::string out_dir = ".";
    OutputFormat format = OutputFormat::csv;
    lin::Variant variant = lin::Variant::exact;

    /// Throws ConfigError.
    void validate() const;
};

/// Reads a flat JSON object; every key must be a model parameter or a run
/// setting. Unknown keys and wrong types are errors.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

lin::Variant parse_variant(const std::string& s);
OutputFormat parse_format(const std::string& s);
model::R44Variant parse_r44(const std::string& s);
std::string to_string(lin::Variant v);

}  // namespace polystab::cli
