#pragma once

#include "polystab/asymptotics.hpp"
#include "polystab/base_state.hpp"
#include "polystab/spectrum.hpp"

#include <string>
#include <vector>

namespace polystab::io {

/// 17 significant digits, lowercase exponent.
std::string fmt(double v);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::string& path, const std::string& contents);

std::string base_state_csv(const base::BaseState& s);
std::string base_state_json(const base::BaseState& s);

std::string spectrum_csv(const spec::SpectrumResult& r);
std::string spectrum_json(const spec::SpectrumResult& r);

std::string asymptotics_json(const asym::AsymptoticReport& r);

std::string verify_csv(const asym::VerificationTable& t);
std::string verify_json(const asym::VerificationTable& t);

struct SweepRow {
    double value = 0.0;
    double criterion_S = 0.0;
    double re_lambda_inf = 0.0;
    double max_abs_u = 0.0;
    double bottom_ratio = 0.0;  // max |u| over [-1/2, -1/4] relative to max |u|
    double residual = 0.0;
    bool ok = false;
};

std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string sweep_json(const std::vector<SweepRow>& rows);

/// Tab-separated plot dumps.
std::string base_state_tsv(const base::BaseState& s);
std::string spectrum_tsv(const spec::SpectrumResult& r);

}  // namespace polystab::io
