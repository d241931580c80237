#pragma once

#include "polystab/base_state.hpp"
#include "polystab/spectrum.hpp"

#include <complex>
#include <string>
#include <vector>

namespace polystab::asym {

using cd = std::complex<double>;
using base::BaseState;

struct AsymptoticReport {
    double mu = 0.0;             // integral of 1 / sqrt(Z alpha2)
    cd drift;                    // lambda_k mu - k pi i
    double re_lambda_inf = 0.0;  // Re(drift) / mu
    double im_spacing = 0.0;     // pi / mu
    double criterion_S = 0.0;
    bool necessary_condition_met = false;  // criterion_S > 0
};

double mu(const BaseState& base);

/// Drift integral from the closed-form integrand.
cd drift(const BaseState& base, double omega);

/// Same quantity from the diagonal of the transformed system:
/// (1/2) * integral of (c11 - c22).
cd drift_from_transform(const BaseState& base, double omega);

/// Leading-order eigenvalue (drift + k pi i) / mu.
cd asymptotic_lambda(const BaseState& base, double omega, int k);

/// Stability integral written through the relaxation coefficients.
double criterion_S(const BaseState& base);

/// Same integral with the relaxation coefficients expanded in the stresses.
double criterion_S_expanded(const BaseState& base);

AsymptoticReport stability_criterion(const BaseState& base, double omega);
inline AsymptoticReport stability_criterion(const BaseState& base) {
    return stability_criterion(base, base.params.omega);
}

struct VerificationRow {
    int k = 0;
    cd lambda_num;
    cd lambda_asym;
    double err = 0.0;
    double err_times_k = 0.0;
    double residual = 0.0;
    bool certified = false;
};

struct VerificationTable {
    std::vector<VerificationRow> rows;  // sorted by k
    std::vector<spec::Eigenvalue> roots;
    double mu = 0.0;
    /// max / median of err * k over the rows
    double spread_max_over_median = 0.0;
    /// max / min of err * k over the rows
    double spread_max_over_min = 0.0;
    /// largest ratio of err * k in the upper half of the range to its value at the half-way k
    double upper_half_growth = 0.0;
    bool ok = false;  // all rows certified and upper_half_growth <= 2
};

/// Refines every asymptotic seed in [k_min, k_max] and pairs the roots with k.
/// Throws PairingAmbiguous when two seeds land on one root.
VerificationTable verify_spectrum(const BaseState& base, double omega, int k_min, int k_max,
                                  const spec::SpectrumOptions& opts = {});

/// Rectangle around the leading-order eigenvalues k_min..k_max: Re lambda
/// within half_width of the asymptotic line, Im lambda between the
/// half-integer positions k_min - 1/2 and k_max + 1/2.
numerics::Rect eigenvalue_band(const BaseState& base, double omega, int k_min, int k_max, double half_width = 1.5);

struct AmplitudeFactors {
    std::vector<double> y;
    std::vector<cd> p1, p2;  // exp of the running integrals of c11 and c22, 1 at y = -1/2
};

AmplitudeFactors amplitude_factors(const BaseState& base, double omega);

}  // namespace polystab::asym
