#pragma once

#include "polystab/base_state.hpp"
#include "polystab/linearized.hpp"
#include "polystab/numerics/winding.hpp"

#include <complex>
#include <string>
#include <vector>

namespace polystab::spec {

using cd = std::complex<double>;
using base::BaseState;
using lin::Variant;
using numerics::IntegratorConfig;
using numerics::Rect;

struct DispersionEvaluation {
    cd lambda;
    double omega = 0.0;
    /// log det of the wall-value matrix, including the accumulated
    /// renormalization factors; the imaginary part is defined modulo 2 pi.
    cd log_det;
    /// |det| of the wall-value matrix of the orthonormalized final basis
    /// divided by the product of its row norms, in [0, 1].
    double residual = 0.0;
    int renorm_count = 0;
    int rhs_evals = 0;
};

/// Shoots the five-dimensional subspace satisfying the lower-wall
/// conditions to the upper wall and evaluates the boundary determinant.
DispersionEvaluation dispersion(const BaseState& base, cd lambda, double omega,
                                const IntegratorConfig& cfg = IntegratorConfig::eigenvalue_defaults(),
                                Variant variant = Variant::exact);

struct Eigenvalue {
    cd lambda;
    double residual = 0.0;
    int newton_iters = 0;
    cd seed;
    bool certified = false;
};

struct SpectrumOptions {
    IntegratorConfig cfg = IntegratorConfig::eigenvalue_defaults();
    Variant variant = Variant::exact;
    int max_newton = 30;
    /// Largest Newton step, as an absolute distance in the lambda plane.
    double max_step = 1.0;
    /// Upper bound on the certification half-width (keeps neighbouring roots outside).
    double max_box = 1.0;
    int contour_samples = 16;
    /// Longest contour arc between two initial samples.
    double max_contour_step = 1.0;
    /// Count zeros over the search region and hunt for the missing ones.
    bool sweep_region = true;
    int max_subdivision_depth = 4;
    /// Throw UncertifiedRoots when the region count and the roots found differ.
    bool strict = false;
};

struct SpectrumResult {
    double omega = 0.0;
    model::ModelParams params;
    std::vector<Eigenvalue> eigenvalues;  // sorted by Im lambda
    Rect search_region;
    int region_winding = 0;
    int found_in_region = 0;
    int missed_count_estimate = 0;
    int dispersion_evals = 0;
};

/// Newton refinement of each seed on the boundary determinant, followed by
/// argument-principle certification of every root and, optionally, of the
/// whole region.
SpectrumResult find_eigenvalues(const BaseState& base, double omega, const Rect& region, const std::vector<cd>& seeds,
                                const SpectrumOptions& opts = {});

/// Region count and hunt starting from already refined roots; roots marked
/// certified keep their certificate.
SpectrumResult sweep_region(const BaseState& base, double omega, const Rect& region, const std::vector<Eigenvalue>& known,
                            const SpectrumOptions& opts = {});

/// Refines a single seed; throws ToleranceNotMet or SingularJacobian on failure.
Eigenvalue refine_root(const BaseState& base, double omega, cd seed, const SpectrumOptions& opts,
                       int* evals = nullptr);

/// Bounding boxes, one per branch, of the lambda values where the stress
/// elimination is singular somewhere in the channel.
std::vector<Rect> continuous_spectrum_scan(const BaseState& base, double omega);

}  // namespace polystab::spec
