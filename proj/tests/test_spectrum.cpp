#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polystab/asymptotics.hpp"
#include "polystab/errors.hpp"
#include "polystab/spectrum.hpp"

#include <cmath>
#include <numbers>

using namespace polystab;
using spec::cd;
using model::ModelParams;

namespace {

const base::BaseState& main_case() {
    static const base::BaseState s = base::solve_base_state(ModelParams{}, numerics::Grid::chebyshev(129));
    return s;
}

const base::BaseState& rest_case() {
    static const base::BaseState s =
        base::solve_base_state(ModelParams::rest_state(), numerics::Grid::chebyshev(129));
    return s;
}

spec::Eigenvalue root_near(const base::BaseState& b, double omega, int k, const spec::SpectrumOptions& o = {}) {
    return spec::refine_root(b, omega, asym::asymptotic_lambda(b, omega, k), o);
}

}  // namespace

TEST_CASE("dispersion residual is normalized") {
    const auto d = spec::dispersion(main_case(), cd(0.7, 20.0), 1.0);
    CHECK(d.residual >= 0.0);
    CHECK(d.residual <= 1.0);
    CHECK(d.residual > 1e-4);
    CHECK(std::isfinite(d.log_det.real()));
}

TEST_CASE("dispersion conjugation symmetry") {
    const cd lam(-2.0, 15.0);
    const auto a = spec::dispersion(main_case(), lam, 1.0);
    const auto b = spec::dispersion(main_case(), std::conj(lam), -1.0);
    CHECK(std::abs(a.log_det.real() - b.log_det.real()) < 1e-8);
    CHECK(std::abs(a.residual - b.residual) < 1e-8);
}

TEST_CASE("spectrum refined root residual and tolerance independence") {
    const spec::Eigenvalue e = root_near(main_case(), 1.0, 12);
    CHECK(e.residual <= 1e-8);
    numerics::IntegratorConfig tight;
    tight.rel_tol = 1e-11;
    tight.abs_tol = 1e-13;
    const auto d = spec::dispersion(main_case(), e.lambda, 1.0, tight);
    CHECK(d.residual <= 1e-8);
    spec::SpectrumOptions o;
    o.cfg = tight;
    CHECK(std::abs(spec::refine_root(main_case(), 1.0, e.lambda, o).lambda - e.lambda) < 1e-7);
}

TEST_CASE("spectrum conjugate wavenumber gives conjugate roots") {
    const spec::Eigenvalue a = root_near(main_case(), 1.0, 11);
    const spec::Eigenvalue b = spec::refine_root(main_case(), -1.0, std::conj(a.lambda) + cd(0.01, -0.01), {});
    CHECK(std::abs(b.lambda - std::conj(a.lambda)) < 1e-7);
}

TEST_CASE("spectrum empty region has zero winding") {
    const numerics::Rect r{2.0, 3.0, 30.0, 31.0};
    const auto res = spec::find_eigenvalues(main_case(), 1.0, r, {});
    CHECK(res.region_winding == 0);
    CHECK(res.eigenvalues.empty());
    CHECK(res.missed_count_estimate == 0);
}

TEST_CASE("spectrum duplicate seeds are merged") {
    const cd s = asym::asymptotic_lambda(rest_case(), 1.0, 10);
    spec::SpectrumOptions o;
    o.sweep_region = false;
    const auto res = spec::find_eigenvalues(rest_case(), 1.0, {}, {s, s + cd(1e-3, -1e-3), s}, o);
    REQUIRE(res.eigenvalues.size() == 1);
    CHECK(res.eigenvalues[0].certified);
}

TEST_CASE("spectrum winding certification of a small band") {
    const auto& b = rest_case();
    const numerics::Rect region = asym::eigenvalue_band(b, 1.0, 10, 12);
    std::vector<cd> seeds;
    for (int k = 10; k <= 12; ++k) seeds.push_back(asym::asymptotic_lambda(b, 1.0, k));
    spec::SpectrumOptions o;
    o.max_box = 0.45 * std::numbers::pi / asym::mu(b);
    const auto res = spec::find_eigenvalues(b, 1.0, region, seeds, o);
    CHECK(res.region_winding == 3);
    CHECK(res.found_in_region == 3);
    for (const auto& e : res.eigenvalues) CHECK(e.certified);
}

TEST_CASE("spectrum hunt finds unseeded roots") {
    const auto& b = rest_case();
    const numerics::Rect region = asym::eigenvalue_band(b, 1.0, 10, 11);
    spec::SpectrumOptions o;
    o.max_box = 0.45 * std::numbers::pi / asym::mu(b);
    const auto res = spec::find_eigenvalues(b, 1.0, region, {}, o);
    CHECK(res.region_winding == 2);
    CHECK(res.found_in_region == 2);
    CHECK(res.missed_count_estimate == 0);
}

TEST_CASE("spectrum strict mode reports missing roots") {
    const auto& b = rest_case();
    const numerics::Rect region = asym::eigenvalue_band(b, 1.0, 10, 11);
    spec::SpectrumOptions o;
    o.strict = true;
    o.max_subdivision_depth = 0;
    CHECK_THROWS_AS(spec::find_eigenvalues(b, 1.0, region, {}, o), UncertifiedRoots);
    o.strict = false;
    const auto res = spec::find_eigenvalues(b, 1.0, region, {}, o);
    CHECK(res.missed_count_estimate == 2);
}

TEST_CASE("spectrum continuous spectrum scan") {
    const auto boxes = spec::continuous_spectrum_scan(main_case(), 1.0);
    REQUIRE(boxes.size() == 2);
    for (const auto& box : boxes) {
        CHECK(box.width() > 0.0);
        CHECK(box.height() > 0.0);
        const auto s = main_case().at(0.0);
        for (cd z : lin::singular_lambdas(s, main_case().params, 1.0)) {
            if (box.contains(z)) CHECK_THROWS_AS(lin::eliminate_alpha(s, main_case().params, z, 1.0), ContinuousSpectrumPoint);
        }
    }
    const spec::Eigenvalue e = root_near(main_case(), 1.0, 10);
    for (const auto& box : boxes) CHECK_FALSE(box.contains(e.lambda));
}

TEST_CASE("spectrum stable under grid and renormalization changes") {
    const spec::Eigenvalue ref = root_near(main_case(), 1.0, 15);
    const auto fine = base::solve_base_state(ModelParams{}, numerics::Grid::chebyshev(257));
    CHECK(std::abs(spec::refine_root(fine, 1.0, ref.lambda, {}).lambda - ref.lambda) < 1e-6);
    spec::SpectrumOptions o;
    o.cfg.renorm_threshold = 20.0;
    CHECK(std::abs(spec::refine_root(main_case(), 1.0, ref.lambda, o).lambda - ref.lambda) < 1e-6);
}
