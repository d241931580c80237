#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polystab/asymptotics.hpp"
#include "polystab/errors.hpp"

#include <cmath>
#include <numbers>

using namespace polystab;
using asym::cd;
using model::ModelParams;

namespace {

constexpr double pi = std::numbers::pi;

const base::BaseState& main_case() {
    static const base::BaseState s = base::solve_base_state(ModelParams{}, numerics::Grid::chebyshev(129));
    return s;
}

const base::BaseState& rest_case() {
    static const base::BaseState s =
        base::solve_base_state(ModelParams::rest_state(), numerics::Grid::chebyshev(129));
    return s;
}

// Base flows with distinct profiles.
const std::vector<base::BaseState>& corpus() {
    static const std::vector<base::BaseState> c = [] {
        std::vector<ModelParams> ps(6);
        ps[0] = ModelParams::rest_state();
        ps[2].A_hat = 3.0;
        ps[3].theta_bar = -0.25;
        ps[4].sigma_m = 0.0;
        ps[4].theta_bar = 0.0;
        ps[4].J_plus = 1.0;
        ps[5].J_plus = 1.5;
        ps[5].W = 2.0;
        ps[5].Re = 0.5;
        std::vector<base::BaseState> out;
        for (const auto& p : ps) out.push_back(base::solve_base_state(p, numerics::Grid::chebyshev(129)));
        return out;
    }();
    return c;
}

}  // namespace

TEST_CASE("asymptotics rest state closed forms") {
    const auto r = asym::stability_criterion(rest_case(), 1.0);
    CHECK(std::abs(r.mu - 1.0) < 1e-10);
    CHECK(std::abs(r.criterion_S - 5.0) < 1e-10);
    CHECK(std::abs(r.drift - cd(-2.5, 0.0)) < 1e-10);
    CHECK(std::abs(r.im_spacing - pi) < 1e-10);
    CHECK(r.necessary_condition_met);
    for (int k : {1, 2, 10, 30}) {
        CHECK(std::abs(asym::asymptotic_lambda(rest_case(), 1.0, k) - cd(-2.5, k * pi)) < 1e-10);
    }
    CHECK_THROWS_AS(asym::asymptotic_lambda(rest_case(), 1.0, 0), InvalidArgument);
}

TEST_CASE("asymptotics mu against nodal quadrature") {
    const auto& b = main_case();
    std::vector<double> f;
    for (int j = 0; j < b.size(); ++j) {
        const auto k = static_cast<std::size_t>(j);
        const double a2 = b.a22[k] / b.params.Re + b.params.kappa2();
        f.push_back(1.0 / std::sqrt(b.Z[k] * a2));
    }
    CHECK(std::abs(asym::mu(b) - b.grid.integrate(f)) < 1e-10);
}

TEST_CASE("asymptotics consistency identity on the corpus") {
    for (const auto& b : corpus()) {
        for (double w : {0.0, 1.0, 2.5}) {
            const auto r = asym::stability_criterion(b, w);
            CHECK(std::abs(r.re_lambda_inf + r.criterion_S / (2.0 * r.mu)) < 1e-12);
            CHECK(r.necessary_condition_met == (r.re_lambda_inf < 0.0));
            CHECK(std::abs(r.im_spacing - pi / r.mu) < 1e-14);
        }
    }
}

TEST_CASE("asymptotics stability integral forms agree") {
    for (const auto& b : corpus()) CHECK(std::abs(asym::criterion_S(b) - asym::criterion_S_expanded(b)) < 1e-12);
}

TEST_CASE("asymptotics drift from the transformed diagonal") {
    for (const auto& b : corpus()) {
        for (double w : {1.0, -0.7}) {
            CHECK(std::abs(asym::drift(b, w) - asym::drift_from_transform(b, w)) < 1e-9);
        }
    }
}

TEST_CASE("asymptotics amplitude factors") {
    const auto a = asym::amplitude_factors(rest_case(), 1.0);
    REQUIRE(!a.y.empty());
    CHECK(std::abs(a.p1.front() - 1.0) < 1e-15);
    CHECK(std::abs(a.p2.front() - 1.0) < 1e-15);
    CHECK(std::abs(std::abs(a.p2.back() / a.p1.back()) - std::exp(5.0)) < 1e-8 * std::exp(5.0));
    const auto m = asym::amplitude_factors(main_case(), 1.0);
    const cd ratio = std::log(m.p1.back() / m.p2.back());
    const cd twice_drift = 2.0 * asym::drift_from_transform(main_case(), 1.0);
    CHECK(std::abs(ratio.real() - twice_drift.real()) < 1e-9);
}

TEST_CASE("asymptotics stability integral expected sign") {
    const auto r = asym::stability_criterion(main_case(), 1.0);
    CHECK(r.criterion_S > 0.0);
    CHECK(r.re_lambda_inf < 0.0);
}

TEST_CASE("asymptotics band contains the seeds") {
    const auto rect = asym::eigenvalue_band(main_case(), 1.0, 10, 20);
    for (int k = 10; k <= 20; ++k) CHECK(rect.contains(asym::asymptotic_lambda(main_case(), 1.0, k)));
    CHECK_FALSE(rect.contains(asym::asymptotic_lambda(main_case(), 1.0, 9)));
    CHECK_FALSE(rect.contains(asym::asymptotic_lambda(main_case(), 1.0, 21)));
}

TEST_CASE("asymptotics verification remainder decays like 1 over k") {
    const auto t = asym::verify_spectrum(rest_case(), 1.0, 10, 14);
    REQUIRE(t.rows.size() == 5);
    for (const auto& r : t.rows) {
        CHECK(r.certified);
        CHECK(r.residual < 1e-8);
        CHECK(r.err < 1.0);
    }
    CHECK(t.spread_max_over_median < 3.0);
    CHECK(t.ok);
}
