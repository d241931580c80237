#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polystab/errors.hpp"
#include "polystab/numerics/grid.hpp"
#include "polystab/numerics/newton.hpp"
#include "polystab/numerics/ode.hpp"
#include "polystab/numerics/quadrature.hpp"
#include "polystab/numerics/winding.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace polystab;
using namespace polystab::numerics;
using cd = std::complex<double>;

namespace {

std::vector<double> sample(const Grid& g, double (*f)(double)) {
    std::vector<double> v;
    for (double y : g.nodes()) v.push_back(f(y));
    return v;
}

}  // namespace

TEST_CASE("grid chebyshev nodes span the channel") {
    const Grid g = Grid::chebyshev(33);
    CHECK(g.size() == 33);
    CHECK(g.node(0) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(g.node(32) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g.node(16) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    for (int j = 1; j < g.size(); ++j) CHECK(g.node(j) > g.node(j - 1));
    CHECK_THROWS_AS(Grid::chebyshev(4), InvalidArgument);
}

TEST_CASE("grid differentiates polynomials exactly") {
    const Grid g = Grid::chebyshev(17);
    const auto v = sample(g, [](double y) { return y * y * y * y * y - 2.0 * y * y; });
    const Eigen::VectorXd d = g.differentiate(v);
    for (int j = 0; j < g.size(); ++j) {
        const double y = g.node(j);
        CHECK(std::abs(d[j] - (5.0 * y * y * y * y - 4.0 * y)) < 1e-12);
    }
}

TEST_CASE("grid spectral accuracy on smooth functions") {
    const Grid g = Grid::chebyshev(33);
    const auto v = sample(g, [](double y) { return std::sin(3.0 * y) * std::exp(y); });
    for (double y : {-0.4321, -0.1, 0.0123, 0.37}) {
        CHECK(std::abs(g.interpolate(v, y) - std::sin(3.0 * y) * std::exp(y)) < 1e-13);
    }
    const Eigen::VectorXd d = g.differentiate(v);
    for (int j = 0; j < g.size(); ++j) {
        const double y = g.node(j);
        CHECK(std::abs(d[j] - (3.0 * std::cos(3.0 * y) + std::sin(3.0 * y)) * std::exp(y)) < 1e-10);
    }
}

TEST_CASE("grid interpolation row reproduces interpolate") {
    const Grid g = Grid::chebyshev(21);
    const auto v = sample(g, [](double y) { return std::cosh(2.0 * y); });
    std::vector<double> row(21);
    g.interpolation_row(0.2468, row);
    double s = 0.0, ones = 0.0;
    for (int j = 0; j < 21; ++j) {
        s += row[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
        ones += row[static_cast<std::size_t>(j)];
    }
    CHECK(std::abs(s - g.interpolate(v, 0.2468)) < 1e-14);
    CHECK(std::abs(ones - 1.0) < 1e-14);
}

TEST_CASE("grid clenshaw curtis weights") {
    const Grid g = Grid::chebyshev(9);
    CHECK(std::abs(g.integrate(sample(g, [](double y) { return y * y * y * y; })) - 1.0 / 80.0) < 1e-15);
    CHECK(std::abs(g.integrate(sample(g, [](double) { return 1.0; })) - 1.0) < 1e-15);
    const Grid h = Grid::chebyshev(65);
    CHECK(std::abs(h.integrate(sample(h, [](double y) { return std::exp(y); })) - (std::exp(0.5) - std::exp(-0.5))) <
          1e-15);
}

TEST_CASE("grid uniform has trapezoid weights only") {
    const Grid g = Grid::uniform(11);
    CHECK(std::abs(g.node(1) - g.node(0) - 0.1) < 1e-15);
    CHECK(std::abs(g.integrate(sample(g, [](double y) { return y + 1.0; })) - 1.0) < 1e-14);
    CHECK_THROWS_AS(g.diff_matrix(), InvalidArgument);
    CHECK(g.locate(0.26) == 8);
}

TEST_CASE("ode exponential test problem") {
    const cd rate(-1.5, 4.0);
    auto rhs = [&](double, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) { dy = rate * y; };
    Eigen::VectorXcd y0(1);
    y0[0] = 1.0;
    const Trajectory tr = integrate_ivp(rhs, 0.0, 2.0, y0, IntegratorConfig{});
    CHECK(std::abs(tr.back()[0] - std::exp(2.0 * rate)) < 1e-8);
    CHECK(std::abs(tr.at(0.77)[0] - std::exp(0.77 * rate)) < 1e-7);
    CHECK(tr.stats.rejected >= 0);
}

TEST_CASE("ode tolerance halving reduces error") {
    const cd rate(0.3, 12.0);
    auto rhs = [&](double, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) { dy = rate * y; };
    Eigen::VectorXcd y0(1);
    y0[0] = 1.0;
    double prev = 0.0;
    for (double tol : {1e-6, 5e-7, 2.5e-7, 1.25e-7}) {
        IntegratorConfig c;
        c.rel_tol = tol;
        c.abs_tol = tol;
        const double e = std::abs(integrate_ivp(rhs, 0.0, 1.0, y0, c).back()[0] - std::exp(rate));
        if (prev > 0.0) CHECK(e < 0.75 * prev);
        prev = e;
    }
}

TEST_CASE("ode lands on stop points") {
    std::vector<double> hit;
    const std::vector<double> stops{0.1, 0.3333, 0.9};
    Eigen::VectorXd y(1);
    y[0] = 1.0;
    dormand_prince(
        [](double, const Eigen::VectorXd& x, Eigen::VectorXd& dx) { dx = -x; }, 0.0, 1.0, y, IntegratorConfig{}, stops,
        [&](double t, Eigen::VectorXd&, const Eigen::VectorXd&) {
            hit.push_back(t);
            return false;
        });
    for (double s : stops) CHECK(std::find(hit.begin(), hit.end(), s) != hit.end());
    CHECK(std::abs(y[0] - std::exp(-1.0)) < 1e-9);
}

TEST_CASE("ode rejects bad configuration and non-finite rhs") {
    IntegratorConfig c;
    c.renorm_threshold = 1.0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    Eigen::VectorXcd y0(1);
    y0[0] = 1.0;
    auto blowup = [](double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) { dy = y / (0.5 - t); };
    CHECK_THROWS_AS(integrate_ivp(blowup, 0.0, 1.0, y0, IntegratorConfig{}), Error);
}

TEST_CASE("newton finds complex roots") {
    auto f = [](const Eigen::VectorXcd& z) {
        Eigen::VectorXcd r(1);
        r[0] = z[0] * z[0] + 1.0;
        return r;
    };
    Eigen::VectorXcd s(1);
    s[0] = cd(0.3, 0.8);
    const NewtonResult r = newton_solve(f, s, 1e-13, 50);
    CHECK(r.converged);
    CHECK(std::abs(r.x[0] - cd(0.0, 1.0)) < 1e-12);
}

TEST_CASE("newton two dimensional system") {
    auto f = [](const Eigen::VectorXcd& z) {
        Eigen::VectorXcd r(2);
        r[0] = z[0] * z[0] + z[1] * z[1] - 4.0;
        r[1] = z[0] - z[1];
        return r;
    };
    Eigen::VectorXcd s(2);
    s << 1.0, 2.0;
    const NewtonResult r = newton_solve(f, s, 1e-12, 50);
    CHECK(std::abs(r.x[0] - std::sqrt(2.0)) < 1e-11);
    CHECK(std::abs(r.x[1] - std::sqrt(2.0)) < 1e-11);
}

TEST_CASE("newton reports no convergence with best iterate") {
    auto f = [](const Eigen::VectorXcd& z) {
        Eigen::VectorXcd r(1);
        r[0] = std::exp(z[0]);
        return r;
    };
    Eigen::VectorXcd s(1);
    s[0] = 0.0;
    try {
        newton_solve(f, s, 1e-14, 5);
        FAIL("expected NoConvergence");
    } catch (const NoConvergence& e) {
        CHECK(e.best().residual_norm < 1.0);
    }
}

TEST_CASE("quad oracles") {
    CHECK(std::abs(quad([](double x) { return cd(std::sin(x)); }, 0.0, std::numbers::pi, 1e-13) - 2.0) < 1e-12);
    const cd q = quad([](double x) { return std::exp(cd(0.0, 7.0 * x)); }, 0.0, 1.0, 1e-13);
    CHECK(std::abs(q - (std::exp(cd(0.0, 7.0)) - 1.0) / cd(0.0, 7.0)) < 1e-12);
    CHECK(std::abs(quad([](double x) { return cd(std::sqrt(x)); }, 0.0, 1.0, 1e-10) - 2.0 / 3.0) < 1e-10);
}

TEST_CASE("quad tolerance not met") {
    auto wild = [](double x) { return cd(std::sin(1.0 / (x + 1e-4))); };
    CHECK_THROWS_AS(quad_adaptive(wild, 0.0, 1.0, 1e-14, 4), ToleranceNotMet);
}

TEST_CASE("winding counts polynomial zeros") {
    auto f = [](cd z) { return (z - cd(1.0, 1.0)) * (z - cd(-0.5, 0.2)) * (z - cd(3.0, -2.0)); };
    CHECK(winding_number(f, Rect{-1.0, 2.0, -1.0, 2.0}, 16) == 2);
    CHECK(winding_number(f, Rect{-1.0, 4.0, -3.0, 2.0}, 16) == 3);
    CHECK(winding_number(f, Rect{5.0, 6.0, 5.0, 6.0}, 16) == 0);
    CHECK(winding_number([](cd z) { return 1.0 / (z - 0.5); }, Rect{0.0, 1.0, -1.0, 1.0}, 16) == -1);
}

TEST_CASE("winding zero on contour raises") {
    auto f = [](cd z) { return z - cd(1.0, 0.0); };
    CHECK_THROWS_AS(winding_number(f, Rect{0.0, 1.0, -1.0, 1.0}, 16), ZeroOnContour);
    CHECK_THROWS_AS(winding_number(f, Rect{0.0, 0.0, -1.0, 1.0}, 16), InvalidArgument);
}

TEST_CASE("winding property random polynomials") {
    std::mt19937 gen(20261014);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<cd> roots;
        const int n = 1 + trial % 6;
        for (int i = 0; i < n; ++i) roots.emplace_back(coord(gen), coord(gen));
        double a = coord(gen), b = coord(gen), c = coord(gen), d = coord(gen);
        const Rect r{std::min(a, b), std::max(a, b) + 0.1, std::min(c, d), std::max(c, d) + 0.1};
        int inside = 0;
        double clearance = 1e9;
        for (cd z : roots) {
            inside += r.contains(z);
            clearance = std::min({clearance, std::abs(z.real() - r.re_lo), std::abs(z.real() - r.re_hi),
                                  std::abs(z.imag() - r.im_lo), std::abs(z.imag() - r.im_hi)});
        }
        if (clearance < 1e-3) continue;
        auto log_f = [&](cd z) {
            cd s = 0.0;
            for (cd w : roots) s += std::log(z - w);
            return s;
        };
        CHECK(winding_count_log(log_f, r, 8).winding == inside);
    }
}
