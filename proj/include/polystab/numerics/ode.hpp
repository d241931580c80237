#pragma once

#include "polystab/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace polystab::numerics {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_steps = 200000;
    /// Basis condition estimate that triggers QR renormalization.
    double renorm_threshold = 10.0;

    void validate() const;

    static IntegratorConfig eigenvalue_defaults() { return {}; }
    static IntegratorConfig base_state_defaults() { return {1e-12, 1e-14, 200000, 10.0}; }
};

struct StepStats {
    int accepted = 0;
    int rejected = 0;
    int rhs_evals = 0;
};

/// Dense trajectory with cubic Hermite interpolation between accepted steps.
class Trajectory {
public:
    std::vector<double> t;
    std::vector<Eigen::VectorXcd> y;
    std::vector<Eigen::VectorXcd> dydt;
    StepStats stats;

    Eigen::VectorXcd at(double s) const;
    const Eigen::VectorXcd& back() const { return y.back(); }
};

namespace detail {

inline double abs_value(double v) { return std::abs(v); }
inline double abs_value(std::complex<double> v) { return std::abs(v); }

template <class Vec>
bool all_finite(const Vec& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const auto x = v[i];
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, double>) {
            if (!std::isfinite(x)) return false;
        } else {
            if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
        }
    }
    return true;
}

}  // namespace detail

/// Embedded Dormand-Prince 5(4) driver.
///
/// Integrates y' = f(t, y) from t0 to t1 (t1 > t0), landing exactly on every
/// point of `stops` inside the span. After each accepted step the observer
/// `on_step(t, y, dydt)` is called; it may modify y in place and must return
/// true when it did, so the FSAL derivative is recomputed.
template <class Vec, class Rhs, class Observer>
StepStats dormand_prince(Rhs&& f, double t0, double t1, Vec& y, const IntegratorConfig& cfg,
                         std::span<const double> stops, Observer&& on_step) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    if (!(t1 > t0)) throw InvalidArgument("integration span must be increasing");
    StepStats stats;
    const auto n = y.size();
    Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);

    auto eval = [&](double t, const Vec& state, Vec& out) {
        f(t, state, out);
        ++stats.rhs_evals;
        if (!detail::all_finite(out)) {
            throw NonFiniteRhs("right-hand side not finite at t = " + std::to_string(t));
        }
    };

    std::vector<double> targets;
    for (double s : stops) {
        if (s > t0 && s < t1) targets.push_back(s);
    }
    std::sort(targets.begin(), targets.end());
    targets.push_back(t1);
    std::size_t next_target = 0;

    double t = t0;
    eval(t, y, k1);

    // Initial step (Hairer, Norsett & Wanner heuristic).
    double h;
    {
        double d0 = 0.0, d1 = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double sc = cfg.abs_tol + cfg.rel_tol * detail::abs_value(y[i]);
            d0 = std::max(d0, detail::abs_value(y[i]) / sc);
            d1 = std::max(d1, detail::abs_value(k1[i]) / sc);
        }
        h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h = std::min({h, t1 - t0, 0.1 * (t1 - t0)});
        h = std::max(h, 1e-12 * (t1 - t0));
    }

    while (t < t1) {
        if (stats.accepted + stats.rejected >= cfg.max_steps) {
            throw StepLimitExceeded("exceeded " + std::to_string(cfg.max_steps) + " steps at t = " +
                                    std::to_string(t));
        }
        const double target = targets[next_target];
        bool hits_target = false;
        double step = h;
        if (t + step >= target - 1e-14 * std::max(1.0, std::abs(target))) {
            step = target - t;
            hits_target = true;
        }

        ytmp = y + step * a21 * k1;
        eval(t + c2 * step, ytmp, k2);
        ytmp = y + step * (a31 * k1 + a32 * k2);
        eval(t + c3 * step, ytmp, k3);
        ytmp = y + step * (a41 * k1 + a42 * k2 + a43 * k3);
        eval(t + c4 * step, ytmp, k4);
        ytmp = y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        eval(t + c5 * step, ytmp, k5);
        ytmp = y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        eval(t + step, ytmp, k6);
        ynew = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        eval(t + step, ynew, k7);
        err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double acc = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double sc = cfg.abs_tol +
                              cfg.rel_tol * std::max(detail::abs_value(y[i]), detail::abs_value(ynew[i]));
            const double r = detail::abs_value(err[i]) / sc;
            acc += r * r;
        }
        const double en = std::sqrt(acc / static_cast<double>(n));

        if (en <= 1.0) {
            t = hits_target ? target : t + step;
            y = ynew;
            k1 = k7;
            ++stats.accepted;
            if (hits_target) ++next_target;
            if (on_step(t, y, k1)) eval(t, y, k1);
            const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
            // a clamped landing step says nothing about the natural step size
            if (!hits_target || step >= h) h = step * fac;
        } else {
            ++stats.rejected;
            h = step * std::max(0.2, 0.9 * std::pow(en, -0.2));
        }
        if (h < 1e-14 * (t1 - t0)) {
            throw StepLimitExceeded("step size underflow at t = " + std::to_string(t));
        }
    }
    return stats;
}

using ComplexRhs = std::function<void(double, const Eigen::VectorXcd&, Eigen::VectorXcd&)>;

/// Adaptive integration with dense output over [t0, t1].
Trajectory integrate_ivp(const ComplexRhs& rhs, double t0, double t1, const Eigen::VectorXcd& y0,
                         const IntegratorConfig& cfg, std::span<const double> stops = {});

}  // namespace polystab::numerics
