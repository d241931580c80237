#pragma once

#include <complex>
#include <functional>

namespace polystab::numerics {

struct QuadResult {
    std::complex<double> value;
    double error_estimate = 0.0;
    int intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (7, 15) quadrature of a complex integrand.
/// Throws ToleranceNotMet when the error estimate stays above tol after the
/// subdivision budget.
QuadResult quad_adaptive(const std::function<std::complex<double>(double)>& f, double a, double b, double tol,
                         int max_intervals = 4000);

inline std::complex<double> quad(const std::function<std::complex<double>(double)>& f, double a, double b,
                                 double tol) {
    return quad_adaptive(f, a, b, tol).value;
}

}  // namespace polystab::numerics
