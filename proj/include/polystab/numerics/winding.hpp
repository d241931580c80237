#pragma once

#include <complex>
#include <functional>

namespace polystab::numerics {

/// Axis-aligned rectangle in the complex plane.
struct Rect {
    double re_lo = 0.0, re_hi = 0.0, im_lo = 0.0, im_hi = 0.0;

    static Rect centered(std::complex<double> c, double half_width) {
        return {c.real() - half_width, c.real() + half_width, c.imag() - half_width, c.imag() + half_width};
    }
    bool contains(std::complex<double> z) const {
        return z.real() > re_lo && z.real() < re_hi && z.imag() > im_lo && z.imag() < im_hi;
    }
    double width() const { return re_hi - re_lo; }
    double height() const { return im_hi - im_lo; }
    std::complex<double> center() const { return {0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi)}; }
};

struct WindingResult {
    int winding = 0;
    int evaluations = 0;
    double min_log_modulus = 0.0;
};

using ComplexFn = std::function<std::complex<double>(std::complex<double>)>;

/// Argument-principle count of zeros minus poles inside `rect`.
///
/// `log_f` returns log f(z) (any branch); only its imaginary part, the phase,
/// is accumulated. The boundary is sampled at n_samples points and each
/// segment whose phase jump exceeds pi/2 is bisected. Throws ZeroOnContour
/// when f vanishes on the contour or the phase cannot be resolved.
WindingResult winding_count_log(const ComplexFn& log_f, const Rect& rect, int n_samples);

/// Same count for a plain function value f(z).
int winding_number(const ComplexFn& f, const Rect& rect, int n_samples);

}  // namespace polystab::numerics
