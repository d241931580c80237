#include "polystab/numerics/winding.hpp"

#include "polystab/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace polystab::numerics {

namespace {

constexpr double pi = std::numbers::pi;
constexpr int max_depth = 40;

double wrap(double d) {
    d = std::fmod(d, 2.0 * pi);
    if (d > pi) d -= 2.0 * pi;
    if (d <= -pi) d += 2.0 * pi;
    return d;
}

struct Contour {
    const Rect& r;
    double perimeter() const { return 2.0 * (r.width() + r.height()); }
    std::complex<double> point(double s) const {
        const double w = r.width(), h = r.height();
        if (s < w) return {r.re_lo + s, r.im_lo};
        s -= w;
        if (s < h) return {r.re_hi, r.im_lo + s};
        s -= h;
        if (s < w) return {r.re_hi - s, r.im_hi};
        s -= w;
        return {r.re_lo, r.im_hi - std::min(s, h)};
    }
};

class PhaseWalker {
public:
    PhaseWalker(const ComplexFn& log_f, const Contour& c) : log_f_(log_f), c_(c) {}

    std::complex<double> log_at(double s) {
        const std::complex<double> z = c_.point(s);
        const std::complex<double> lf = log_f_(z);
        ++evals;
        if (!std::isfinite(lf.real()) || !std::isfinite(lf.imag())) {
            throw ZeroOnContour("f vanishes or is not finite at z = (" + std::to_string(z.real()) + ", " +
                                std::to_string(z.imag()) + ")");
        }
        min_log_mod = std::min(min_log_mod, lf.real());
        return lf;
    }

    // Phase increment from sa to sb; bisects until both phase and log-modulus steps are small.
    double segment(double sa, std::complex<double> la, double sb, std::complex<double> lb, int depth) {
        const double d = wrap(lb.imag() - la.imag());
        if (std::abs(d) <= 0.5 * pi && std::abs(lb.real() - la.real()) <= 1.0) return d;
        if (depth >= max_depth) {
            throw ZeroOnContour("phase unresolved near s = " + std::to_string(sa) + "; perturb the rectangle");
        }
        const double sm = 0.5 * (sa + sb);
        const std::complex<double> lm = log_at(sm);
        return segment(sa, la, sm, lm, depth + 1) + segment(sm, lm, sb, lb, depth + 1);
    }

    int evals = 0;
    double min_log_mod = std::numeric_limits<double>::infinity();

private:
    const ComplexFn& log_f_;
    const Contour& c_;
};

}  // namespace

WindingResult winding_count_log(const ComplexFn& log_f, const Rect& rect, int n_samples) {
    if (!(rect.width() > 0.0) || !(rect.height() > 0.0)) throw InvalidArgument("degenerate rectangle");
    if (n_samples < 4) throw InvalidArgument("need at least 4 contour samples");
    const Contour contour{rect};
    PhaseWalker walker(log_f, contour);
    const double perim = contour.perimeter();
    const std::complex<double> p0 = walker.log_at(0.0);
    std::complex<double> prev_p = p0;
    double prev_s = 0.0, total = 0.0;
    for (int i = 1; i <= n_samples; ++i) {
        const double s = perim * i / n_samples;
        const std::complex<double> p = (i == n_samples) ? p0 : walker.log_at(s);
        total += walker.segment(prev_s, prev_p, s, p, 0);
        prev_s = s;
        prev_p = p;
    }
    const double turns = total / (2.0 * pi);
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) > 1e-6) {
        throw ZeroOnContour("accumulated phase is not a multiple of 2 pi");
    }
    return {static_cast<int>(rounded), walker.evals, walker.min_log_mod};
}

int winding_number(const ComplexFn& f, const Rect& rect, int n_samples) {
    auto log_f = [&f](std::complex<double> z) {
        const std::complex<double> v = f(z);
        if (v == 0.0) return std::complex<double>(-std::numeric_limits<double>::infinity(), 0.0);
        return std::log(v);
    };
    return winding_count_log(log_f, rect, n_samples).winding;
}

}  // namespace polystab::numerics
