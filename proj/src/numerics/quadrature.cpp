#include "polystab/numerics/quadrature.hpp"

#include "polystab/errors.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

namespace polystab::numerics {

namespace {

constexpr std::array<double, 8> kx = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kw = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd Kronrod nodes kx[1], kx[3], kx[5], kx[7].
constexpr std::array<double, 4> gw = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
    double a, b;
    std::complex<double> value;
    double error;
    bool operator<(const Piece& o) const { return error < o.error; }
};

Piece gauss_kronrod(const std::function<std::complex<double>(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    std::complex<double> k = kw[7] * f(c);
    std::complex<double> g = gw[3] * f(c);
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kx[static_cast<std::size_t>(i)];
        const std::complex<double> s = f(c - dx) + f(c + dx);
        k += kw[static_cast<std::size_t>(i)] * s;
        if (i % 2 == 1) g += gw[static_cast<std::size_t>(i / 2)] * s;
    }
    return {a, b, k * h, std::abs((k - g) * h)};
}

}  // namespace

QuadResult quad_adaptive(const std::function<std::complex<double>(double)>& f, double a, double b, double tol,
                         int max_intervals) {
    if (!(tol > 0.0)) throw InvalidArgument("quadrature tolerance must be positive");
    if (a == b) return {};
    std::priority_queue<Piece> heap;
    Piece first = gauss_kronrod(f, a, b);
    std::complex<double> total = first.value;
    double err = first.error;
    heap.push(first);
    int count = 1;
    while (err > tol) {
        if (count >= max_intervals) {
            throw ToleranceNotMet("error estimate " + std::to_string(err) + " above " + std::to_string(tol));
        }
        Piece worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Piece left = gauss_kronrod(f, worst.a, mid);
        Piece right = gauss_kronrod(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++count;
        // re-sum occasionally to keep the running totals free of drift
        if (count % 64 == 0) {
            auto copy = heap;
            total = 0.0;
            err = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                err += copy.top().error;
                copy.pop();
            }
        }
    }
    return {total, err, count};
}

}  // namespace polystab::numerics
