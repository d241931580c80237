#include "polystab/numerics/grid.hpp"

#include "polystab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace polystab::numerics {

namespace {

// Clenshaw-Curtis weights on [-1, 1] for x_j = -cos(pi j / n), j = 0..n.
std::vector<double> clenshaw_curtis_weights(int n) {
    std::vector<double> w(static_cast<std::size_t>(n + 1), 0.0);
    const double pi = std::numbers::pi;
    for (int j = 0; j <= n; ++j) {
        const double theta = pi * j / n;
        double s = 0.0;
        for (int k = 1; k <= n / 2; ++k) {
            const double b = (2 * k == n) ? 1.0 : 2.0;
            s += b * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
        }
        const double c = (j == 0 || j == n) ? 1.0 : 2.0;
        w[static_cast<std::size_t>(j)] = c / n * (1.0 - s);
    }
    return w;
}

}  // namespace

Grid Grid::chebyshev(int n_nodes) {
    if (n_nodes < 8) {
        throw InvalidArgument("grid needs at least 8 nodes");
    }
    Grid g;
    g.kind_ = GridKind::chebyshev_gauss_lobatto;
    const int n = n_nodes - 1;
    const double pi = std::numbers::pi;
    g.nodes_.resize(static_cast<std::size_t>(n_nodes));
    g.bary_weights_.resize(static_cast<std::size_t>(n_nodes));
    for (int j = 0; j <= n; ++j) {
        // sin form keeps the nodes exactly antisymmetric about 0
        const double x = std::sin(pi * (2.0 * j - n) / (2.0 * n));
        g.nodes_[static_cast<std::size_t>(j)] = 0.5 * x;
        double w = (j % 2 == 0) ? 1.0 : -1.0;
        if (j == 0 || j == n) w *= 0.5;
        g.bary_weights_[static_cast<std::size_t>(j)] = w;
    }
    g.nodes_.front() = lower;
    g.nodes_.back() = upper;

    auto cc = clenshaw_curtis_weights(n);
    for (auto& w : cc) w *= 0.5;  // [-1,1] -> [-1/2,1/2]
    g.quad_weights_ = std::move(cc);

    // Differentiation matrix from barycentric weights, diagonal by negative sum.
    g.diff_.resize(n_nodes, n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        double diag = 0.0;
        for (int j = 0; j < n_nodes; ++j) {
            if (i == j) continue;
            const double d = (g.bary_weights_[static_cast<std::size_t>(j)] /
                              g.bary_weights_[static_cast<std::size_t>(i)]) /
                             (g.nodes_[static_cast<std::size_t>(i)] - g.nodes_[static_cast<std::size_t>(j)]);
            g.diff_(i, j) = d;
            diag -= d;
        }
        g.diff_(i, i) = diag;
    }
    return g;
}

Grid Grid::uniform(int n_nodes) {
    if (n_nodes < 8) {
        throw InvalidArgument("grid needs at least 8 nodes");
    }
    Grid g;
    g.kind_ = GridKind::uniform;
    const int n = n_nodes - 1;
    const double h = (upper - lower) / n;
    g.nodes_.resize(static_cast<std::size_t>(n_nodes));
    g.quad_weights_.assign(static_cast<std::size_t>(n_nodes), h);
    for (int j = 0; j <= n; ++j) g.nodes_[static_cast<std::size_t>(j)] = lower + j * h;
    g.nodes_.back() = upper;
    g.quad_weights_.front() = g.quad_weights_.back() = 0.5 * h;
    return g;
}

void Grid::require_chebyshev() const {
    if (kind_ != GridKind::chebyshev_gauss_lobatto) {
        throw InvalidArgument("spectral operation requested on a uniform grid");
    }
}

const Eigen::MatrixXd& Grid::diff_matrix() const {
    require_chebyshev();
    return diff_;
}

void Grid::interpolation_row(double y, std::span<double> out) const {
    require_chebyshev();
    const std::size_t n = nodes_.size();
    double denom = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double d = y - nodes_[j];
        if (d == 0.0) {
            std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n), 0.0);
            out[j] = 1.0;
            return;
        }
        const double t = bary_weights_[j] / d;
        out[j] = t;
        denom += t;
    }
    const double inv = 1.0 / denom;
    for (std::size_t j = 0; j < n; ++j) out[j] *= inv;
}

double Grid::interpolate(std::span<const double> values, double y) const {
    require_chebyshev();
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
        const double d = y - nodes_[j];
        if (d == 0.0) return values[j];
        const double t = bary_weights_[j] / d;
        num += t * values[j];
        den += t;
    }
    return num / den;
}

Eigen::VectorXd Grid::differentiate(std::span<const double> values) const {
    require_chebyshev();
    Eigen::Map<const Eigen::VectorXd> v(values.data(), static_cast<Eigen::Index>(values.size()));
    return diff_ * v;
}

double Grid::integrate(std::span<const double> values) const {
    double s = 0.0;
    for (std::size_t j = 0; j < nodes_.size(); ++j) s += quad_weights_[j] * values[j];
    return s;
}

int Grid::locate(double y) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), y);
    if (it == nodes_.end()) return size() - 1;
    const auto j = static_cast<int>(it - nodes_.begin());
    if (j > 0 && std::abs(nodes_[static_cast<std::size_t>(j - 1)] - y) < std::abs(*it - y)) return j - 1;
    return j;
}

}  // namespace polystab::numerics
