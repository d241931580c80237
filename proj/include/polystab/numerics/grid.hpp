#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace polystab::numerics {

enum class GridKind { chebyshev_gauss_lobatto, uniform };

/// Discretization of the channel cross-section y in [-1/2, 1/2].
///
/// Chebyshev-Gauss-Lobatto grids carry barycentric weights, a spectral
/// differentiation matrix and Clenshaw-Curtis weights; uniform grids carry
/// trapezoid weights only and do not support spectral operations.
class Grid {
public:
    static constexpr double lower = -0.5;
    static constexpr double upper = 0.5;

    static Grid chebyshev(int n_nodes);
    static Grid uniform(int n_nodes);

    GridKind kind() const { return kind_; }
    int size() const { return static_cast<int>(nodes_.size()); }
    std::span<const double> nodes() const { return nodes_; }
    double node(int j) const { return nodes_[static_cast<std::size_t>(j)]; }

    /// Quadrature weights: Clenshaw-Curtis (Chebyshev) or trapezoid (uniform).
    std::span<const double> quadrature_weights() const { return quad_weights_; }

    /// d/dy on nodal values; Chebyshev grids only.
    const Eigen::MatrixXd& diff_matrix() const;

    /// Barycentric interpolation of nodal values at y; Chebyshev grids only.
    double interpolate(std::span<const double> values, double y) const;

    /// Barycentric coefficients l_j(y) with sum_j l_j(y) f_j = p(y).
    /// Writes size() entries into out.
    void interpolation_row(double y, std::span<double> out) const;

    Eigen::VectorXd differentiate(std::span<const double> values) const;
    double integrate(std::span<const double> values) const;

    /// Nearest grid node index to y.
    int locate(double y) const;

private:
    Grid() = default;
    void require_chebyshev() const;

    GridKind kind_ = GridKind::chebyshev_gauss_lobatto;
    std::vector<double> nodes_;
    std::vector<double> bary_weights_;
    std::vector<double> quad_weights_;
    Eigen::MatrixXd diff_;
};

}  // namespace polystab::numerics
