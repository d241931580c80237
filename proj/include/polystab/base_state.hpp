#pragma once

#include "polystab/errors.hpp"
#include "polystab/model.hpp"
#include "polystab/numerics/grid.hpp"
#include "polystab/numerics/ode.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <utility>
#include <vector>

namespace polystab::base {

using model::ModelParams;
using numerics::Grid;
using numerics::IntegratorConfig;

struct ClosureSolution {
    double a11 = 0.0;
    double a22 = 0.0;
    int newton_iters = 0;
};

/// Normal stresses (a11, a22) from the shear stress a12 through the two
/// algebraic relaxation balances, on the branch that vanishes with a12.
ClosureSolution solve_closure(const ModelParams& p, double a12, std::pair<double, double> seed = {0.0, 0.0});

/// Residuals (diagonal balance, axial balance) of the closure relations.
std::pair<double, double> closure_residual(const ModelParams& p, double a11, double a12, double a22);

/// All base-state fields and derivatives at one ordinate.
struct PointState {
    double y = 0.0;
    double u = 0.0, u_p = 0.0;
    double a11 = 0.0, a12 = 0.0, a22 = 0.0;
    double a11_p = 0.0, a12_p = 0.0, a22_p = 0.0;
    double Z = 0.0, Z_p = 0.0;
    double L = 0.0, L_p = 0.0;
    double P = 0.0;
};

struct ShootingDiagnostics {
    std::array<double, 3> unknowns{};  // Z'(-1/2), L'(-1/2), C0
    double residual = 0.0;             // max-norm of the far-wall mismatch
    int newton_iterations = 0;
    int homotopy_stages = 0;
};

class ShootingNoConvergence : public Error {
public:
    ShootingNoConvergence(const std::string& what, ShootingDiagnostics d)
        : Error("ShootingNoConvergence: " + what), diag_(d) {}
    const ShootingDiagnostics& diagnostics() const { return diag_; }

private:
    ShootingDiagnostics diag_;
};

/// Stationary channel flow sampled on a Chebyshev grid.
///
/// Nodal vectors are public so callers can inspect or perturb them; call
/// refresh() after editing to rebuild the derived profiles and the
/// interpolation table.
class BaseState {
public:
    BaseState(Grid grid, ModelParams params);

    Grid grid;
    ModelParams params;
    std::vector<double> u, a11, a12, a22, Z, L, P;
    std::vector<double> u_p, Z_p, L_p, a11_p, a12_p, a22_p;
    double C0 = 0.0;
    ShootingDiagnostics diagnostics;

    /// Rebuilds stress derivatives by spectral differentiation and the
    /// packed interpolation table.
    void refresh();

    PointState at(double y) const;
    PointState node(int j) const;
    int size() const { return grid.size(); }

private:
    Eigen::MatrixXd packed_;  // nodes x fields
};

struct BaseStateOptions {
    IntegratorConfig cfg = IntegratorConfig::base_state_defaults();
    /// Shooting unknowns (Z'(-1/2), L'(-1/2), C0) to start from.
    std::optional<std::array<double, 3>> seed;
    double tol = 1e-11;
    int max_iter = 40;
    /// Homotopy increment in the forcing parameter, used when a direct solve fails.
    double homotopy_step = 0.25;
};

BaseState solve_base_state(const ModelParams& params, const Grid& grid, const BaseStateOptions& opts = {});
BaseState solve_base_state(const ModelParams& params, const Grid& grid, const IntegratorConfig& cfg);

struct BaseResidual {
    /// first integral, pressure, velocity gradient, a22 closure, a11 closure,
    /// temperature, magnetic field, boundary conditions
    std::array<double, 8> relation{};
    double max() const;
};

BaseResidual base_residual_breakdown(const BaseState& state);
double base_residual(const BaseState& state);

/// Velocity gradient u' implied by the local stresses and temperature.
double velocity_gradient(const ModelParams& p, double a11, double a12, double a22, double Z);

}  // namespace polystab::base
