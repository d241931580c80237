#pragma once

#include "polystab/errors.hpp"

#include <Eigen/Dense>

#include <functional>

namespace polystab::numerics {

struct NewtonResult {
    Eigen::VectorXcd x;
    double residual_norm = 0.0;  // max-norm of the residual at x
    int iterations = 0;
    int residual_evals = 0;
    bool converged = false;
};

/// Raised when the iteration budget is exhausted; carries the best iterate.
class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, NewtonResult best)
        : Error("NoConvergence: " + what), best_(std::move(best)) {}
    const NewtonResult& best() const { return best_; }

private:
    NewtonResult best_;
};

using ResidualFn = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;

/// Damped Newton iteration with a forward-difference Jacobian.
///
/// The residual is treated as holomorphic in each component, so the
/// derivative along the real axis is the complex derivative; real problems
/// work unchanged with zero imaginary parts. Column j uses the step
/// sqrt(eps) * (1 + |x_j|). Backtracking halves the step until the residual
/// max-norm decreases.
NewtonResult newton_solve(const ResidualFn& residual, const Eigen::VectorXcd& seed, double tol,
                          int max_iter);

}  // namespace polystab::numerics
