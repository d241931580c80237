#include "polystab/numerics/newton.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace polystab::numerics {

namespace {

double max_norm(const Eigen::VectorXcd& v) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v[i]));
    return m;
}

bool finite(const Eigen::VectorXcd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
    }
    return true;
}

}  // namespace

NewtonResult newton_solve(const ResidualFn& residual, const Eigen::VectorXcd& seed, double tol,
                          int max_iter) {
    const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
    NewtonResult cur;
    cur.x = seed;
    Eigen::VectorXcd r = residual(cur.x);
    ++cur.residual_evals;
    if (!finite(r)) throw InvalidArgument("residual not finite at the seed");
    cur.residual_norm = max_norm(r);

    const auto n = seed.size();
    Eigen::MatrixXcd jac(r.size(), n);
    while (cur.residual_norm > tol) {
        if (cur.iterations >= max_iter) {
            throw NoConvergence("residual " + std::to_string(cur.residual_norm) + " after " +
                                    std::to_string(cur.iterations) + " iterations",
                                cur);
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            const double h = sqrt_eps * (1.0 + std::abs(cur.x[j]));
            Eigen::VectorXcd xp = cur.x;
            xp[j] += h;
            Eigen::VectorXcd rp = residual(xp);
            ++cur.residual_evals;
            if (!finite(rp)) throw SingularJacobian("residual not finite in the difference stencil");
            jac.col(j) = (rp - r) / h;
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(jac);
        qr.setThreshold(1e-13);
        if (qr.rank() < n) throw SingularJacobian("finite-difference Jacobian is rank deficient");
        const Eigen::VectorXcd dx = qr.solve(-r);

        double damping = 1.0;
        Eigen::VectorXcd x_try, r_try;
        double norm_try = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 12; ++k) {
            x_try = cur.x + damping * dx;
            r_try = residual(x_try);
            ++cur.residual_evals;
            norm_try = finite(r_try) ? max_norm(r_try) : std::numeric_limits<double>::infinity();
            if (norm_try < (1.0 - 1e-4 * damping) * cur.residual_norm) break;
            damping *= 0.5;
        }
        ++cur.iterations;
        if (!(norm_try < cur.residual_norm)) {
            // no descent: a noise floor or a bad basin; report the best iterate
            throw NoConvergence("line search stalled at residual " + std::to_string(cur.residual_norm), cur);
        }
        cur.x = x_try;
        r = r_try;
        cur.residual_norm = norm_try;
    }
    cur.converged = true;
    return cur;
}

}  // namespace polystab::numerics
