#include "polystab/numerics/ode.hpp"

namespace polystab::numerics {

void IntegratorConfig::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw InvalidArgument("integrator tolerances must be positive");
    if (max_steps < 1000) throw InvalidArgument("max_steps must be at least 1000");
    if (!(renorm_threshold > 1.0)) throw InvalidArgument("renorm_threshold must exceed 1");
}

Eigen::VectorXcd Trajectory::at(double s) const {
    if (t.empty()) throw InvalidArgument("empty trajectory");
    if (s <= t.front()) return y.front();
    if (s >= t.back()) return y.back();
    auto it = std::upper_bound(t.begin(), t.end(), s);
    const auto i = static_cast<std::size_t>(it - t.begin()) - 1;
    const double h = t[i + 1] - t[i];
    const double th = (s - t[i]) / h;
    const double h00 = (1 + 2 * th) * (1 - th) * (1 - th);
    const double h10 = th * (1 - th) * (1 - th);
    const double h01 = th * th * (3 - 2 * th);
    const double h11 = th * th * (th - 1);
    return h00 * y[i] + h10 * h * dydt[i] + h01 * y[i + 1] + h11 * h * dydt[i + 1];
}

Trajectory integrate_ivp(const ComplexRhs& rhs, double t0, double t1, const Eigen::VectorXcd& y0,
                         const IntegratorConfig& cfg, std::span<const double> stops) {
    cfg.validate();
    Trajectory traj;
    Eigen::VectorXcd y = y0;
    Eigen::VectorXcd d0(y.size());
    rhs(t0, y, d0);
    traj.t.push_back(t0);
    traj.y.push_back(y);
    traj.dydt.push_back(d0);
    traj.stats = dormand_prince(rhs, t0, t1, y, cfg, stops,
                                [&](double t, Eigen::VectorXcd& state, const Eigen::VectorXcd& d) {
                                    traj.t.push_back(t);
                                    traj.y.push_back(state);
                                    traj.dydt.push_back(d);
                                    return false;
                                });
    return traj;
}

}  // namespace polystab::numerics
