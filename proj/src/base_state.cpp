#include "polystab/base_state.hpp"

#include "polystab/numerics/newton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace polystab::base {

namespace {

constexpr int n_fields = 14;
enum FieldIndex { f_u, f_up, f_a11, f_a12, f_a22, f_a11p, f_a12p, f_a22p, f_Z, f_Zp, f_L, f_Lp, f_P, f_spare };

struct ClosureCoeffs {
    double kb3, c3, beta, winv, g;
};

ClosureCoeffs closure_coeffs(const ModelParams& p, double a12) {
    return {p.k_bar() / 3.0, (p.k_phen + 2.0 * p.beta) / 3.0, p.beta, 1.0 / p.W, a12 * a12};
}

// Root of A x^2 + B x + C that vanishes with C; nullopt when B <= 0 or the
// discriminant is negative.
std::optional<double> vanishing_root(double A, double B, double C) {
    if (!(B > 0.0)) return std::nullopt;
    const double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) return std::nullopt;
    return -2.0 * C / (B + std::sqrt(disc));
}

std::optional<double> root22(const ClosureCoeffs& c, double a11) {
    return vanishing_root(c.kb3 + c.beta, c.winv + c.kb3 * a11, c.beta * c.g);
}

std::optional<double> root11(const ClosureCoeffs& c, double a22) {
    const double A2 = c.winv + a22;
    if (!(A2 > 0.0)) return std::nullopt;
    return vanishing_root(c.kb3 + c.beta, c.winv + c.kb3 * a22 - 2.0 * c.g * c.c3 / A2,
                          c.beta * c.g - 2.0 * c.g * (c.winv + c.c3 * a22) / A2);
}

std::pair<double, double> residual_pair(const ClosureCoeffs& c, double a11, double a22) {
    const double KI = c.winv + c.kb3 * (a11 + a22);
    const double Kt = c.winv + c.c3 * (a11 + a22);
    const double A2 = c.winv + a22;
    return {KI * a22 + c.beta * (c.g + a22 * a22), KI * a11 + c.beta * (c.g + a11 * a11) - 2.0 * c.g * Kt / A2};
}

// Newton on the coupled pair from (x11, x22); returns iterations or -1.
int closure_newton(const ClosureCoeffs& c, double& x11, double& x22, double tol) {
    for (int it = 0; it <= 50; ++it) {
        auto [F1, F2] = residual_pair(c, x11, x22);
        if (std::max(std::abs(F1), std::abs(F2)) <= tol) return it;
        const double KI = c.winv + c.kb3 * (x11 + x22);
        const double Kt = c.winv + c.c3 * (x11 + x22);
        const double A2 = c.winv + x22;
        const double j11 = c.kb3 * x22;
        const double j12 = KI + c.kb3 * x22 + 2.0 * c.beta * x22;
        const double j21 = KI + c.kb3 * x11 + 2.0 * c.beta * x11 - 2.0 * c.g * c.c3 / A2;
        const double j22 = c.kb3 * x11 - 2.0 * c.g * (c.c3 / A2 - Kt / (A2 * A2));
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0 || !std::isfinite(det)) return -1;
        double d11 = -(j22 * F1 - j12 * F2) / det;
        double d22 = -(-j21 * F1 + j11 * F2) / det;
        const double f0 = std::max(std::abs(F1), std::abs(F2));
        double damp = 1.0;
        for (int k = 0; k < 20; ++k) {
            const double t11 = x11 + damp * d11, t22 = x22 + damp * d22;
            if (c.winv + t22 > 0.0) {
                auto [G1, G2] = residual_pair(c, t11, t22);
                if (std::max(std::abs(G1), std::abs(G2)) < f0 || damp < 1e-3) {
                    x11 = t11;
                    x22 = t22;
                    break;
                }
            }
            damp *= 0.5;
            if (k == 19) return -1;
        }
    }
    return -1;
}

bool on_branch(const ClosureCoeffs& c, double a11, double a22) {
    const auto r22 = root22(c, a11);
    const auto r11 = root11(c, a22);
    if (!r22 || !r11) return false;
    return std::abs(*r22 - a22) <= 1e-8 * (1.0 + std::abs(a22)) &&
           std::abs(*r11 - a11) <= 1e-8 * (1.0 + std::abs(a11));
}

struct ClosureAttempt {
    bool ok = false;
    double a11 = 0, a22 = 0;
    int iters = 0;
};

ClosureAttempt closure_from(const ClosureCoeffs& c, double a11, double a22, double tol) {
    // a few sweeps of the scalar vanishing-root maps pull the seed onto the branch
    for (int s = 0; s < 3; ++s) {
        const auto r22 = root22(c, a11);
        if (!r22) break;
        a22 = *r22;
        const auto r11 = root11(c, a22);
        if (!r11) break;
        a11 = *r11;
    }
    const int it = closure_newton(c, a11, a22, tol);
    if (it < 0) return {};
    return {on_branch(c, a11, a22), a11, a22, it};
}

double closure_tol(const ClosureCoeffs& c) { return 1e-15 * (1.0 + c.g) + 1e-14 * c.g; }

}  // namespace

std::pair<double, double> closure_residual(const ModelParams& p, double a11, double a12, double a22) {
    return residual_pair(closure_coeffs(p, a12), a11, a22);
}

ClosureSolution solve_closure(const ModelParams& p, double a12, std::pair<double, double> seed) {
    if (!std::isfinite(a12)) throw ClosureNoConvergence("a12 is not finite");
    if (a12 == 0.0) return {0.0, 0.0, 0};
    const ClosureCoeffs c = closure_coeffs(p, a12);
    const double tol = closure_tol(c);
    ClosureAttempt a = closure_from(c, seed.first, seed.second, tol);
    if (a.ok) return {a.a11, a.a22, a.iters};

    // continuation from the zero-stress state along a12
    bool converged_somewhere = false;
    for (int steps : {8, 64}) {
        double x11 = 0.0, x22 = 0.0;
        int total = 0;
        bool ok = true;
        for (int s = 1; s <= steps && ok; ++s) {
            const ClosureCoeffs cs = closure_coeffs(p, a12 * s / steps);
            const int it = closure_newton(cs, x11, x22, closure_tol(cs));
            if (it < 0) {
                ok = false;
                break;
            }
            converged_somewhere = true;
            total += it;
            ok = on_branch(cs, x11, x22);
        }
        if (ok) return {x11, x22, total};
    }
    if (converged_somewhere) {
        throw ClosureBranchLoss("no root on the vanishing branch at a12 = " + std::to_string(a12));
    }
    throw ClosureNoConvergence("closure Newton failed at a12 = " + std::to_string(a12));
}

double velocity_gradient(const ModelParams& p, double a11, double a12, double a22, double Z) {
    const double A2 = 1.0 / p.W + a22;
    if (!(A2 > 0.0)) throw DegenerateProfile("W^-1 + a22 = " + std::to_string(A2) + " is not positive");
    const double Kt = 1.0 / p.W + (p.k_phen + 2.0 * p.beta) / 3.0 * (a11 + a22);
    return Kt * model::eval_chi0(p.E_A, Z) * a12 / A2;
}

// ---------------------------------------------------------------------------

BaseState::BaseState(Grid g, ModelParams pr) : grid(std::move(g)), params(pr) {
    const auto n = static_cast<std::size_t>(grid.size());
    for (auto* v : {&u, &a11, &a12, &a22, &Z, &L, &P, &u_p, &Z_p, &L_p, &a11_p, &a12_p, &a22_p}) v->assign(n, 0.0);
}

void BaseState::refresh() {
    const int n = grid.size();
    auto to_vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
    a11_p = to_vec(grid.differentiate(a11));
    a12_p = to_vec(grid.differentiate(a12));
    a22_p = to_vec(grid.differentiate(a22));
    packed_.resize(n, n_fields);
    for (int j = 0; j < n; ++j) {
        const auto k = static_cast<std::size_t>(j);
        packed_.row(j) << u[k], u_p[k], a11[k], a12[k], a22[k], a11_p[k], a12_p[k], a22_p[k], Z[k], Z_p[k], L[k],
            L_p[k], P[k], 0.0;
    }
}

namespace {

PointState unpack(double y, const double* v) {
    PointState s;
    s.y = y;
    s.u = v[f_u];
    s.u_p = v[f_up];
    s.a11 = v[f_a11];
    s.a12 = v[f_a12];
    s.a22 = v[f_a22];
    s.a11_p = v[f_a11p];
    s.a12_p = v[f_a12p];
    s.a22_p = v[f_a22p];
    s.Z = v[f_Z];
    s.Z_p = v[f_Zp];
    s.L = v[f_L];
    s.L_p = v[f_Lp];
    s.P = v[f_P];
    return s;
}

}  // namespace

PointState BaseState::at(double y) const {
    if (packed_.rows() != grid.size()) throw InvalidArgument("BaseState::refresh() was not called");
    thread_local Eigen::VectorXd row;
    row.resize(grid.size());
    grid.interpolation_row(y, std::span<double>(row.data(), static_cast<std::size_t>(row.size())));
    const Eigen::Matrix<double, n_fields, 1> v = packed_.transpose() * row;
    return unpack(y, v.data());
}

PointState BaseState::node(int j) const {
    if (packed_.rows() != grid.size()) throw InvalidArgument("BaseState::refresh() was not called");
    const Eigen::Matrix<double, n_fields, 1> v = packed_.row(j).transpose();
    return unpack(grid.node(j), v.data());
}

// ---------------------------------------------------------------------------

namespace {

using Unknowns = std::array<double, 3>;

// State layout: u, Z, Z', L, L', G with G' = Z - 1.
class Shooter {
public:
    Shooter(const ModelParams& p, const IntegratorConfig& cfg) : p_(p), cfg_(cfg) {}

    double first_integral_a12(const Unknowns& s, double y, double Z, double L) const {
        return (s[2] - p_.D_hat() * y - (1.0 + p_.lambda_hat) * p_.sigma_m * p_.Re * L) / Z;
    }

    Eigen::VectorXd initial(const Unknowns& s) const {
        Eigen::VectorXd y0(6);
        y0 << 0.0, 1.0 + p_.theta_bar, s[0], -p_.J_minus, s[1], 0.0;
        return y0;
    }

    // Integrates to y = 1/2, calling record(t, y) at each stop (and at the start).
    template <class Record>
    Eigen::VectorXd run(const Unknowns& s, std::span<const double> stops, Record&& record) const {
        std::pair<double, double> cache{0.0, 0.0};
        auto rhs = [&](double y, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
            const double Z = x[1], L = x[3];
            if (!(Z > 0.0)) throw NegativeTemperature("Z = " + std::to_string(Z) + " at y = " + std::to_string(y));
            const double a12 = first_integral_a12(s, y, Z, L);
            const ClosureSolution cl = solve_closure(p_, a12, cache);
            cache = {cl.a11, cl.a22};
            const double up = velocity_gradient(p_, cl.a11, a12, cl.a22, Z);
            dx[0] = up;
            dx[1] = x[2];
            dx[2] = -(p_.A_r * Z * a12 + p_.A_m * p_.sigma_m * (1.0 + p_.lambda_hat) * L) * up;
            dx[3] = x[4];
            dx[4] = -(1.0 + p_.lambda_hat) * up / p_.b_m;
            dx[5] = Z - 1.0;
        };
        Eigen::VectorXd x = initial(s);
        record(Grid::lower, x);
        numerics::dormand_prince(rhs, Grid::lower, Grid::upper, x, cfg_, stops,
                                 [&](double t, Eigen::VectorXd& state, const Eigen::VectorXd&) {
                                     record(t, state);
                                     return false;
                                 });
        return x;
    }

    Eigen::Vector3d mismatch(const Unknowns& s) const {
        const Eigen::VectorXd x = run(s, {}, [](double, const Eigen::VectorXd&) {});
        return {x[0], x[1] - 1.0, x[3] + p_.J_plus};
    }

private:
    const ModelParams& p_;
    const IntegratorConfig& cfg_;
};

Unknowns linear_seed(const ModelParams& p) {
    const double C0 = -(1.0 + p.lambda_hat) * p.sigma_m * p.Re * p.J_minus - 0.5 * p.D_hat();
    return {-p.theta_bar, p.J_minus - p.J_plus, C0};
}

struct SolveOutcome {
    bool ok = false;
    Unknowns s{};
    double residual = std::numeric_limits<double>::infinity();
    int iterations = 0;
    std::string failure;
};

SolveOutcome newton_shoot(const ModelParams& p, const IntegratorConfig& cfg, const Unknowns& seed, double tol,
                          int max_iter) {
    const Shooter shooter(p, cfg);
    std::string failure;
    auto residual = [&](const Eigen::VectorXcd& z) -> Eigen::VectorXcd {
        const Unknowns s{z[0].real(), z[1].real(), z[2].real()};
        try {
            return shooter.mismatch(s).cast<std::complex<double>>();
        } catch (const Error& e) {
            failure = e.what();
            return Eigen::VectorXcd::Constant(3, std::numeric_limits<double>::quiet_NaN());
        }
    };
    Eigen::VectorXcd z(3);
    z << seed[0], seed[1], seed[2];
    SolveOutcome out;
    numerics::NewtonResult r;
    try {
        r = numerics::newton_solve(residual, z, tol, max_iter);
    } catch (const numerics::NoConvergence& e) {
        r = e.best();
    } catch (const Error&) {
        out.failure = failure;
        return out;
    }
    out.failure = failure;
    out.s = {r.x[0].real(), r.x[1].real(), r.x[2].real()};
    out.residual = r.residual_norm;
    out.iterations = r.iterations;
    // a stalled line search at the integration noise floor still meets the contract
    out.ok = r.residual_norm <= std::max(tol, 1e-9);
    return out;
}

ModelParams blend(const ModelParams& target, double t) {
    const ModelParams rest = ModelParams::rest_state();
    ModelParams q = target;
    q.A_hat = rest.A_hat + t * (target.A_hat - rest.A_hat);
    q.theta_bar = rest.theta_bar + t * (target.theta_bar - rest.theta_bar);
    q.J_plus = rest.J_plus + t * (target.J_plus - rest.J_plus);
    q.J_minus = rest.J_minus + t * (target.J_minus - rest.J_minus);
    return q;
}

// Walks a parameter path t in [0, 1] with adaptive step halving.
template <class ParamsAt>
SolveOutcome continuation(ParamsAt&& params_at, const IntegratorConfig& cfg, double step, double tol, int max_iter,
                          int& stages) {
    SolveOutcome cur = newton_shoot(params_at(0.0), cfg, linear_seed(params_at(0.0)), tol, max_iter);
    if (!cur.ok) return cur;
    double t = 0.0, h = step;
    while (t < 1.0) {
        const double t_next = std::min(1.0, t + h);
        SolveOutcome nxt = newton_shoot(params_at(t_next), cfg, cur.s, tol, max_iter);
        ++stages;
        if (nxt.ok) {
            t = t_next;
            cur = nxt;
        } else {
            h *= 0.5;
            if (h < 1e-3) {
                nxt.ok = false;
                return nxt;
            }
        }
    }
    return cur;
}

}  // namespace

BaseState solve_base_state(const ModelParams& params, const Grid& grid, const BaseStateOptions& opts) {
    params.validate();
    opts.cfg.validate();
    if (grid.kind() != numerics::GridKind::chebyshev_gauss_lobatto) {
        throw InvalidArgument("base state needs a Chebyshev grid");
    }

    ShootingDiagnostics diag;
    SolveOutcome sol = newton_shoot(params, opts.cfg, opts.seed.value_or(linear_seed(params)), opts.tol, opts.max_iter);
    if (!sol.ok) {
        SolveOutcome h = continuation(
            [&](double t) {
                ModelParams q = params;
                q.A_hat = t * params.A_hat;
                return q;
            },
            opts.cfg, opts.homotopy_step, opts.tol, opts.max_iter, diag.homotopy_stages);
        if (!h.ok) h = continuation([&](double t) { return blend(params, t); }, opts.cfg, opts.homotopy_step,
                                    opts.tol, opts.max_iter, diag.homotopy_stages);
        if (h.residual < sol.residual || h.ok) sol = h;
    }
    diag.unknowns = sol.s;
    diag.residual = sol.residual;
    diag.newton_iterations = sol.iterations;
    if (!sol.ok) {
        std::string msg = "far-wall mismatch " + std::to_string(sol.residual);
        if (!std::isfinite(sol.residual) && !sol.failure.empty()) msg += " (" + sol.failure + ")";
        throw ShootingNoConvergence(msg, diag);
    }

    // final pass recording the state at every node
    const int n = grid.size();
    const auto nodes = grid.nodes();
    std::vector<Eigen::VectorXd> states(static_cast<std::size_t>(n));
    int next = 0;
    const Shooter shooter(params, opts.cfg);
    const Eigen::VectorXd end = shooter.run(sol.s, nodes, [&](double t, const Eigen::VectorXd& x) {
        while (next < n && std::abs(t - nodes[static_cast<std::size_t>(next)]) <= 1e-13) {
            states[static_cast<std::size_t>(next++)] = x;
        }
    });
    if (next != n) throw InvalidArgument("integrator missed grid nodes");
    diag.residual = std::max({std::abs(end[0]), std::abs(end[1] - 1.0), std::abs(end[3] + params.J_plus)});

    BaseState st(grid, params);
    st.C0 = sol.s[2];
    st.diagnostics = diag;
    std::pair<double, double> cache{0.0, 0.0};
    std::vector<double> G(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const auto k = static_cast<std::size_t>(j);
        const Eigen::VectorXd& x = states[k];
        if (!(x[1] > 0.0)) throw NegativeTemperature("Z <= 0 at node " + std::to_string(j));
        const double y = nodes[k];
        st.u[k] = x[0];
        st.Z[k] = x[1];
        st.Z_p[k] = x[2];
        st.L[k] = x[3];
        st.L_p[k] = x[4];
        G[k] = x[5];
        st.a12[k] = shooter.first_integral_a12(sol.s, y, x[1], x[3]);
        const ClosureSolution cl = solve_closure(params, st.a12[k], cache);
        cache = {cl.a11, cl.a22};
        st.a11[k] = cl.a11;
        st.a22[k] = cl.a22;
        st.u_p[k] = velocity_gradient(params, cl.a11, st.a12[k], cl.a22, x[1]);
    }
    for (int j = 0; j < n; ++j) {
        const auto k = static_cast<std::size_t>(j);
        st.P[k] = st.Z[k] * st.a22[k] / params.Re - 0.5 * params.sigma_m * st.L[k] * st.L[k] + params.Gr * G[k];
    }
    const double P0 = grid.interpolate(st.P, 0.0);
    for (double& v : st.P) v -= P0;
    st.refresh();
    return st;
}

BaseState solve_base_state(const ModelParams& params, const Grid& grid, const IntegratorConfig& cfg) {
    BaseStateOptions opts;
    opts.cfg = cfg;
    return solve_base_state(params, grid, opts);
}

// ---------------------------------------------------------------------------

double BaseResidual::max() const { return *std::max_element(relation.begin(), relation.end()); }

BaseResidual base_residual_breakdown(const BaseState& s) {
    const ModelParams& p = s.params;
    const Grid& g = s.grid;
    const int n = g.size();
    const auto N = static_cast<std::size_t>(n);
    BaseResidual r;
    auto track = [&r](int i, double v) { r.relation[static_cast<std::size_t>(i)] = std::max(r.relation[static_cast<std::size_t>(i)], std::abs(v)); };

    std::vector<double> flux(N), press(N), up_formula(N);
    for (std::size_t k = 0; k < N; ++k) {
        flux[k] = s.Z[k] * s.a12[k] + (1.0 + p.lambda_hat) * p.sigma_m * p.Re * s.L[k];
        press[k] = s.P[k] - s.Z[k] * s.a22[k] / p.Re + 0.5 * p.sigma_m * s.L[k] * s.L[k];
        up_formula[k] = velocity_gradient(p, s.a11[k], s.a12[k], s.a22[k], s.Z[k]);
    }
    const Eigen::VectorXd dflux = g.differentiate(flux);
    const Eigen::VectorXd dpress = g.differentiate(press);
    const Eigen::VectorXd du = g.differentiate(s.u);
    const Eigen::VectorXd dZ = g.differentiate(s.Z);
    const Eigen::VectorXd dZp = g.differentiate(s.Z_p);
    const Eigen::VectorXd dL = g.differentiate(s.L);
    const Eigen::VectorXd dLp = g.differentiate(s.L_p);

    for (int j = 0; j < n; ++j) {
        const auto k = static_cast<std::size_t>(j);
        track(0, dflux[j] + p.D_hat());
        track(0, flux[k] + p.D_hat() * g.node(j) - s.C0);
        track(1, dpress[j] - p.Gr * (s.Z[k] - 1.0));
        track(2, du[j] - up_formula[k]);
        track(2, s.u_p[k] - up_formula[k]);
        const auto [c22, c11] = closure_residual(p, s.a11[k], s.a12[k], s.a22[k]);
        track(3, c22);
        track(4, c11);
        track(5, dZ[j] - s.Z_p[k]);
        track(5, dZp[j] + (p.A_r * s.Z[k] * s.a12[k] + p.A_m * p.sigma_m * (1.0 + p.lambda_hat) * s.L[k]) * up_formula[k]);
        track(6, dL[j] - s.L_p[k]);
        track(6, p.b_m * dLp[j] + (1.0 + p.lambda_hat) * up_formula[k]);
    }
    track(1, g.interpolate(s.P, 0.0));
    track(7, s.u.front());
    track(7, s.u.back());
    track(7, s.Z.back() - 1.0);
    track(7, s.Z.front() - 1.0 - p.theta_bar);
    track(7, s.L.front() + p.J_minus);
    track(7, s.L.back() + p.J_plus);
    return r;
}

double base_residual(const BaseState& s) { return base_residual_breakdown(s).max(); }

}  // namespace polystab::base
