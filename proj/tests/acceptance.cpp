// Acceptance run: one PASS/FAIL line per criterion.

#include "polystab/asymptotics.hpp"
#include "polystab/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <string>

using namespace polystab;
using cd = std::complex<double>;
using model::ModelParams;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

int failures = 0;

void report(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double t = seconds_since(t0);
    const bool in_time = limit_s <= 0.0 || t < limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("criterion %d: %s  %s  [%s; %.2f s%s]\n", id, pass ? "PASS" : "FAIL", title.c_str(), o.detail.c_str(),
                t, in_time ? "" : ", over time budget");
    std::fflush(stdout);
}

const numerics::Grid& grid129() {
    static const numerics::Grid g = numerics::Grid::chebyshev(129);
    return g;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

struct SpectrumRun {
    asym::VerificationTable table;
    spec::SpectrumResult band;
    double seconds = 0.0;
};

SpectrumRun run_spectrum(const base::BaseState& b) {
    const auto t0 = std::chrono::steady_clock::now();
    SpectrumRun r;
    r.table = asym::verify_spectrum(b, 1.0, 10, 30);
    std::vector<spec::Eigenvalue> known;
    for (const auto& e : r.table.roots) {
        if (e.lambda.imag() < asym::asymptotic_lambda(b, 1.0, 21).imag()) known.push_back(e);
    }
    spec::SpectrumOptions o;
    o.max_box = 0.45 * pi / r.table.mu;
    r.band = spec::sweep_region(b, 1.0, asym::eigenvalue_band(b, 1.0, 10, 20), known, o);
    r.seconds = seconds_since(t0);
    return r;
}

}  // namespace

int main() {
    std::printf("acceptance: 8 criteria\n");

    std::optional<base::BaseState> rest, main_case;

    report(1, "rest-state closed forms", 1.0, [&] {
        rest = base::solve_base_state(ModelParams::rest_state(), grid129());
        double worst = 0.0;
        for (std::size_t k = 0; k < rest->u.size(); ++k) {
            worst = std::max({worst, std::abs(rest->u[k]), std::abs(rest->Z[k] - 1.0), std::abs(rest->L[k] + 1.0),
                              std::abs(rest->a11[k]), std::abs(rest->a12[k]), std::abs(rest->a22[k])});
        }
        const auto rep = asym::stability_criterion(*rest, 1.0);
        double lam = 0.0;
        for (int k = 1; k <= 30; ++k) lam = std::max(lam, std::abs(asym::asymptotic_lambda(*rest, 1.0, k) - cd(-2.5, k * pi)));
        const double mu_err = std::abs(rep.mu - 1.0), s_err = std::abs(rep.criterion_S - 5.0);
        return Outcome{worst < 1e-10 && mu_err < 1e-10 && s_err < 1e-10 && lam < 1e-10,
                       "profile err " + num(worst) + ", mu err " + num(mu_err) + ", S err " + num(s_err) +
                           ", lambda_k err " + num(lam)};
    });

    report(2, "main-case base-state residual", 5.0, [&] {
        main_case = base::solve_base_state(ModelParams{}, grid129());
        const auto& s = *main_case;
        const auto& p = s.params;
        const double res = base::base_residual(s);
        double fi = 0.0;
        for (int j = 0; j < s.size(); ++j) {
            const auto k = static_cast<std::size_t>(j);
            fi = std::max(fi, std::abs(s.Z[k] * s.a12[k] + (1.0 + p.lambda_hat) * p.sigma_m * p.Re * s.L[k] +
                                       p.D_hat() * s.grid.node(j) - s.C0));
        }
        const double slip = std::max(std::abs(s.u.front()), std::abs(s.u.back()));
        return Outcome{res < 1e-8 && slip < 1e-8 && fi < 1e-8,
                       "residual " + num(res) + ", wall slip " + num(slip) + ", first integral " + num(fi)};
    });

    report(3, "cold lower wall slows the lower layer", 5.0, [&] {
        ModelParams p;
        p.theta_bar = -0.95;
        const auto s = base::solve_base_state(p, grid129());
        double bottom = 0.0;
        for (int j = 0; j < s.size(); ++j) {
            if (s.grid.node(j) <= -0.25) bottom = std::max(bottom, std::abs(s.u[static_cast<std::size_t>(j)]));
        }
        const double ratio = bottom / max_abs(s.u);
        return Outcome{ratio <= 0.2, "lower-layer ratio " + num(ratio)};
    });

    std::optional<SpectrumRun> run_rest, run_main;
    auto spectra = [&]() {
        if (!run_rest && rest) run_rest = run_spectrum(*rest);
        if (!run_main && main_case) run_main = run_spectrum(*main_case);
    };

    const auto t4 = std::chrono::steady_clock::now();
    report(4, "asymptotic seeds converge with O(1/k) remainder, k in [10, 30]", 0.0, [&] {
        if (!rest || !main_case) return Outcome{false, "base states unavailable"};
        spectra();
        std::string detail;
        bool ok = true;
        for (const auto* r : {&*run_rest, &*run_main}) {
            bool certified = true;
            double worst_res = 0.0;
            for (const auto& row : r->table.rows) {
                certified = certified && row.certified;
                worst_res = std::max(worst_res, row.residual);
            }
            const bool this_ok = r->table.rows.size() == 21 && certified && worst_res < 1e-8 &&
                                 r->table.spread_max_over_median < 3.0;
            ok = ok && this_ok;
            detail += std::string(r == &*run_rest ? "rest" : "main") + ": max/median " +
                      num(r->table.spread_max_over_median) + ", residual " + num(worst_res) +
                      (certified ? ", all certified" : ", uncertified roots") + "; ";
        }
        const double t = seconds_since(t4);
        ok = ok && t < 60.0;
        return Outcome{ok, detail + "criteria 4, 5, 7 share " + num(t) + " s of the 60 s budget"};
    });

    report(5, "imaginary spacing tends to pi/mu at k = 30", 0.0, [&] {
        if (!run_rest || !run_main) return Outcome{false, "spectrum run unavailable"};
        std::string detail;
        bool ok = true;
        for (const auto* r : {&*run_rest, &*run_main}) {
            const auto& rows = r->table.rows;
            const double spacing = rows.back().lambda_num.imag() - rows[rows.size() - 2].lambda_num.imag();
            const double rel = std::abs(spacing * r->table.mu / pi - 1.0);
            const double mean2 = 0.5 * (rows.back().lambda_num.imag() - rows[rows.size() - 3].lambda_num.imag());
            ok = ok && rel < 0.01 && rows.back().k == 30;
            detail += std::string(r == &*run_rest ? "rest" : "main") + " rel. err " + num(rel) +
                      " (two-step mean " + num(std::abs(mean2 * r->table.mu / pi - 1.0)) + "); ";
        }
        return Outcome{ok, detail};
    });

    report(6, "re_lambda_inf = -S/(2 mu) on the corpus", 1.0, [&] {
        std::vector<ModelParams> ps(5);
        ps[0] = ModelParams::rest_state();
        ps[2].A_hat = 3.0;
        ps[3].theta_bar = -0.25;
        ps[4].sigma_m = 0.0;
        ps[4].theta_bar = 0.0;
        ps[4].J_plus = 1.0;
        double worst = 0.0;
        bool signs = true;
        for (const auto& p : ps) {
            const auto s = base::solve_base_state(p, grid129());
            const auto r = asym::stability_criterion(s, 1.0);
            worst = std::max(worst, std::abs(r.re_lambda_inf + r.criterion_S / (2.0 * r.mu)));
            signs = signs && (r.necessary_condition_met == (r.re_lambda_inf < 0.0));
        }
        return Outcome{worst < 1e-12 && signs, "max deviation " + num(worst) + (signs ? ", signs agree" : ", sign mismatch")};
    });

    report(7, "winding count equals roots over the k in [10, 20] band", 0.0, [&] {
        if (!run_rest || !run_main) return Outcome{false, "spectrum run unavailable"};
        bool ok = true;
        std::string detail;
        for (const auto* r : {&*run_rest, &*run_main}) {
            const auto& b = r->band;
            ok = ok && b.region_winding == b.found_in_region && b.missed_count_estimate == 0 && b.region_winding == 11;
            detail += std::string(r == &*run_rest ? "rest" : "main") + " winding " + std::to_string(b.region_winding) +
                      ", found " + std::to_string(b.found_in_region) + "; ";
        }
        return Outcome{ok, detail};
    });

    report(8, "conjugation symmetry, grid and renormalization robustness", 120.0, [&] {
        if (!main_case || !run_main) return Outcome{false, "main-case spectrum unavailable"};
        const auto fine = base::solve_base_state(ModelParams{}, numerics::Grid::chebyshev(257));
        spec::SpectrumOptions renorm;
        renorm.cfg.renorm_threshold *= 2.0;
        double conj_err = 0.0, grid_err = 0.0, renorm_err = 0.0;
        for (const auto& row : run_main->table.rows) {
            if (row.k % 5 != 0) continue;
            const cd lam = row.lambda_num;
            conj_err = std::max(conj_err, std::abs(spec::refine_root(*main_case, -1.0, std::conj(lam), {}).lambda -
                                                   std::conj(lam)));
            grid_err = std::max(grid_err, std::abs(spec::refine_root(fine, 1.0, lam, {}).lambda - lam));
            renorm_err = std::max(renorm_err, std::abs(spec::refine_root(*main_case, 1.0, lam, renorm).lambda - lam));
        }
        return Outcome{conj_err < 1e-7 && grid_err < 1e-6 && renorm_err < 1e-6,
                       "conjugation " + num(conj_err) + ", grid doubling " + num(grid_err) + ", renorm doubling " +
                           num(renorm_err)};
    });

    std::printf("acceptance: %d of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
