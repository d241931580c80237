#include "polystab/asymptotics.hpp"

#include "polystab/linearized.hpp"
#include "polystab/numerics/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace polystab::asym {

namespace {

constexpr double pi = std::numbers::pi;
constexpr cd I1{0.0, 1.0};

struct Pointwise {
    double sqrt_zeta;   // sqrt(Z alpha2)
    double ratio;       // sqrt(alpha2 / Z)
    double al2, al12;
    double Q;
    double magnetic;    // sigma_m (1 + lambda_hat)^2 / b_m
    model::RheoCoeffs r;
};

Pointwise pointwise(const base::PointState& s, const model::ModelParams& p) {
    Pointwise w;
    w.al2 = s.a22 / p.Re + p.kappa2();
    w.al12 = s.a12 / p.Re;
    const double zeta = s.Z * w.al2;
    if (!(zeta > 0.0)) throw DegenerateProfile("Z alpha2 <= 0 at y = " + std::to_string(s.y));
    w.sqrt_zeta = std::sqrt(zeta);
    w.ratio = std::sqrt(w.al2 / s.Z);
    const double lam1 = 1.0 + p.lambda_hat;
    w.Q = p.A_r * s.Z * s.a12 + p.A_m * p.sigma_m * s.L * lam1;
    w.magnetic = p.sigma_m * lam1 * lam1 / p.b_m;
    w.r = model::eval_rheo(p, s.a11, s.a12, s.a22, s.Z);
    return w;
}

// Real part of the bracket shared by the drift and the stability integral.
double s_integrand(const Pointwise& w) {
    return w.ratio * (w.r.R44 / w.al2 + 2.0 * w.al12 * w.r.R43 / (w.al2 * w.al2)) + w.al12 * w.Q / w.sqrt_zeta +
           w.magnetic / w.sqrt_zeta;
}

template <class F>
auto node_integral(const BaseState& base, F&& f) {
    const auto wts = base.grid.quadrature_weights();
    decltype(f(base.node(0))) acc{};
    for (int j = 0; j < base.size(); ++j) acc += wts[static_cast<std::size_t>(j)] * f(base.node(j));
    return acc;
}

}  // namespace

double mu(const BaseState& base) {
    return node_integral(base, [&](const base::PointState& s) { return 1.0 / pointwise(s, base.params).sqrt_zeta; });
}

cd drift(const BaseState& base, double omega) {
    return node_integral(base, [&](const base::PointState& s) {
        const Pointwise w = pointwise(s, base.params);
        const cd iwu = I1 * omega * s.u;
        return -0.5 * (s_integrand(w) + w.ratio * iwu / w.al2 + iwu / w.sqrt_zeta);
    });
}

cd drift_from_transform(const BaseState& base, double omega) {
    return node_integral(base, [&](const base::PointState& s) {
        const lin::Transform t = lin::transform_T(s, base.params, omega);
        return 0.5 * (t.c11 - t.c22);
    });
}

cd asymptotic_lambda(const BaseState& base, double omega, int k) {
    if (k < 1) throw InvalidArgument("mode index must be positive");
    return (drift(base, omega) + cd(0.0, k * pi)) / mu(base);
}

double criterion_S(const BaseState& base) {
    return node_integral(base, [&](const base::PointState& s) { return s_integrand(pointwise(s, base.params)); });
}

double criterion_S_expanded(const BaseState& base) {
    const model::ModelParams& p = base.params;
    const double c3 = (p.k_phen + 2.0 * p.beta) / 3.0;
    return node_integral(base, [&](const base::PointState& s) {
        const Pointwise w = pointwise(s, p);
        const double chi0 = model::eval_chi0(p.E_A, s.Z);
        const double visc = (1.0 / p.W + c3 * (s.a11 + s.a22)) / w.al2;
        const double shear = 2.0 * w.al12 / (w.al2 * w.al2) * s.a12 * c3;
        return w.ratio * chi0 * (visc + shear) + w.al12 * w.Q / w.sqrt_zeta + w.magnetic / w.sqrt_zeta;
    });
}

AsymptoticReport stability_criterion(const BaseState& base, double omega) {
    AsymptoticReport r;
    r.mu = mu(base);
    r.drift = drift(base, omega);
    r.criterion_S = criterion_S(base);
    r.re_lambda_inf = r.drift.real() / r.mu;
    r.im_spacing = pi / r.mu;
    r.necessary_condition_met = r.criterion_S > 0.0;
    return r;
}

VerificationTable verify_spectrum(const BaseState& base, double omega, int k_min, int k_max,
                                  const spec::SpectrumOptions& opts) {
    if (k_min < 1 || k_max < k_min) throw InvalidArgument("need 1 <= k_min <= k_max");
    const AsymptoticReport rep = stability_criterion(base, omega);
    std::vector<cd> seeds;
    for (int k = k_min; k <= k_max; ++k) seeds.push_back((rep.drift + cd(0.0, k * pi)) / rep.mu);

    spec::SpectrumOptions o = opts;
    o.sweep_region = false;
    o.max_box = std::min(o.max_box, 0.45 * rep.im_spacing);
    const spec::SpectrumResult sr = spec::find_eigenvalues(base, omega, {}, seeds, o);

    VerificationTable t;
    t.roots = sr.eigenvalues;
    t.mu = rep.mu;
    std::vector<int> owner(sr.eigenvalues.size(), -1);
    for (int k = k_min; k <= k_max; ++k) {
        VerificationRow row;
        row.k = k;
        row.lambda_asym = seeds[static_cast<std::size_t>(k - k_min)];
        double best = std::numeric_limits<double>::infinity();
        int idx = -1;
        for (std::size_t i = 0; i < sr.eigenvalues.size(); ++i) {
            const double d = std::abs(sr.eigenvalues[i].lambda - row.lambda_asym);
            if (d < best) {
                best = d;
                idx = static_cast<int>(i);
            }
        }
        if (idx >= 0 && best < 0.5 * rep.im_spacing) {
            auto& o_idx = owner[static_cast<std::size_t>(idx)];
            if (o_idx >= 0) {
                throw PairingAmbiguous("modes " + std::to_string(o_idx) + " and " + std::to_string(k) +
                                       " share one root");
            }
            o_idx = k;
            const spec::Eigenvalue& ev = sr.eigenvalues[static_cast<std::size_t>(idx)];
            row.lambda_num = ev.lambda;
            row.err = best;
            row.residual = ev.residual;
            row.certified = ev.certified;
        } else {
            row.lambda_num = {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
            row.err = std::numeric_limits<double>::infinity();
            row.residual = std::numeric_limits<double>::infinity();
        }
        row.err_times_k = row.err * k;
        t.rows.push_back(row);
    }

    std::vector<double> ek;
    bool all_certified = true;
    for (const auto& r : t.rows) {
        ek.push_back(r.err_times_k);
        all_certified = all_certified && r.certified;
    }
    std::vector<double> sorted = ek;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted.size() % 2 ? sorted[sorted.size() / 2]
                                            : 0.5 * (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]);
    t.spread_max_over_median = sorted.back() / median;
    t.spread_max_over_min = sorted.back() / sorted.front();
    const std::size_t mid = ek.size() / 2;
    double up = 0.0;
    for (std::size_t i = mid; i < ek.size(); ++i) up = std::max(up, ek[i]);
    t.upper_half_growth = up / ek[mid];
    t.ok = all_certified && std::isfinite(t.upper_half_growth) && t.upper_half_growth <= 2.0;
    return t;
}

numerics::Rect eigenvalue_band(const BaseState& base, double omega, int k_min, int k_max, double half_width) {
    const AsymptoticReport r = stability_criterion(base, omega);
    auto im_at = [&](double k) { return ((r.drift + cd(0.0, k * pi)) / r.mu).imag(); };
    return {r.re_lambda_inf - half_width, r.re_lambda_inf + half_width, im_at(k_min - 0.5), im_at(k_max + 0.5)};
}

AmplitudeFactors amplitude_factors(const BaseState& base, double omega) {
    AmplitudeFactors a;
    auto c = [&](double y, int which) {
        const lin::Transform t = lin::transform_T(base, y, omega);
        return which == 0 ? t.c11 : t.c22;
    };
    const auto nodes = base.grid.nodes();
    cd acc1 = 0.0, acc2 = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        if (j > 0) {
            acc1 += numerics::quad([&](double y) { return c(y, 0); }, nodes[j - 1], nodes[j], 1e-12);
            acc2 += numerics::quad([&](double y) { return c(y, 1); }, nodes[j - 1], nodes[j], 1e-12);
        }
        a.y.push_back(nodes[j]);
        a.p1.push_back(std::exp(acc1));
        a.p2.push_back(std::exp(acc2));
    }
    return a;
}

}  // namespace polystab::asym
