#include "polystab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace polystab::spec {

namespace {

constexpr int n_basis = 5;
constexpr std::array<int, n_basis> start_components{lin::c_a12, lin::c_Omega, lin::c_Zp, lin::c_Lp, lin::c_M};
using Basis = Eigen::Matrix<cd, lin::dim, n_basis>;
using Small = Eigen::Matrix<cd, n_basis, n_basis>;

double wrap(double d) {
    constexpr double pi = std::numbers::pi;
    d = std::fmod(d, 2.0 * pi);
    if (d > pi) d -= 2.0 * pi;
    if (d <= -pi) d += 2.0 * pi;
    return d;
}

// log-ratio of two determinant values with the phase difference wrapped
cd log_ratio(cd a, cd b) { return {a.real() - b.real(), wrap(a.imag() - b.imag())}; }

Small wall_values(const Basis& Y) {
    Small M;
    for (int i = 0; i < n_basis; ++i) M.row(i) = Y.row(lin::boundary_components[static_cast<std::size_t>(i)]);
    return M;
}

}  // namespace

DispersionEvaluation dispersion(const BaseState& base, cd lambda, double omega, const IntegratorConfig& cfg,
                                Variant variant) {
    cfg.validate();
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) throw InvalidArgument("lambda not finite");
    DispersionEvaluation out;
    out.lambda = lambda;
    out.omega = omega;

    Eigen::VectorXcd state = Eigen::VectorXcd::Zero(lin::dim * n_basis);
    Eigen::Map<Basis> Y0(state.data());
    for (int j = 0; j < n_basis; ++j) Y0(start_components[static_cast<std::size_t>(j)], j) = 1.0;

    cd log_scale = 0.0;
    auto rhs = [&](double y, const Eigen::VectorXcd& x, Eigen::VectorXcd& dx) {
        const lin::Mat10c A = lin::coeff_matrix_at(base.at(y), base.params, lambda, omega, variant);
        Eigen::Map<const Basis> Y(x.data());
        Eigen::Map<Basis> dY(dx.data());
        dY.noalias() = A * Y;
    };
    auto renormalize = [&](Eigen::VectorXcd& x, bool force) {
        Eigen::Map<Basis> Y(x.data());
        Eigen::HouseholderQR<Basis> qr(Y);
        const Basis& R = qr.matrixQR();
        double rmax = 0.0, rmin = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n_basis; ++j) {
            const double a = std::abs(R(j, j));
            rmax = std::max(rmax, a);
            rmin = std::min(rmin, a);
        }
        if (!(rmin > 0.0) || !std::isfinite(rmax)) {
            throw StiffnessOverflow("solution basis collapsed at lambda = (" + std::to_string(lambda.real()) + ", " +
                                    std::to_string(lambda.imag()) + ")");
        }
        if (!force && rmax <= cfg.renorm_threshold * rmin && rmax < 1e8 && rmin > 1e-8) return false;
        for (int j = 0; j < n_basis; ++j) log_scale += std::log(R(j, j));
        const Basis Q = qr.householderQ() * Basis::Identity();
        Y = Q;
        ++out.renorm_count;
        return true;
    };

    const numerics::StepStats stats = numerics::dormand_prince(
        rhs, numerics::Grid::lower, numerics::Grid::upper, state, cfg, std::span<const double>{},
        [&](double, Eigen::VectorXcd& x, const Eigen::VectorXcd&) { return renormalize(x, false); });
    out.rhs_evals = stats.rhs_evals;
    renormalize(state, true);
    --out.renorm_count;  // the closing orthonormalization is bookkeeping only

    Eigen::Map<const Basis> Y(state.data());
    const Small M = wall_values(Y);
    const cd det = M.determinant();
    double hadamard = 1.0;
    for (int i = 0; i < n_basis; ++i) hadamard *= M.row(i).norm();
    out.residual = hadamard > 0.0 ? std::abs(det) / hadamard : 0.0;
    if (det == 0.0) {
        out.log_det = {-std::numeric_limits<double>::infinity(), 0.0};
    } else {
        out.log_det = std::log(det) + log_scale;
    }
    return out;
}

Eigenvalue refine_root(const BaseState& base, double omega, cd seed, const SpectrumOptions& opts, int* evals) {
    Eigenvalue ev;
    ev.seed = seed;
    cd lam = seed;
    int count = 0;
    auto disp = [&](cd z) {
        ++count;
        return dispersion(base, z, omega, opts.cfg, opts.variant);
    };
    for (int it = 0; it < opts.max_newton; ++it) {
        const DispersionEvaluation e0 = disp(lam);
        if (e0.residual == 0.0) {
            ev.lambda = lam;
            ev.residual = 0.0;
            ev.newton_iters = it;
            if (evals) *evals += count;
            return ev;
        }
        const double h = 1e-6 * (1.0 + std::abs(lam));
        const cd dp = log_ratio(disp(lam + h).log_det, e0.log_det);
        const cd dm = log_ratio(disp(lam - h).log_det, e0.log_det);
        const cd dlog = (std::exp(dp) - std::exp(dm)) / (2.0 * h);
        if (dlog == 0.0 || !std::isfinite(dlog.real()) || !std::isfinite(dlog.imag())) {
            if (evals) *evals += count;
            throw SingularJacobian("flat boundary determinant near lambda = (" + std::to_string(lam.real()) + ", " +
                                   std::to_string(lam.imag()) + ")");
        }
        cd delta = -1.0 / dlog;
        if (std::abs(delta) > opts.max_step) delta *= opts.max_step / std::abs(delta);
        lam += delta;
        if (std::abs(delta) <= 1e-10 * (1.0 + std::abs(lam))) {
            const DispersionEvaluation fin = disp(lam);
            ev.lambda = lam;
            ev.residual = fin.residual;
            ev.newton_iters = it + 1;
            if (evals) *evals += count;
            return ev;
        }
    }
    if (evals) *evals += count;
    throw ToleranceNotMet("Newton did not converge from seed (" + std::to_string(seed.real()) + ", " +
                          std::to_string(seed.imag()) + ")");
}

namespace {

class Search {
public:
    Search(const BaseState& base, double omega, const SpectrumOptions& opts) : base_(base), omega_(omega), opts_(opts) {}

    int winding(const Rect& r) {
        auto log_f = [this](cd z) {
            ++evals;
            return dispersion(base_, z, omega_, opts_.cfg, opts_.variant).log_det;
        };
        const double perimeter = 2.0 * (r.width() + r.height());
        const int n = std::max(opts_.contour_samples, static_cast<int>(std::ceil(perimeter / opts_.max_contour_step)));
        return numerics::winding_count_log(log_f, r, n).winding;
    }

    // Winding on a rectangle nudged off any root lying on its edge.
    int winding_robust(Rect r) {
        for (int attempt = 0; attempt < 4; ++attempt) {
            try {
                return winding(r);
            } catch (const ZeroOnContour&) {
                const double e = 1e-3 * (1.0 + attempt) * std::max(r.width(), r.height());
                r = {r.re_lo - e, r.re_hi + 0.7 * e, r.im_lo - 0.3 * e, r.im_hi + e};
            }
        }
        return winding(r);
    }

    bool add(Eigenvalue ev) {
        if (!(ev.residual <= 1e-8)) return false;
        for (auto& known : roots) {
            if (std::abs(known.lambda - ev.lambda) <= 1e-6 * (1.0 + std::abs(ev.lambda))) {
                if (ev.residual < known.residual) known = {ev.lambda, ev.residual, ev.newton_iters, known.seed, false};
                return false;
            }
        }
        roots.push_back(ev);
        return true;
    }

    bool try_seed(cd seed) {
        try {
            return add(refine_root(base_, omega_, seed, opts_, &evals));
        } catch (const Error&) {
            return false;
        }
    }

    void certify() {
        for (std::size_t i = 0; i < roots.size(); ++i) {
            if (roots[i].certified) continue;
            const cd z = roots[i].lambda;
            double hw = std::min(std::max(0.1, 0.05 * std::abs(z)), opts_.max_box);
            for (std::size_t j = 0; j < roots.size(); ++j) {
                if (j != i) hw = std::min(hw, 0.45 * std::abs(roots[j].lambda - z));
            }
            try {
                roots[i].certified = winding(Rect::centered(z, hw)) == 1;
            } catch (const Error&) {
                roots[i].certified = false;
            }
        }
    }

    int count_inside(const Rect& r) const {
        return static_cast<int>(std::count_if(roots.begin(), roots.end(), [&](const Eigenvalue& e) { return r.contains(e.lambda); }));
    }

    // Splits r until every piece holds as many known roots as zeros.
    void hunt(const Rect& r, int w, int depth) {
        if (w <= 0 || count_inside(r) >= w) return;
        if (w == 1 && count_inside(r) == 0) {
            if (try_seed(r.center()) && count_inside(r) >= 1) return;
        }
        if (depth >= opts_.max_subdivision_depth) return;
        const double fr = 0.5 + 0.0137, fi = 0.5 - 0.0113;
        const double xm = r.re_lo + fr * r.width(), ym = r.im_lo + fi * r.height();
        const Rect parts[4] = {{r.re_lo, xm, r.im_lo, ym}, {xm, r.re_hi, r.im_lo, ym}, {r.re_lo, xm, ym, r.im_hi}, {xm, r.re_hi, ym, r.im_hi}};
        for (const Rect& q : parts) {
            int wq = 0;
            try {
                wq = winding(q);
            } catch (const Error&) {
                continue;
            }
            hunt(q, wq, depth + 1);
        }
    }

    std::vector<Eigenvalue> roots;
    int evals = 0;

private:
    const BaseState& base_;
    double omega_;
    const SpectrumOptions& opts_;
};

}  // namespace

namespace {

SpectrumResult run_search(Search& search, const BaseState& base, double omega, const Rect& region,
                          const SpectrumOptions& opts) {
    SpectrumResult res;
    res.omega = omega;
    res.params = base.params;
    res.search_region = region;
    if (opts.sweep_region && region.width() > 0.0 && region.height() > 0.0) {
        res.region_winding = search.winding_robust(region);
        search.hunt(region, res.region_winding, 0);
    }
    search.certify();
    std::sort(search.roots.begin(), search.roots.end(),
              [](const Eigenvalue& a, const Eigenvalue& b) { return a.lambda.imag() < b.lambda.imag(); });
    res.eigenvalues = search.roots;
    res.found_in_region = search.count_inside(region);
    res.missed_count_estimate = opts.sweep_region ? std::max(0, res.region_winding - res.found_in_region) : 0;
    res.dispersion_evals = search.evals;
    if (opts.strict && opts.sweep_region && res.region_winding != res.found_in_region) {
        throw UncertifiedRoots("region winding " + std::to_string(res.region_winding) + " but " +
                               std::to_string(res.found_in_region) + " roots found");
    }
    return res;
}

}  // namespace

SpectrumResult find_eigenvalues(const BaseState& base, double omega, const Rect& region, const std::vector<cd>& seeds,
                                const SpectrumOptions& opts) {
    opts.cfg.validate();
    Search search(base, omega, opts);
    for (const cd& s : seeds) search.try_seed(s);
    return run_search(search, base, omega, region, opts);
}

SpectrumResult sweep_region(const BaseState& base, double omega, const Rect& region, const std::vector<Eigenvalue>& known,
                            const SpectrumOptions& opts) {
    opts.cfg.validate();
    Search search(base, omega, opts);
    for (const Eigenvalue& e : known) search.add(e);
    SpectrumOptions o = opts;
    o.sweep_region = true;
    return run_search(search, base, omega, region, o);
}

std::vector<Rect> continuous_spectrum_scan(const BaseState& base, double omega) {
    std::vector<Rect> boxes;
    for (int branch = 0; branch < 2; ++branch) {
        Rect r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
               std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
        for (int j = 0; j < base.size(); ++j) {
            const cd z = lin::singular_lambdas(base.node(j), base.params, omega)[static_cast<std::size_t>(branch)];
            r.re_lo = std::min(r.re_lo, z.real());
            r.re_hi = std::max(r.re_hi, z.real());
            r.im_lo = std::min(r.im_lo, z.imag());
            r.im_hi = std::max(r.im_hi, z.imag());
        }
        constexpr double pad = 1e-3;
        boxes.push_back({r.re_lo - pad, r.re_hi + pad, r.im_lo - pad, r.im_hi + pad});
    }
    return boxes;
}

}  // namespace polystab::spec
