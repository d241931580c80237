#include "polystab/linearized.hpp"

#include <cmath>
#include <string>

namespace polystab::lin {

namespace {

constexpr cd I1{0.0, 1.0};

struct Local {
    const PointState& s;
    const ModelParams& p;
    model::RheoCoeffs r;
    double al1, al2, al11, al12, al22;   // alpha_1, alpha_2, alpha_11, alpha_12, alpha_22 (hatted)
    double al11_p, al12_p, al22_p;
    double R34, R45;                     // including the velocity-gradient terms
    double Q;                            // coupling of the temperature row to u'
    double lam1;                         // 1 + lambda_hat

    Local(const PointState& st, const ModelParams& pr)
        : s(st), p(pr), r(model::eval_rheo(pr, st.a11, st.a12, st.a22, st.Z)) {
        al11 = s.a11 / p.Re;
        al12 = s.a12 / p.Re;
        al22 = s.a22 / p.Re;
        al1 = al11 + p.kappa2();
        al2 = al22 + p.kappa2();
        al11_p = s.a11_p / p.Re;
        al12_p = s.a12_p / p.Re;
        al22_p = s.a22_p / p.Re;
        R34 = r.R34 - 2.0 * s.u_p;
        R45 = r.R45 - s.u_p;
        lam1 = 1.0 + p.lambda_hat;
        Q = p.A_r * s.Z * s.a12 + p.A_m * p.sigma_m * s.L * lam1;
        if (!(al2 > 0.0)) throw DegenerateProfile("alpha2 = " + std::to_string(al2) + " at y = " + std::to_string(s.y));
        if (!(s.Z > 0.0)) throw DegenerateProfile("Z = " + std::to_string(s.Z) + " at y = " + std::to_string(s.y));
    }
};

// Rows of Y' that contain alpha11 and alpha22 before elimination, with the
// factor multiplying each of them.
struct StressRows {
    std::array<int, 4> row{c_u, c_a12, c_Zp, c_Lp};
    std::array<cd, 4> g11, g22;
};

StressRows stress_rows(const Local& L, double omega) {
    const double bm = L.p.b_m;
    StressRows sr;
    sr.g11 = {L.r.R43 / L.al2, -I1 * omega, -L.Q * L.r.R43 / L.al2, -L.lam1 * L.r.R43 / (bm * L.al2)};
    sr.g22 = {L.R45 / L.al2, I1 * omega, -L.Q * L.R45 / L.al2, -L.lam1 * L.R45 / (bm * L.al2)};
    return sr;
}

StressBalance balance(const Local& L, cd lambda, double omega) {
    const cd iw = I1 * omega;
    const cd conv = lambda + iw * L.s.u;
    const double t = 2.0 * L.al12 / L.al2;
    StressBalance b;
    b.a = conv - t * L.r.R43 + L.r.R33;
    b.b = -(t * L.R45 - L.r.R35);
    b.c = L.r.R53;
    b.d = conv + L.r.R55;
    b.f1.c = {2.0 * L.al1 * iw, t * (L.al12_p - iw * L.al1) - L.al11_p, t * (conv + L.r.R44) - L.R34,
              t * L.r.r12 - L.r.r11};
    b.f2.c = {-2.0 * L.al2 * iw, 2.0 * L.al12 * iw - L.al22_p, -L.r.R54, 0.0};
    return b;
}

EliminationResult eliminate(const StressBalance& b, cd lambda) {
    EliminationResult e;
    e.det2x2 = b.a * b.d - b.b * b.c;
    if (std::abs(e.det2x2) < 1e-10 * (1.0 + std::norm(lambda))) {
        throw ContinuousSpectrumPoint("stress balance singular at lambda = (" + std::to_string(lambda.real()) + ", " +
                                      std::to_string(lambda.imag()) + ")");
    }
    for (int j = 0; j < 4; ++j) {
        const auto k = static_cast<std::size_t>(j);
        e.alpha11.c[k] = (b.d * b.f1.c[k] - b.b * b.f2.c[k]) / e.det2x2;
        e.alpha22.c[k] = (b.a * b.f2.c[k] - b.c * b.f1.c[k]) / e.det2x2;
    }
    return e;
}

Mat10c truncated(const Local& L, cd lambda, double omega) {
    const PointState& s = L.s;
    const ModelParams& p = L.p;
    const cd iw = I1 * omega;
    const cd conv = lambda + iw * s.u;
    const double bm = p.b_m, sig = p.sigma_m;
    const cd shear = (conv + L.r.R44 + 2.0 * L.al12 * L.r.R43 / L.al2) / L.al2;
    const cd dvel = (L.al12_p - iw * L.al1) / L.al2;

    Mat10c A = Mat10c::Zero();
    A(c_u, c_v) = dvel;
    A(c_u, c_a12) = shear;
    A(c_u, c_Z) = L.r.r12 / L.al2;

    A(c_v, c_u) = -iw;

    A(c_a12, c_u) = conv / s.Z;
    A(c_a12, c_v) = s.u_p / s.Z;
    A(c_a12, c_a12) = -(s.Z_p / s.Z + iw * 2.0 * L.al12 / L.al2);
    A(c_a12, c_Omega) = iw / s.Z;
    A(c_a12, c_Z) = -(iw * L.al11 + L.al12_p) / s.Z;
    A(c_a12, c_Zp) = -L.al12 / s.Z;
    A(c_a12, c_Lp) = -sig * L.lam1 / s.Z;
    A(c_a12, c_M) = (sig * L.lam1 * iw - sig * s.L_p) / s.Z;

    A(c_Omega, c_v) = -conv;
    A(c_Omega, c_a12) = iw * s.Z;
    A(c_Omega, c_Z) = L.al12 * iw + L.al22_p + p.Gr;
    A(c_Omega, c_Zp) = L.al22;
    A(c_Omega, c_L) = -sig * s.L_p;
    A(c_Omega, c_Lp) = -sig * s.L;
    A(c_Omega, c_M) = sig * s.L * iw;

    A(c_Z, c_Zp) = 1.0;

    A(c_Zp, c_Z) = p.Pr * conv + omega * omega - p.A_r * s.u_p * s.a12 - L.Q * L.r.r12 / L.al2;
    A(c_Zp, c_u) = -iw * (p.A_r * s.Z * (s.a11 - s.a22) + p.A_m * sig * (s.L * s.L - L.lam1 * L.lam1));
    A(c_Zp, c_v) = p.Pr * s.Z_p - L.Q * (iw + dvel);
    A(c_Zp, c_L) = -p.A_m * sig * L.lam1 * s.u_p;
    A(c_Zp, c_M) = -p.A_m * sig * s.u_p * s.L;
    A(c_Zp, c_a12) = -L.Q * shear;

    A(c_L, c_Lp) = 1.0;

    A(c_Lp, c_L) = conv / bm + omega * omega;
    A(c_Lp, c_u) = -iw * s.L / bm;
    A(c_Lp, c_v) = s.L_p / bm - L.lam1 / bm * dvel;
    A(c_Lp, c_a12) = -L.lam1 / bm * shear;
    A(c_Lp, c_Z) = -L.lam1 / bm * L.r.r12 / L.al2;
    A(c_Lp, c_M) = -s.u_p / bm;

    A(c_M, c_Mp) = 1.0;

    A(c_Mp, c_M) = conv / bm + omega * omega;
    A(c_Mp, c_u) = L.lam1 / bm * iw;
    A(c_Mp, c_v) = -iw * s.L / bm;
    return A;
}

}  // namespace

StressBalance stress_balance(const PointState& s, const ModelParams& p, cd lambda, double omega) {
    return balance(Local(s, p), lambda, omega);
}

EliminationResult eliminate_alpha(const PointState& s, const ModelParams& p, cd lambda, double omega) {
    return eliminate(stress_balance(s, p, lambda, omega), lambda);
}

EliminationResult eliminate_alpha(const BaseState& base, double y, cd lambda, double omega) {
    return eliminate_alpha(base.at(y), base.params, lambda, omega);
}

std::array<cd, 2> singular_lambdas(const PointState& s, const ModelParams& p, double omega) {
    // det = (lambda + pa)(lambda + pd) - bc
    const StressBalance b = stress_balance(s, p, 0.0, omega);
    const cd pa = b.a, pd = b.d, bc = b.b * b.c;
    const cd half_sum = 0.5 * (pa + pd);
    const cd root = std::sqrt(0.25 * (pa - pd) * (pa - pd) + bc);
    return {-half_sum - root, -half_sum + root};
}

Mat10c coeff_matrix_at(const PointState& s, const ModelParams& p, cd lambda, double omega, Variant variant) {
    const Local L(s, p);
    Mat10c A = truncated(L, lambda, omega);
    if (variant == Variant::truncated) return A;

    const EliminationResult e = eliminate(balance(L, lambda, omega), lambda);
    const StressRows sr = stress_rows(L, omega);
    constexpr std::array<int, 4> cols{c_u, c_v, c_a12, c_Z};
    const double lead = 2.0 * L.al12 / L.al2;
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t j = 0; j < 4; ++j) {
            cd a11 = e.alpha11.c[j];
            if (cols[j] == c_a12) a11 -= lead;
            A(sr.row[r], cols[j]) += sr.g11[r] * a11 + sr.g22[r] * e.alpha22.c[j];
        }
    }
    return A;
}

CoeffMatrix coeff_matrix(const BaseState& base, double y, cd lambda, double omega, Variant variant) {
    return {coeff_matrix_at(base.at(y), base.params, lambda, omega, variant), y, lambda, omega, variant};
}

Mat10d lambda_part(const PointState& s, const ModelParams& p) {
    const Local L(s, p);
    Mat10d D = Mat10d::Zero();
    D(c_u, c_a12) = 1.0 / L.al2;
    D(c_a12, c_u) = 1.0 / s.Z;
    D(c_Omega, c_v) = -1.0;
    D(c_Zp, c_a12) = -L.Q / L.al2;
    D(c_Zp, c_Z) = p.Pr;
    D(c_Lp, c_a12) = -L.lam1 / (p.b_m * L.al2);
    D(c_Lp, c_L) = 1.0 / p.b_m;
    D(c_Mp, c_M) = 1.0 / p.b_m;
    return D;
}

Eigen::Matrix<double, 5, dim> boundary_operator() {
    Eigen::Matrix<double, 5, dim> B = Eigen::Matrix<double, 5, dim>::Zero();
    for (int i = 0; i < 5; ++i) B(i, boundary_components[static_cast<std::size_t>(i)]) = 1.0;
    return B;
}

Transform transform_T(const PointState& s, const ModelParams& p, double omega) {
    const Local L(s, p);
    const double zeta = s.Z * L.al2;
    if (!(zeta > 0.0)) throw DegenerateProfile("Z alpha2 <= 0 at y = " + std::to_string(s.y));
    const double sq = std::sqrt(s.Z / L.al2);
    const double sq_p = 0.5 * sq * (s.Z_p / s.Z - L.al22_p / L.al2);
    const double Q_p = p.A_r * (s.Z_p * s.a12 + s.Z * s.a12_p) + p.A_m * p.sigma_m * s.L_p * L.lam1;
    const double m = L.lam1 / p.b_m;

    Transform t;
    Mat10d& T = t.T;
    T.setZero();
    Mat10d Tp = Mat10d::Zero();
    for (int k = 0; k < 2; ++k) {
        const double sgn = k == 0 ? 1.0 : -1.0;
        T(c_u, k) = -sgn * sq;
        T(c_a12, k) = 1.0;
        T(c_Zp, k) = sgn * L.Q * sq;
        T(c_Lp, k) = sgn * m * sq;
        Tp(c_u, k) = -sgn * sq_p;
        Tp(c_Zp, k) = sgn * (Q_p * sq + L.Q * sq_p);
        Tp(c_Lp, k) = sgn * m * sq_p;
    }
    T(c_Mp, 2) = 1.0;
    T(c_M, 3) = p.b_m;
    T(c_Omega, 4) = 1.0;
    T(c_v, 5) = -1.0;
    T(c_Zp, 6) = 1.0;
    T(c_Z, 7) = 1.0 / p.Pr;
    T(c_Lp, 8) = 1.0;
    T(c_L, 9) = p.b_m;

    t.W_jordan.setZero();
    t.W_jordan(0, 0) = -1.0 / std::sqrt(zeta);
    t.W_jordan(1, 1) = 1.0 / std::sqrt(zeta);
    for (int b = 2; b < dim; b += 2) t.W_jordan(b, b + 1) = 1.0;

    const Mat10c P = truncated(L, 0.0, omega);
    const Mat10d Tinv = T.inverse();
    const Mat10c C = Tinv.cast<cd>() * P * T.cast<cd>() - (Tinv * Tp).cast<cd>();
    t.c11 = C(0, 0);
    t.c22 = C(1, 1);
    return t;
}

Transform transform_T(const BaseState& base, double y, double omega) {
    return transform_T(base.at(y), base.params, omega);
}

}  // namespace polystab::lin
