#pragma once

#include "polystab/base_state.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>

namespace polystab::lin {

using cd = std::complex<double>;
using base::BaseState;
using base::PointState;
using model::ModelParams;

/// State ordering (u, v, alpha12, Omega, Z, Z', L, L', M, M').
constexpr int dim = 10;
enum Component { c_u, c_v, c_a12, c_Omega, c_Z, c_Zp, c_L, c_Lp, c_M, c_Mp };

using Mat10c = Eigen::Matrix<cd, dim, dim>;
using Mat10d = Eigen::Matrix<double, dim, dim>;
using Vec10c = Eigen::Matrix<cd, dim, 1>;

/// exact: alpha11, alpha22 eliminated through the full 2x2 algebraic system.
/// truncated: alpha11 = (2 alpha12_hat / alpha2_hat) alpha12 and alpha22 = 0,
/// which is exact to leading order in 1/lambda.
enum class Variant { exact, truncated };

/// Linear combination of (u, v, alpha12, Z).
struct Functional {
    std::array<cd, 4> c{};
    cd apply(cd u, cd v, cd a12, cd Z) const { return c[0] * u + c[1] * v + c[2] * a12 + c[3] * Z; }
};

struct EliminationResult {
    Functional alpha11;
    Functional alpha22;
    cd det2x2;
};

/// Coefficients the algebraic stress balances put on (alpha11, alpha22) and
/// their right-hand sides, at one point.
struct StressBalance {
    cd a, b, c, d;   // [a b; c d] (alpha11, alpha22)^T = (f1, f2)
    Functional f1, f2;
};

StressBalance stress_balance(const PointState& s, const ModelParams& p, cd lambda, double omega);

EliminationResult eliminate_alpha(const PointState& s, const ModelParams& p, cd lambda, double omega);
EliminationResult eliminate_alpha(const BaseState& base, double y, cd lambda, double omega);

/// Roots in lambda of the 2x2 determinant at one point (the continuous-spectrum locus).
std::array<cd, 2> singular_lambdas(const PointState& s, const ModelParams& p, double omega);

struct CoeffMatrix {
    Mat10c A;
    double y = 0.0;
    cd lambda;
    double omega = 0.0;
    Variant variant = Variant::exact;
};

/// A(y; lambda, omega) with Y' = A Y.
Mat10c coeff_matrix_at(const PointState& s, const ModelParams& p, cd lambda, double omega, Variant variant);
CoeffMatrix coeff_matrix(const BaseState& base, double y, cd lambda, double omega, Variant variant);

/// Lambda-coefficient of the truncated matrix; it has eight nonzero entries.
Mat10d lambda_part(const PointState& s, const ModelParams& p);

/// Rows selecting u, v, Z, L and M' (the wall conditions).
Eigen::Matrix<double, 5, dim> boundary_operator();
constexpr std::array<int, 5> boundary_components{c_u, c_v, c_Z, c_L, c_Mp};

struct Transform {
    Mat10d T;
    Mat10d W_jordan;
    cd c11, c22;  // leading diagonal entries of T^-1 P T - T^-1 T'
};

/// Change of variables that brings the lambda-part into upper Jordan form,
/// and the first two diagonal coefficients of the transformed system.
Transform transform_T(const BaseState& base, double y, double omega);
Transform transform_T(const PointState& s, const ModelParams& p, double omega);

}  // namespace polystab::lin
