#pragma once

#include <string>
#include <utility>
#include <vector>

namespace polystab::model {

/// How the relaxation coefficient of the shear-stress row is formed.
///
/// `consistent` uses chi0 * K_tilde, which makes the eigenvalue asymptotics
/// and the stability integral agree; `literal` uses chi0' * K_tilde.
enum class R44Variant { consistent, literal };

/// Dimensionless groups and phenomenological constants.
/// Defaults are the main-case channel flow; Gr, Pr and k have no reference
/// value and default to 1.
struct ModelParams {
    double Re = 1.0;
    double W = 1.0;
    double Gr = 1.0;
    double Pr = 1.0;
    double A_r = 1.0;
    double A_m = 1.0;
    double sigma_m = 1.0;
    double b_m = 1.0;
    double E_A = 1.0;
    double beta = 0.5;
    double k_phen = 1.0;
    double A_hat = 1.0;
    double theta_bar = 1.0;
    double J_plus = 2.0;
    double J_minus = 1.0;
    double lambda_hat = 1.0;
    double omega = 1.0;
    R44Variant r44_variant = R44Variant::consistent;

    double kappa2() const { return 1.0 / (W * Re); }
    double k_bar() const { return k_phen - beta; }
    double D_hat() const { return Re * A_hat; }
    double lower_wall_temperature() const { return 1.0 + theta_bar; }

    /// Throws ConfigError on the first violated constraint.
    void validate() const;

    /// Main case with zero pressure drop, no wall heating and equal
    /// electrode currents: the fluid is at rest.
    static ModelParams rest_state();

    /// Field names accepted by `set` and `get`, in configuration order.
    static const std::vector<std::string>& field_names();
    void set(const std::string& name, double value);
    double get(const std::string& name) const;
};

/// Pointwise coefficients of the linearized rheological relations.
/// R34 and R45 hold only their stress parts; the velocity-gradient terms are
/// added by the caller that knows u'.
struct RheoCoeffs {
    double chi0 = 0.0;
    double chi0_prime = 0.0;
    double K_I = 0.0;
    double K_tilde = 0.0;
    double R33 = 0.0, R34 = 0.0, R35 = 0.0;
    double R43 = 0.0, R44 = 0.0, R45 = 0.0;
    double R53 = 0.0, R54 = 0.0, R55 = 0.0;
    double r11 = 0.0, r12 = 0.0;
};

/// Arrhenius factor exp(E_A (Z - 1) / Z).
double eval_J(double E_A, double Z);

/// chi0 = 1 / tau0(Z) = Z J(Z).
double eval_chi0(double E_A, double Z);

RheoCoeffs eval_rheo(const ModelParams& p, double a11, double a12, double a22, double Z);

/// (alpha_1, alpha_2) with alpha_i = a_ii / Re + kappa^2.
std::pair<double, double> alpha_hat(const ModelParams& p, double a11, double a22);

}  // namespace polystab::model
