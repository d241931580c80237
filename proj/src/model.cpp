#include "polystab/model.hpp"

#include "polystab/errors.hpp"

#include <cmath>

namespace polystab::model {

namespace {

struct Field {
    const char* name;
    double ModelParams::*member;
};

constexpr Field fields[] = {
    {"Re", &ModelParams::Re},
    {"W", &ModelParams::W},
    {"Gr", &ModelParams::Gr},
    {"Pr", &ModelParams::Pr},
    {"A_r", &ModelParams::A_r},
    {"A_m", &ModelParams::A_m},
    {"sigma_m", &ModelParams::sigma_m},
    {"b_m", &ModelParams::b_m},
    {"E_A", &ModelParams::E_A},
    {"beta", &ModelParams::beta},
    {"k", &ModelParams::k_phen},
    {"A_hat", &ModelParams::A_hat},
    {"theta_bar", &ModelParams::theta_bar},
    {"J_plus", &ModelParams::J_plus},
    {"J_minus", &ModelParams::J_minus},
    {"lambda_hat", &ModelParams::lambda_hat},
    {"omega", &ModelParams::omega},
};

}  // namespace

void ModelParams::validate() const {
    for (const auto& f : fields) {
        if (!std::isfinite(this->*f.member)) throw ConfigError(std::string(f.name) + " is not finite");
    }
    if (!(Re > 0)) throw ConfigError("Re must be positive");
    if (!(W > 0)) throw ConfigError("W must be positive");
    if (!(Pr > 0)) throw ConfigError("Pr must be positive");
    if (!(sigma_m >= 0)) throw ConfigError("sigma_m must be non-negative");
    if (!(b_m > 0)) throw ConfigError("b_m must be positive");
    if (!(beta > 0 && beta < 1)) throw ConfigError("beta must lie in (0, 1)");
    if (!(theta_bar > -1)) throw ConfigError("theta_bar must exceed -1 (positive wall temperature)");
}

ModelParams ModelParams::rest_state() {
    ModelParams p;
    p.A_hat = 0.0;
    p.theta_bar = 0.0;
    p.J_plus = 1.0;
    p.J_minus = 1.0;
    return p;
}

const std::vector<std::string>& ModelParams::field_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& f : fields) v.emplace_back(f.name);
        return v;
    }();
    return names;
}

void ModelParams::set(const std::string& name, double value) {
    for (const auto& f : fields) {
        if (name == f.name) {
            this->*f.member = value;
            return;
        }
    }
    throw ConfigError("unknown parameter '" + name + "'");
}

double ModelParams::get(const std::string& name) const {
    for (const auto& f : fields) {
        if (name == f.name) return this->*f.member;
    }
    throw ConfigError("unknown parameter '" + name + "'");
}

double eval_J(double E_A, double Z) {
    if (!(Z > 0)) throw NonPositiveTemperature("Z = " + std::to_string(Z));
    return std::exp(E_A * (Z - 1.0) / Z);
}

double eval_chi0(double E_A, double Z) { return Z * eval_J(E_A, Z); }

RheoCoeffs eval_rheo(const ModelParams& p, double a11, double a12, double a22, double Z) {
    RheoCoeffs c;
    const double I = a11 + a22;
    const double kb3 = p.k_bar() / 3.0;
    c.chi0 = eval_chi0(p.E_A, Z);
    c.chi0_prime = c.chi0 * (p.E_A + Z) / (Z * Z);
    c.K_I = 1.0 / p.W + kb3 * I;
    c.K_tilde = c.K_I + p.beta * I;

    const double alpha12 = a12 / p.Re;
    const double alpha2 = a22 / p.Re + p.kappa2();

    c.R33 = c.chi0 * (c.K_I + a11 * (kb3 + 2.0 * p.beta));
    c.R34 = 2.0 * p.beta * a12 * c.chi0;
    c.R35 = kb3 * a11 * c.chi0;
    c.R43 = a12 * c.chi0 * (kb3 + p.beta);
    c.R44 = (p.r44_variant == R44Variant::consistent ? c.chi0 : c.chi0_prime) * c.K_tilde;
    c.R45 = a12 * c.chi0 * (kb3 + p.beta);
    c.R53 = c.chi0 * a22 * kb3;
    c.R54 = 2.0 * p.beta * a12 * c.chi0;
    c.R55 = c.chi0 * (c.K_I + a22 * (kb3 + 2.0 * p.beta));
    c.r11 = c.chi0_prime * 2.0 * alpha12 * alpha12 * c.K_tilde / alpha2;
    c.r12 = c.chi0_prime * alpha12 * c.K_tilde;
    return c;
}

std::pair<double, double> alpha_hat(const ModelParams& p, double a11, double a22) {
    return {a11 / p.Re + p.kappa2(), a22 / p.Re + p.kappa2()};
}

}  // namespace polystab::model
