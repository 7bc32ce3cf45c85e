#pragma once

#include <string>

#include "sirkit/errors.hpp"

namespace sirkit {

/// Rate and fraction parameters of the SIR model with under-reporting and
/// prior immunity. Validated once at construction; operations assume validity.
struct ModelParams {
    double beta_r; ///< infectious-contact rate of reported individuals
    double beta_u; ///< infectious-contact rate of unreported individuals
    double p;      ///< reporting fraction, in (0, 1]
    double pi;     ///< initially immune fraction, in [0, 1)
    double gamma;  ///< recovery rate, > 0

    static ModelParams make(double beta_r, double beta_u, double p, double pi, double gamma);

    /// Construction from the effective rate alone, with beta_r = beta_u =
    /// beta_star. Only the effective rate enters the deterministic dynamics,
    /// so this is interchangeable with any pair sharing it.
    static ModelParams from_effective(double beta_star, double p, double pi, double gamma);
};

/// Reporting-weighted effective infection rate p*beta_r + (1-p)*beta_u.
double effective_beta(const ModelParams& params);

struct DerivedRates {
    double beta_star; ///< effective infection rate
    double r0;        ///< basic reproduction number, beta_star / gamma
    double re;        ///< effective reproduction number, beta_star (1 - pi) / gamma
    double rho;       ///< initial exponential growth rate, beta_star (1 - pi) - gamma
};

DerivedRates derived_rates(const ModelParams& params);

/// Population size and initially reported infectious fraction.
struct InitialConditions {
    long long n;
    double i0;

    static InitialConditions make(long long n, double i0);
};

/// Compartment occupancies. Holds counts for stochastic work and nonnegative
/// reals for deterministic work.
struct CompartmentState {
    double s = 0;
    double i_r = 0;
    double i_u = 0;
    double r_r = 0;
    double r_u = 0;

    double total() const { return s + i_r + i_u + r_r + r_u; }
    double infectious() const { return i_r + i_u; }
    double immune() const { return r_r + r_u; }
};

/// Real-valued initial compartments:
///   I_r(0) = n i0,           I_u(0) = (1-p)/p I_r(0),
///   R_r(0) = n p pi,         R_u(0) = n (1-p) pi,
///   S(0)   = n (1-pi) - n i0 / p.
/// Throws InfeasibleInitialState when S(0) would not be positive.
CompartmentState initial_compartments(const ModelParams& params, const InitialConditions& init);

/// Integer-valued variant for stochastic simulation: the four infectious and
/// recovered compartments round to nearest integers and the residual goes to
/// S(0), so the population total is exact. Throws when S(0) would be negative.
CompartmentState initial_compartments_integer(const ModelParams& params,
                                              const InitialConditions& init);

/// A parameter file: model parameters plus initial conditions.
struct Scenario {
    ModelParams params;
    InitialConditions init;
};

/// Strict JSON schema {"beta_r","beta_u","p","pi","gamma","n","i0"};
/// unknown keys are rejected.
Scenario parse_scenario_json(const std::string& text);
Scenario load_scenario(const std::string& path);
std::string scenario_to_json(const Scenario& scenario);

} // namespace sirkit
