#include "sirkit/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sirkit {

namespace {

void require(bool ok, const char* message) {
    if (!ok) throw InvalidParams(message);
}

} // namespace

ModelParams ModelParams::make(double beta_r, double beta_u, double p, double pi, double gamma) {
    require(std::isfinite(beta_r) && beta_r >= 0, "beta_r must be finite and >= 0");
    require(std::isfinite(beta_u) && beta_u >= 0, "beta_u must be finite and >= 0");
    require(std::isfinite(p) && p > 0 && p <= 1, "p must be in (0, 1]");
    require(std::isfinite(pi) && pi >= 0 && pi < 1, "pi must be in [0, 1)");
    require(std::isfinite(gamma) && gamma > 0, "gamma must be > 0");
    return ModelParams{beta_r, beta_u, p, pi, gamma};
}

ModelParams ModelParams::from_effective(double beta_star, double p, double pi, double gamma) {
    return make(beta_star, beta_star, p, pi, gamma);
}

double effective_beta(const ModelParams& params) {
    return params.p * params.beta_r + (1.0 - params.p) * params.beta_u;
}

DerivedRates derived_rates(const ModelParams& params) {
    const double beta = effective_beta(params);
    return DerivedRates{
        beta,
        beta / params.gamma,
        beta * (1.0 - params.pi) / params.gamma,
        beta * (1.0 - params.pi) - params.gamma,
    };
}

InitialConditions InitialConditions::make(long long n, double i0) {
    if (n < 1) throw InvalidParams("population size must be >= 1");
    if (!(std::isfinite(i0) && i0 > 0 && i0 < 1))
        throw InvalidParams("i0 must be in (0, 1)");
    return InitialConditions{n, i0};
}

CompartmentState initial_compartments(const ModelParams& params, const InitialConditions& init) {
    const double n = static_cast<double>(init.n);
    CompartmentState state;
    state.i_r = n * init.i0;
    state.i_u = (1.0 - params.p) / params.p * state.i_r;
    state.r_r = n * params.p * params.pi;
    state.r_u = n * (1.0 - params.p) * params.pi;
    state.s = n * (1.0 - params.pi) - n * init.i0 / params.p;
    if (!(state.s > 0))
        throw InfeasibleInitialState("initial susceptibles not positive: i0/p + pi >= 1");
    return state;
}

CompartmentState initial_compartments_integer(const ModelParams& params,
                                              const InitialConditions& init) {
    const CompartmentState real = initial_compartments(params, init);
    CompartmentState state;
    state.i_r = static_cast<double>(std::llround(real.i_r));
    state.i_u = static_cast<double>(std::llround(real.i_u));
    state.r_r = static_cast<double>(std::llround(real.r_r));
    state.r_u = static_cast<double>(std::llround(real.r_u));
    state.s = static_cast<double>(init.n) - (state.i_r + state.i_u + state.r_r + state.r_u);
    if (state.s < 0)
        throw InfeasibleInitialState("rounded initial compartments exceed the population");
    return state;
}

namespace {

double get_number(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw IoError(std::string("parameter file: missing key '") + key + "'");
    const auto& v = j.at(key);
    if (!v.is_number()) throw IoError(std::string("parameter file: key '") + key + "' must be a number");
    return v.get<double>();
}

} // namespace

Scenario parse_scenario_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("parameter file: ") + e.what());
    }
    if (!j.is_object()) throw IoError("parameter file: top level must be an object");

    static const char* keys[] = {"beta_r", "beta_u", "p", "pi", "gamma", "n", "i0"};
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : keys) known = known || item.key() == k;
        if (!known) throw IoError("parameter file: unknown key '" + item.key() + "'");
    }

    const double n_raw = get_number(j, "n");
    const auto n = static_cast<long long>(std::llround(n_raw));
    if (static_cast<double>(n) != n_raw) throw IoError("parameter file: n must be an integer");

    return Scenario{
        ModelParams::make(get_number(j, "beta_r"), get_number(j, "beta_u"), get_number(j, "p"),
                          get_number(j, "pi"), get_number(j, "gamma")),
        InitialConditions::make(n, get_number(j, "i0")),
    };
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open parameter file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_json(buffer.str());
}

std::string scenario_to_json(const Scenario& scenario) {
    nlohmann::json j;
    j["beta_r"] = scenario.params.beta_r;
    j["beta_u"] = scenario.params.beta_u;
    j["p"] = scenario.params.p;
    j["pi"] = scenario.params.pi;
    j["gamma"] = scenario.params.gamma;
    j["n"] = scenario.init.n;
    j["i0"] = scenario.init.i0;
    return j.dump(2);
}

} // namespace sirkit
