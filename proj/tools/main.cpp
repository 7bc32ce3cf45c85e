// Command-line front end: simulation, integration, equivalence construction,
// manifold scans, estimation, the replicated survey experiment, and the
// likelihood derivative check.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sirkit/estimation.hpp"
#include "sirkit/event_log.hpp"
#include "sirkit/experiment.hpp"
#include "sirkit/gillespie.hpp"
#include "sirkit/identifiability.hpp"
#include "sirkit/likelihood.hpp"
#include "sirkit/model.hpp"
#include "sirkit/ode.hpp"

namespace {

using nlohmann::json;

void write_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw sirkit::IoError("cannot open for writing: " + out_path);
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
}

json params_json(const sirkit::ModelParams& params) {
    return json{{"beta_r", params.beta_r},
                {"beta_u", params.beta_u},
                {"beta_star", sirkit::effective_beta(params)},
                {"p", params.p},
                {"pi", params.pi},
                {"gamma", params.gamma}};
}

double max_rel_err(double a, double b, double scale) {
    const double denom = std::max({std::abs(a), std::abs(b), 1e-9 * scale});
    return denom > 0 ? std::abs(a - b) / denom : 0.0;
}

struct CommonOptions {
    std::string params_path;
    std::string out_path;
    std::string format;
    std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, CommonOptions& common, const std::string& default_format) {
    cmd->add_option("--params", common.params_path, "parameter file (JSON)");
    cmd->add_option("--out", common.out_path, "output path (default: stdout)");
    cmd->add_option("--seed", common.seed, "RNG seed")->default_val(std::uint64_t{1});
    common.format = default_format;
    cmd->add_option("--format", common.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
}

sirkit::Scenario require_scenario(const CommonOptions& common) {
    if (common.params_path.empty())
        throw sirkit::InvalidParams("this command needs --params <file.json>");
    return sirkit::load_scenario(common.params_path);
}

void require_format(const CommonOptions& common, const std::string& supported) {
    if (common.format != supported)
        throw sirkit::InvalidParams("this command only emits " + supported);
}

int run(int argc, char** argv) {
    CLI::App app{"SIR epidemic toolkit with under-reporting and prior immunity"};
    app.require_subcommand(1);

    // simulate
    auto* simulate_cmd = app.add_subcommand("simulate", "stochastic epidemic to an event-log CSV");
    CommonOptions simulate_common;
    double end_time = std::numeric_limits<double>::infinity();
    add_common(simulate_cmd, simulate_common, "csv");
    simulate_cmd->add_option("--end-time", end_time, "stop time (default: run to extinction)");

    // integrate
    auto* integrate_cmd = app.add_subcommand("integrate", "deterministic path to a CSV");
    CommonOptions integrate_common;
    double t_end = 100.0, dt = 1e-3;
    std::size_t stride = 1;
    bool reduced = false;
    add_common(integrate_cmd, integrate_common, "csv");
    integrate_cmd->add_option("--t-end", t_end, "integration horizon")->default_val(100.0);
    integrate_cmd->add_option("--dt", dt, "step size")->default_val(1e-3);
    integrate_cmd->add_option("--stride", stride, "thin output to every k-th point")->default_val(1);
    integrate_cmd->add_flag("--reduced", reduced,
                            "integrate the reduced reported-compartment form and reconstruct");

    // equivalent
    auto* equivalent_cmd =
        app.add_subcommand("equivalent", "construct an observationally equivalent parameter set");
    CommonOptions equivalent_common;
    std::string pin_kind;
    double pin_value = 0;
    add_common(equivalent_cmd, equivalent_common, "json");
    equivalent_cmd->add_option("--pin", pin_kind, "which parameter to fix: p, pi, or beta")
        ->required()
        ->check(CLI::IsMember({"p", "pi", "beta"}));
    equivalent_cmd->add_option("--value", pin_value, "pinned value")->required();

    // scan
    auto* scan_cmd = app.add_subcommand(
        "scan", "parameter combinations consistent with a growth rate and reported final size");
    CommonOptions scan_common;
    std::optional<double> scan_rho, scan_zr, scan_gamma;
    std::size_t scan_points = 101;
    add_common(scan_cmd, scan_common, "csv");
    scan_cmd->add_option("--rho", scan_rho, "observed growth rate");
    scan_cmd->add_option("--zr", scan_zr, "observed reported final fraction");
    scan_cmd->add_option("--gamma", scan_gamma, "known recovery rate");
    scan_cmd->add_option("--points", scan_points, "grid size")->default_val(101);

    // estimate
    auto* estimate_cmd =
        app.add_subcommand("estimate", "recover parameters from an event log plus one survey value");
    CommonOptions estimate_common;
    std::string estimate_log, known_kind;
    double known_value = 0, estimate_gamma = 1.0, growth_threshold = 0.075;
    add_common(estimate_cmd, estimate_common, "json");
    estimate_cmd->add_option("--log", estimate_log, "event-log CSV")->required();
    estimate_cmd->add_option("--known", known_kind, "which parameter the survey supplied: pi or p")
        ->required()
        ->check(CLI::IsMember({"pi", "p"}));
    estimate_cmd->add_option("--value", known_value, "surveyed value")->required();
    estimate_cmd->add_option("--gamma", estimate_gamma, "known recovery rate")->default_val(1.0);
    estimate_cmd->add_option("--growth-threshold", growth_threshold,
                             "growth-fit window as a fraction of n reported")
        ->default_val(0.075);

    // experiment
    auto* experiment_cmd =
        app.add_subcommand("experiment", "replicated simulate-survey-estimate pipeline");
    CommonOptions experiment_common;
    long long m = 1000, target = 100, max_attempts = 0;
    double outbreak_threshold = 0.05, exp_growth_threshold = 0.075;
    std::string branch = "both", survey_mode = "at-end";
    unsigned threads = 1;
    add_common(experiment_cmd, experiment_common, "json");
    experiment_cmd->add_option("--m", m, "survey sample size")->default_val(1000);
    experiment_cmd->add_option("--target", target, "major outbreaks to collect")->default_val(100);
    experiment_cmd->add_option("--outbreak-threshold", outbreak_threshold,
                               "major-outbreak cutoff on the reported final fraction")
        ->default_val(0.05);
    experiment_cmd->add_option("--growth-threshold", exp_growth_threshold,
                               "growth-fit window as a fraction of n reported")
        ->default_val(0.075);
    experiment_cmd->add_option("--branch", branch, "given-pi, given-p, or both")
        ->check(CLI::IsMember({"given-pi", "given-p", "both"}))
        ->default_val("both");
    experiment_cmd->add_option("--survey", survey_mode, "reporting survey: at-end or at-peak")
        ->check(CLI::IsMember({"at-end", "at-peak"}))
        ->default_val("at-end");
    experiment_cmd->add_option("--threads", threads, "worker threads")->default_val(1);
    experiment_cmd->add_option("--max-attempts", max_attempts,
                               "attempt cap (0 = max(1000, 50*target))")
        ->default_val(0);

    // lik-check
    auto* lik_cmd = app.add_subcommand(
        "lik-check", "analytic log-likelihood derivatives against finite differences");
    CommonOptions lik_common;
    std::string lik_log;
    double lik_beta = 0, lik_p = 0, lik_pi = 0, lik_gamma = 1.0;
    add_common(lik_cmd, lik_common, "json");
    lik_cmd->add_option("--log", lik_log, "event-log CSV")->required();
    lik_cmd->add_option("--beta-star", lik_beta, "evaluation point: effective rate")->required();
    lik_cmd->add_option("--p", lik_p, "evaluation point: reporting fraction")->required();
    lik_cmd->add_option("--pi", lik_pi, "evaluation point: immune fraction")->required();
    lik_cmd->add_option("--gamma", lik_gamma, "known recovery rate")->default_val(1.0);

    CLI11_PARSE(app, argc, argv);

    if (simulate_cmd->parsed()) {
        require_format(simulate_common, "csv");
        const auto scenario = require_scenario(simulate_common);
        sirkit::SeededRng rng(simulate_common.seed);
        const auto log = sirkit::simulate(scenario.params, scenario.init, end_time, rng);
        if (simulate_common.out_path.empty())
            sirkit::write_event_log_csv(log, std::cout);
        else
            sirkit::write_event_log_csv(log, simulate_common.out_path);
        return 0;
    }

    if (integrate_cmd->parsed()) {
        require_format(integrate_common, "csv");
        const auto scenario = require_scenario(integrate_common);
        const auto grid = sirkit::TimeGrid::make(0.0, t_end, dt);
        const sirkit::DeterministicPath path =
            reduced ? sirkit::reconstruct_compartments(
                          sirkit::integrate_reduced(scenario.params, scenario.init, grid),
                          scenario.params, scenario.init)
                    : sirkit::integrate_full(scenario.params, scenario.init, grid);
        if (integrate_common.out_path.empty())
            sirkit::write_path_csv(path, std::cout, stride);
        else
            sirkit::write_path_csv(path, integrate_common.out_path, stride);
        return 0;
    }

    if (equivalent_cmd->parsed()) {
        require_format(equivalent_common, "json");
        const auto scenario = require_scenario(equivalent_common);
        const sirkit::PinKind kind = pin_kind == "p"    ? sirkit::PinKind::Reporting
                                     : pin_kind == "pi" ? sirkit::PinKind::Immunity
                                                        : sirkit::PinKind::BetaStar;
        const auto equivalent =
            sirkit::equivalent_params(scenario.params, sirkit::ParameterPin{kind, pin_value});
        const auto invariants = sirkit::invariants_of(equivalent);
        json out{{"base", params_json(scenario.params)},
                 {"pin", {{"kind", pin_kind}, {"value", pin_value}}},
                 {"equivalent", params_json(equivalent)},
                 {"invariants",
                  {{"beta_over_p", invariants.beta_over_p},
                   {"beta_times_sfrac", invariants.beta_times_sfrac}}}};
        write_text(out.dump(2), equivalent_common.out_path);
        return 0;
    }

    if (scan_cmd->parsed()) {
        require_format(scan_common, "csv");
        double rho, zr, gamma;
        if (!scan_common.params_path.empty()) {
            const auto scenario = sirkit::load_scenario(scan_common.params_path);
            const auto rates = sirkit::derived_rates(scenario.params);
            rho = rates.rho;
            zr = sirkit::predicted_reported_final_size(scenario.params);
            gamma = scenario.params.gamma;
        } else if (scan_rho && scan_zr && scan_gamma) {
            rho = *scan_rho;
            zr = *scan_zr;
            gamma = *scan_gamma;
        } else {
            throw sirkit::InvalidParams("scan needs --params or all of --rho, --zr, --gamma");
        }
        const auto grid = sirkit::default_pi_grid(rho, gamma, scan_points);
        const auto scan = sirkit::manifold_scan(rho, zr, gamma, grid);
        if (scan_common.out_path.empty())
            sirkit::write_scan_csv(scan, std::cout);
        else
            sirkit::write_scan_csv(scan, scan_common.out_path);
        return 0;
    }

    if (estimate_cmd->parsed()) {
        require_format(estimate_common, "json");
        const auto log = sirkit::read_event_log_csv(estimate_log);
        const auto fit = sirkit::fit_growth_rate(log, growth_threshold);
        const sirkit::SummaryStats stats{fit.rho_hat, sirkit::final_reported_fraction(log),
                                         estimate_gamma};
        const auto known = known_kind == "pi" ? sirkit::KnownParameter::Immunity
                                              : sirkit::KnownParameter::Reporting;
        const auto result = sirkit::estimate_remaining(stats, known, known_value);
        json out{{"rho_hat", stats.rho_hat},
                 {"z_r_hat", stats.z_r_hat},
                 {"z_hat", result.z_hat},
                 {"supplied", {{"kind", known_kind}, {"value", known_value}}},
                 {"p_hat", result.p_hat},
                 {"pi_hat", result.pi_hat},
                 {"beta_star_hat", result.beta_star_hat}};
        write_text(out.dump(2), estimate_common.out_path);
        return 0;
    }

    if (experiment_cmd->parsed()) {
        require_format(experiment_common, "json");
        const auto scenario = require_scenario(experiment_common);
        sirkit::ExperimentConfig config;
        config.params = scenario.params;
        config.init = scenario.init;
        config.survey_size = m;
        config.target_outbreaks = target;
        config.outbreak_threshold = outbreak_threshold;
        config.growth_threshold = exp_growth_threshold;
        config.master_seed = experiment_common.seed;
        config.branch = sirkit::branch_from_string(branch);
        config.reporting_survey = sirkit::survey_mode_from_string(survey_mode);
        config.max_attempts = max_attempts;
        const auto report = sirkit::run_experiment(config, threads);
        if (!experiment_common.out_path.empty()) {
            sirkit::write_report_json(report, experiment_common.out_path + ".report.json");
            sirkit::write_rows_csv(report.rows, experiment_common.out_path + ".rows.csv");
        }
        std::cout << sirkit::report_to_json(report) << '\n';
        return 0;
    }

    if (lik_cmd->parsed()) {
        require_format(lik_common, "json");
        const auto log = sirkit::read_event_log_csv(lik_log);
        auto input = sirkit::LikelihoodInput::from_log(log);
        input.gamma = lik_gamma;
        const sirkit::LikelihoodPoint point{lik_beta, lik_p, lik_pi};
        const double loglik = sirkit::log_likelihood(input, point);
        const auto grad = sirkit::gradient(input, point);
        const auto grad_fd = sirkit::gradient_fd(input, point);
        const auto hess = sirkit::hessian(input, point);
        const auto hess_fd = sirkit::hessian_fd(input, point);

        double grad_scale = 0, hess_scale = 0;
        for (std::size_t i = 0; i < 3; ++i) {
            grad_scale = std::max(grad_scale, std::abs(grad[i]));
            for (std::size_t j = 0; j < 3; ++j)
                hess_scale = std::max(hess_scale, std::abs(hess[i][j]));
        }
        double err_grad = 0, err_hess = 0;
        for (std::size_t i = 0; i < 3; ++i) {
            err_grad = std::max(err_grad, max_rel_err(grad[i], grad_fd[i], grad_scale));
            for (std::size_t j = 0; j < 3; ++j)
                err_hess = std::max(err_hess, max_rel_err(hess[i][j], hess_fd[i][j], hess_scale));
        }

        json out{{"point", {{"beta_star", point.beta_star}, {"p", point.p}, {"pi", point.pi}}},
                 {"loglik", loglik},
                 {"grad", {grad.d_beta_star, grad.d_pi, grad.d_p}},
                 {"grad_fd", {grad_fd.d_beta_star, grad_fd.d_pi, grad_fd.d_p}},
                 {"hessian", hess},
                 {"hessian_fd", hess_fd},
                 {"max_rel_err_grad", err_grad},
                 {"max_rel_err_hess", err_hess}};
        write_text(out.dump(2), lik_common.out_path);
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
