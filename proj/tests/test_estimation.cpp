#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "sirkit/estimation.hpp"
#include "sirkit/gillespie.hpp"
#include "sirkit/identifiability.hpp"

using namespace sirkit;
using namespace sirkit::testing;

namespace {

// a synthetic log whose k-th reported infection happens at t_k, with enough
// susceptibles that the bookkeeping stays consistent
EventLog synthetic_reported_log(const std::vector<double>& times, long long n) {
    EventLog log;
    log.n = n;
    log.initial_state = CompartmentState{static_cast<double>(n - 1), 1, 0, 0, 0};
    CompartmentState state = log.initial_state;
    long long n1 = 0;
    for (double t : times) {
        state.s -= 1;
        state.i_r += 1;
        ++n1;
        log.events.push_back(Event{t, EventKind::ReportedInfection, state, n1, 0, 0, 0});
    }
    return log;
}

} // namespace

TEST_CASE("exact log-linear data is fit exactly") {
    // N1(t_k) = k with t_k = log(k) / 0.33
    const long long n = 1000; // threshold ceil(0.075 n) = 75
    std::vector<double> times;
    for (long long k = 1; k <= 80; ++k)
        times.push_back(std::log(static_cast<double>(k)) / 0.33);
    // make times strictly increasing from k = 1 (log 1 = 0): shift by epsilon is
    // unnecessary since log(k) increases and the first time is 0... the log
    // requires strictly increasing times, so start at k = 1 with t = 0 excluded
    times[0] = 1e-9;
    const EventLog log = synthetic_reported_log(times, n);
    const GrowthFit fit = fit_growth_rate(log, 0.075);
    CHECK(fit.n_points == 75);
    CHECK(fit.window_end_time == times[74]);
    CHECK(std::abs(fit.rho_hat - 0.33) < 1e-6);
}

TEST_CASE("too little data is rejected") {
    const EventLog one = synthetic_reported_log({0.5}, 10);
    CHECK_THROWS_AS(fit_growth_rate(one, 0.075), InsufficientData);

    // threshold never reached: many events on a large population
    std::vector<double> times;
    for (int k = 1; k <= 30; ++k) times.push_back(0.1 * k);
    const EventLog short_log = synthetic_reported_log(times, 100000);
    CHECK_THROWS_AS(fit_growth_rate(short_log, 0.075), InsufficientData);
}

TEST_CASE("the fit window ends at the threshold crossing") {
    std::vector<double> times;
    for (int k = 1; k <= 40; ++k) times.push_back(0.25 * k);
    const EventLog log = synthetic_reported_log(times, 400); // threshold = 30
    const GrowthFit fit = fit_growth_rate(log, 0.075);
    CHECK(fit.n_points == 30);
    CHECK(fit.window_end_time == doctest::Approx(7.5));
}

TEST_CASE("final-size roots") {
    CHECK(solve_final_size(1.0).z == 0.0);
    CHECK(solve_final_size(1.0).subcritical);
    CHECK(solve_final_size(0.5).z == 0.0);

    const FinalSize two = solve_final_size(2.0);
    CHECK_FALSE(two.subcritical);
    CHECK(std::abs(two.z - kRootRe2) < 1e-12);

    const FinalSize baseline = solve_final_size(1.33);
    CHECK(std::abs(baseline.z - kRootRe133) < 1e-12);

    CHECK_THROWS_AS(solve_final_size(0.0), InvalidParams);
}

TEST_CASE("final-size residual and monotonicity") {
    double previous = 0.0;
    for (double re = 1.02; re < 6.0; re += 0.13) {
        const double z = solve_final_size(re).z;
        CHECK(std::abs(1.0 - z - std::exp(-re * z)) <= 1e-12);
        CHECK(z > previous);
        previous = z;
    }
}

TEST_CASE("predicted reported final size") {
    CHECK(std::abs(predicted_reported_final_size(baseline_params()) - kReportedRootBaseline) <
          1e-12);
    // subcritical: no epidemic
    CHECK(predicted_reported_final_size(ModelParams::from_effective(0.9, 0.4, 0.0, 1.0)) == 0.0);
    // full reporting, no immunity: the reported fraction is the total fraction
    const double zr = predicted_reported_final_size(ModelParams::from_effective(2.0, 1.0, 0.0, 1.0));
    CHECK(std::abs(zr - kRootRe2) < 1e-12);
}

TEST_CASE("inversion round trip at the baseline truth") {
    const DerivedRates rates = derived_rates(baseline_params());
    const double zr = predicted_reported_final_size(baseline_params());
    const SummaryStats stats{rates.rho, zr, 1.0};

    const EstimationResult with_pi = estimate_remaining(stats, KnownParameter::Immunity, 0.3);
    CHECK(rel_err(with_pi.p_hat, 0.4) < 1e-9);
    CHECK(rel_err(with_pi.beta_star_hat, 1.9) < 1e-9);
    CHECK(with_pi.supplied == KnownParameter::Immunity);

    const EstimationResult with_p = estimate_remaining(stats, KnownParameter::Reporting, 0.4);
    CHECK(rel_err(with_p.pi_hat, 0.3) < 1e-9);
    CHECK(rel_err(with_p.beta_star_hat, 1.9) < 1e-9);
}

TEST_CASE("inversion round trip over random supercritical parameters") {
    SeededRng rng(4711);
    int tested = 0;
    while (tested < 100) {
        const double gamma = 0.3 + 2.0 * rng.uniform01();
        const double p = 0.1 + 0.9 * rng.uniform01();
        const double pi = 0.7 * rng.uniform01();
        const double re = 1.1 + 2.0 * rng.uniform01();
        const double beta = re * gamma / (1.0 - pi);
        const ModelParams params = ModelParams::from_effective(beta, p, pi, gamma);
        const DerivedRates rates = derived_rates(params);
        const SummaryStats stats{rates.rho, predicted_reported_final_size(params), gamma};

        const EstimationResult with_pi = estimate_remaining(stats, KnownParameter::Immunity, pi);
        CHECK(rel_err(with_pi.p_hat, p) < 1e-9);
        CHECK(rel_err(with_pi.beta_star_hat, beta) < 1e-9);

        const EstimationResult with_p = estimate_remaining(stats, KnownParameter::Reporting, p);
        CHECK(std::abs(with_p.pi_hat - pi) < 1e-9);
        CHECK(rel_err(with_p.beta_star_hat, beta) < 1e-9);
        ++tested;
    }
}

TEST_CASE("estimates from the same summaries share the equivalence invariants") {
    // different supplied values describe different points of one equivalence class
    const SummaryStats stats{0.33, 0.126, 1.0};
    const EstimationResult a = estimate_remaining(stats, KnownParameter::Immunity, 0.25);
    const EstimationResult b = estimate_remaining(stats, KnownParameter::Immunity, 0.05);
    const EstimationResult c = estimate_remaining(stats, KnownParameter::Reporting, 0.5);
    const auto invariants = [](const EstimationResult& r) {
        return invariants_of(ModelParams::from_effective(r.beta_star_hat, r.p_hat, r.pi_hat, 1.0));
    };
    const EquivalenceInvariants inv_a = invariants(a);
    for (const EquivalenceInvariants inv : {invariants(b), invariants(c)}) {
        CHECK(rel_err(inv_a.beta_over_p, inv.beta_over_p) < 1e-9);
        CHECK(rel_err(inv_a.beta_times_sfrac, inv.beta_times_sfrac) < 1e-9);
    }
}

TEST_CASE("estimation domain violations") {
    const SummaryStats stats{0.33, 0.126, 1.0};
    // pi close to 1 - z_r/z forces p past one
    CHECK_THROWS_AS(estimate_remaining(stats, KnownParameter::Immunity, 0.75), DomainViolation);
    // tiny surveyed p forces pi below zero
    CHECK_THROWS_AS(estimate_remaining(stats, KnownParameter::Reporting, 0.1), DomainViolation);
    CHECK_THROWS_AS(estimate_remaining(SummaryStats{-0.1, 0.126, 1.0}, KnownParameter::Immunity, 0.3),
                    Subcritical);
    CHECK_THROWS_AS(estimate_remaining(SummaryStats{0.0, 0.126, 1.0}, KnownParameter::Immunity, 0.3),
                    Subcritical);
}

TEST_CASE("immunity survey census and degenerate cases") {
    const CompartmentState state{6975, 10, 15, 1200, 1800};
    SeededRng rng(9);
    const SurveyEstimate census = survey_immunity(state, 10000, rng);
    CHECK(census.estimate == doctest::Approx(0.3));
    CHECK(census.positives == 3000);
    CHECK(census.denominator == 10000);
    CHECK(census.kind == SurveyKind::ImmunityAtT0);

    const CompartmentState no_immune{990, 10, 0, 0, 0};
    for (int i = 0; i < 50; ++i)
        CHECK(survey_immunity(no_immune, 100, rng).estimate == 0.0);
}

TEST_CASE("immunity survey matches the hypergeometric distribution") {
    const CompartmentState state{6975, 10, 15, 1200, 1800};
    SeededRng rng(123);
    const int draws = 1000;
    double sum = 0, sumsq = 0;
    for (int i = 0; i < draws; ++i) {
        const double estimate = survey_immunity(state, 1000, rng).estimate;
        sum += estimate;
        sumsq += estimate * estimate;
    }
    const double mean = sum / draws;
    const double sd = std::sqrt((sumsq - draws * mean * mean) / (draws - 1));
    const double expected_sd = std::sqrt(0.3 * 0.7 / 1000.0 * (10000.0 - 1000.0) / 9999.0);
    CHECK(std::abs(mean - 0.3) < 3.0 * expected_sd / std::sqrt(static_cast<double>(draws)));
    CHECK(sd == doctest::Approx(expected_sd).epsilon(0.15));
}

TEST_CASE("reporting survey census at the peak") {
    SeededRng sim_rng(2023);
    const EventLog log = simulate_to_extinction(baseline_params(), baseline_init(), sim_rng);
    REQUIRE(final_reported_fraction(log) > 0.05);

    // census: the estimate is exactly the peak composition
    const CompartmentState* peak = &log.initial_state;
    for (const Event& event : log.events)
        if (event.state_after.infectious() > peak->infectious()) peak = &event.state_after;
    SeededRng rng(5);
    const SurveyEstimate census = survey_reporting_at_peak(log, 10000, rng);
    CHECK(census.kind == SurveyKind::ReportingAtPeak);
    CHECK(census.denominator == static_cast<long long>(peak->infectious()));
    CHECK(census.estimate == doctest::Approx(peak->i_r / peak->infectious()).epsilon(1e-12));
}

TEST_CASE("reporting survey census at the end") {
    SeededRng sim_rng(2023);
    const EventLog log = simulate_to_extinction(baseline_params(), baseline_init(), sim_rng);
    SeededRng rng(5);
    const SurveyEstimate census = survey_reporting_at_end(log, 10000, rng);
    CHECK(census.kind == SurveyKind::ReportingAtEnd);
    const double ever = 10000.0 - log.final_state().s - 3000.0;
    const double reported_ever = static_cast<double>(log.n1_final()) + 10.0;
    CHECK(census.denominator == static_cast<long long>(ever));
    CHECK(census.estimate == doctest::Approx(reported_ever / ever).epsilon(1e-12));
}

TEST_CASE("a sample can miss the infectious class entirely") {
    // one infectious individual in a large population, single-draw sample
    EventLog log;
    log.n = 1000;
    log.initial_state = CompartmentState{999, 1, 0, 0, 0};
    SeededRng rng(1);
    CHECK_THROWS_AS(survey_reporting_at_peak(log, 1, rng), EmptyDenominator);
}

TEST_CASE("reporting surveys are unbiased against the census truth") {
    SeededRng sim_rng(31337);
    const EventLog log = simulate_to_extinction(baseline_params(), baseline_init(), sim_rng);
    REQUIRE(final_reported_fraction(log) > 0.05);

    SeededRng census_rng(1);
    const double truth_end = survey_reporting_at_end(log, 10000, census_rng).estimate;
    SeededRng rng(55);
    const int draws = 1000;
    double sum = 0;
    for (int i = 0; i < draws; ++i) sum += survey_reporting_at_end(log, 1000, rng).estimate;
    const double mean = sum / draws;
    // denominator ~ 320 of 1000 sampled; 3 standard errors of the Monte Carlo mean
    const double approx_sd = std::sqrt(truth_end * (1.0 - truth_end) / 318.0);
    CHECK(std::abs(mean - truth_end) < 3.0 * approx_sd / std::sqrt(static_cast<double>(draws)));
}
