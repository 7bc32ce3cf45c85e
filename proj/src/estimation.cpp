#include "sirkit/estimation.hpp"

#include <algorithm>
#include <cmath>

namespace sirkit {

namespace {

long long threshold_count(double fraction, long long n) {
    const double raw = fraction * static_cast<double>(n);
    const auto rounded = std::llround(raw);
    // tolerate representation error in fraction * n before taking the ceiling
    if (std::abs(raw - static_cast<double>(rounded)) <= 1e-9 * std::max(1.0, std::abs(raw)))
        return rounded;
    return static_cast<long long>(std::ceil(raw));
}

GrowthFit ols_log_counts(const std::vector<double>& times) {
    const std::size_t k = times.size();
    if (k < 2) throw InsufficientData("growth fit: fewer than two reported infections in window");
    double tbar = 0, ybar = 0;
    std::vector<double> logs(k);
    for (std::size_t i = 0; i < k; ++i) {
        logs[i] = std::log(static_cast<double>(i + 1));
        tbar += times[i];
        ybar += logs[i];
    }
    tbar /= static_cast<double>(k);
    ybar /= static_cast<double>(k);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const double dx = times[i] - tbar;
        sxx += dx * dx;
        sxy += dx * (logs[i] - ybar);
    }
    if (!(sxx > 0)) throw InsufficientData("growth fit: degenerate time spread");
    const double slope = sxy / sxx;
    return GrowthFit{slope, ybar - slope * tbar, k, times.back()};
}

} // namespace

GrowthFit fit_growth_rate(const EventLog& log, double threshold_fraction) {
    if (!(threshold_fraction > 0)) throw InvalidParams("growth fit: threshold must be > 0");
    const long long target = threshold_count(threshold_fraction, log.n);

    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(target));
    for (const Event& event : log.events) {
        if (event.kind != EventKind::ReportedInfection) continue;
        times.push_back(event.time);
        if (event.n1 >= target) return ols_log_counts(times);
    }
    throw InsufficientData("growth fit: reported incidence never reached the threshold");
}

std::vector<double> reported_crossing_times(const DeterministicPath& path, long long max_count) {
    std::vector<double> times;
    const double n = static_cast<double>(path.population());
    long long k = 1;
    double prev = 0.0;
    for (std::size_t i = 1; i < path.states.size() && k <= max_count; ++i) {
        const double cum = path.reported_cumulative_fraction(i) * n;
        while (k <= max_count && cum >= static_cast<double>(k)) {
            const double t0 = path.grid.time(i - 1);
            const double frac = (static_cast<double>(k) - prev) / (cum - prev);
            times.push_back(t0 + frac * path.grid.dt());
            ++k;
        }
        prev = cum;
    }
    return times;
}

GrowthFit fit_growth_rate(const DeterministicPath& path, double threshold_fraction) {
    if (!(threshold_fraction > 0)) throw InvalidParams("growth fit: threshold must be > 0");
    const long long target = threshold_count(threshold_fraction, path.population());
    std::vector<double> times = reported_crossing_times(path, target);
    if (static_cast<long long>(times.size()) < target)
        throw InsufficientData("growth fit: path never reached the threshold");
    return ols_log_counts(times);
}

FinalSize solve_final_size(double re) {
    if (!(re > 0)) throw InvalidParams("final size: reproduction number must be > 0");
    if (re <= 1.0) return FinalSize{0.0, true};

    // g(z) = 1 - z - exp(-re z), written through expm1 so the sign is exact
    // near zero; g > 0 left of the root, g < 0 right of it.
    const auto g = [re](double z) { return -z - std::expm1(-re * z); };
    double lo = 1e-12, hi = 1.0 - 1e-12;
    if (!(g(lo) > 0)) return FinalSize{0.0, false}; // root below resolution
    for (int iter = 0; iter < 200 && hi - lo > 1e-14; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0 ? lo : hi) = mid;
    }
    return FinalSize{0.5 * (lo + hi), false};
}

double predicted_reported_final_size(const ModelParams& params) {
    const DerivedRates rates = derived_rates(params);
    const FinalSize fs = solve_final_size(rates.re);
    if (fs.subcritical) return 0.0;
    const double scale = params.p * (1.0 - params.pi);
    const double z_r = scale * fs.z;

    // same root through the reported-fraction equation directly
    const auto g = [&](double zr) { return -zr / scale - std::expm1(-rates.re * zr / scale); };
    double lo = 1e-12 * scale, hi = (1.0 - 1e-12) * scale;
    for (int iter = 0; iter < 200 && hi - lo > 1e-14; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0 ? lo : hi) = mid;
    }
    const double direct = 0.5 * (lo + hi);
    if (std::abs(direct - z_r) > 1e-10)
        throw Error("final size: substitution and direct roots disagree");
    return z_r;
}

SurveyEstimate survey_immunity(const CompartmentState& initial_state, long long m,
                               SeededRng& rng) {
    const auto n = static_cast<long long>(initial_state.total());
    const auto immune = static_cast<long long>(initial_state.immune());
    if (m < 1 || m > n) throw InvalidParams("immunity survey: need 1 <= m <= n");
    const long long counts[] = {immune, n - immune};
    const auto taken = sample_without_replacement(counts, m, rng);
    return SurveyEstimate{SurveyKind::ImmunityAtT0, m, taken[0], m,
                          static_cast<double>(taken[0]) / static_cast<double>(m)};
}

namespace {

SurveyEstimate reporting_survey(SurveyKind kind, long long in_class_reported,
                                long long in_class_total, long long n, long long m,
                                SeededRng& rng) {
    const long long counts[] = {in_class_reported, in_class_total - in_class_reported,
                                n - in_class_total};
    const auto taken = sample_without_replacement(counts, m, rng);
    const long long denominator = taken[0] + taken[1];
    if (denominator == 0)
        throw EmptyDenominator("reporting survey: no in-class individuals in the sample");
    return SurveyEstimate{kind, m, taken[0], denominator,
                          static_cast<double>(taken[0]) / static_cast<double>(denominator)};
}

} // namespace

SurveyEstimate survey_reporting_at_peak(const EventLog& log, long long m, SeededRng& rng) {
    if (m < 1 || m > log.n) throw InvalidParams("reporting survey: need 1 <= m <= n");

    // first time the total infectious count attains its maximum
    const CompartmentState* peak = &log.initial_state;
    for (const Event& event : log.events)
        if (event.state_after.infectious() > peak->infectious()) peak = &event.state_after;

    return reporting_survey(SurveyKind::ReportingAtPeak, static_cast<long long>(peak->i_r),
                            static_cast<long long>(peak->infectious()), log.n, m, rng);
}

SurveyEstimate survey_reporting_at_end(const EventLog& log, long long m, SeededRng& rng) {
    if (m < 1 || m > log.n) throw InvalidParams("reporting survey: need 1 <= m <= n");
    const CompartmentState& end = log.final_state();
    // ever infected: everyone out of S except the initially immune
    const auto ever = static_cast<long long>(static_cast<double>(log.n) - end.s -
                                             log.initial_state.immune());
    const auto reported_ever = log.n1_final() + static_cast<long long>(log.initial_state.i_r);
    return reporting_survey(SurveyKind::ReportingAtEnd, reported_ever, ever, log.n, m, rng);
}

EstimationResult estimate_remaining(const SummaryStats& stats, KnownParameter known,
                                    double known_value) {
    if (!(stats.gamma > 0)) throw InvalidParams("estimate: gamma must be > 0");
    if (!(stats.rho_hat > 0)) throw Subcritical("estimate: observed growth rate is not positive");
    if (!(stats.z_r_hat >= 0 && stats.z_r_hat < 1))
        throw InvalidParams("estimate: z_r must be in [0, 1)");

    const double re_hat = (stats.rho_hat + stats.gamma) / stats.gamma;
    const FinalSize fs = solve_final_size(re_hat); // re_hat > 1 since rho_hat > 0

    double p_hat = 0, pi_hat = 0;
    if (known == KnownParameter::Immunity) {
        pi_hat = known_value;
        if (!(pi_hat >= 0 && pi_hat < 1)) throw DomainViolation("estimate: surveyed pi outside [0, 1)");
        p_hat = stats.z_r_hat / ((1.0 - pi_hat) * fs.z);
        if (!(p_hat > 0 && p_hat <= 1)) throw DomainViolation("estimate: solved p outside (0, 1]");
    } else {
        p_hat = known_value;
        if (!(p_hat > 0 && p_hat <= 1)) throw DomainViolation("estimate: surveyed p outside (0, 1]");
        const double one_minus_pi = stats.z_r_hat / (p_hat * fs.z);
        pi_hat = 1.0 - one_minus_pi;
        if (!(pi_hat >= 0 && pi_hat < 1)) throw DomainViolation("estimate: solved pi outside [0, 1)");
    }
    const double beta_star_hat = (stats.rho_hat + stats.gamma) / (1.0 - pi_hat);
    return EstimationResult{p_hat, pi_hat, beta_star_hat, known, fs.z};
}

EstimationResult estimate_remaining(const SummaryStats& stats, const SurveyEstimate& survey) {
    const KnownParameter known = survey.kind == SurveyKind::ImmunityAtT0
                                     ? KnownParameter::Immunity
                                     : KnownParameter::Reporting;
    return estimate_remaining(stats, known, survey.estimate);
}

} // namespace sirkit
