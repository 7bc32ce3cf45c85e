#pragma once

#include <vector>

#include "sirkit/event_log.hpp"
#include "sirkit/model.hpp"
#include "sirkit/ode.hpp"
#include "sirkit/rng.hpp"

namespace sirkit {

/// Least-squares fit of the early exponential phase.
struct GrowthFit {
    double rho_hat;         ///< slope, per unit time
    double intercept;
    std::size_t n_points;   ///< reported infection events used
    double window_end_time; ///< time the cumulative-reported threshold was crossed
};

/// Ordinary least squares of log N1(t_i) against t_i, one point per reported
/// infection event, up to and including the event where N1 first reaches
/// ceil(threshold_fraction * n). Throws InsufficientData on fewer than two
/// usable points or when the threshold is never reached.
GrowthFit fit_growth_rate(const EventLog& log, double threshold_fraction = 0.075);

/// The same fit applied to a deterministic path, with one synthetic event at
/// each integer crossing of the cumulative reported incidence.
GrowthFit fit_growth_rate(const DeterministicPath& path, double threshold_fraction = 0.075);

/// Times at which the cumulative reported incidence of a deterministic path
/// first reaches k = 1, 2, ..., max_count (linear interpolation between grid
/// points); stops early where the path never reaches the next integer.
std::vector<double> reported_crossing_times(const DeterministicPath& path, long long max_count);

struct FinalSize {
    double z;        ///< largest root of 1 - z = exp(-re z) in [0, 1)
    bool subcritical; ///< re <= 1, so only the trivial root exists
};

/// Bisection to absolute tolerance 1e-12; re <= 1 returns z = 0 with the flag.
FinalSize solve_final_size(double re);

/// Reported final fraction p (1-pi) z(RE). Solved through the substitution
/// z = z_r / (p (1-pi)) and cross-checked against the direct root of the
/// reported-fraction equation.
double predicted_reported_final_size(const ModelParams& params);

/// The observable summaries that drive the inversion, with gamma known.
struct SummaryStats {
    double rho_hat;
    double z_r_hat;
    double gamma;
};

enum class SurveyKind { ImmunityAtT0, ReportingAtPeak, ReportingAtEnd };

struct SurveyEstimate {
    SurveyKind kind;
    long long sample_size; ///< m individuals drawn without replacement
    long long positives;
    long long denominator; ///< m for immunity; in-class individuals otherwise
    double estimate;       ///< positives / denominator
};

/// Hypergeometric draw of the immune count among m of n individuals at t = 0.
SurveyEstimate survey_immunity(const CompartmentState& initial_state, long long m, SeededRng& rng);

/// Samples m individuals from the population at the first time the total
/// infectious count peaks; the estimate is the reported fraction among the
/// infectious individuals in the sample. Throws EmptyDenominator when the
/// sample contains none.
SurveyEstimate survey_reporting_at_peak(const EventLog& log, long long m, SeededRng& rng);

/// Samples m individuals at the end of the epidemic; the estimate is the
/// reported fraction among the ever-infected individuals in the sample
/// (initially infectious included, initially immune excluded).
SurveyEstimate survey_reporting_at_end(const EventLog& log, long long m, SeededRng& rng);

/// Which parameter a survey supplied to the inversion.
enum class KnownParameter { Reporting, Immunity };

struct EstimationResult {
    double p_hat;
    double pi_hat;
    double beta_star_hat;
    KnownParameter supplied;
    double z_hat; ///< total final-size root used by the inversion
};

/// Inverts the growth-rate and final-size relations given one surveyed
/// parameter: RE = (rho+gamma)/gamma, z = z(RE), and p (1-pi) = z_r / z.
/// Out-of-domain solutions are errors, never clamps.
EstimationResult estimate_remaining(const SummaryStats& stats, KnownParameter known,
                                    double known_value);
EstimationResult estimate_remaining(const SummaryStats& stats, const SurveyEstimate& survey);

} // namespace sirkit
