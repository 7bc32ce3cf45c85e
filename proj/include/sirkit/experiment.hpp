#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sirkit/estimation.hpp"
#include "sirkit/model.hpp"

namespace sirkit {

enum class EstimationBranch { GivenPi, GivenP, Both };

/// Which reporting survey feeds the GivenP branch. The end-of-epidemic
/// ever-infected survey is the default; the peak-prevalence survey is far
/// noisier because few individuals are infectious at the peak.
enum class ReportingSurveyMode { AtEnd, AtPeak };

const char* to_string(EstimationBranch branch);
const char* to_string(ReportingSurveyMode mode);
EstimationBranch branch_from_string(const std::string& text);
ReportingSurveyMode survey_mode_from_string(const std::string& text);

struct ExperimentConfig {
    ModelParams params;
    InitialConditions init;
    long long survey_size = 1000;
    long long target_outbreaks = 100;
    double outbreak_threshold = 0.05; ///< minimum final reported fraction of a major outbreak
    double growth_threshold = 0.075;  ///< growth-fit window, fraction of n reported
    std::uint64_t master_seed = 1;
    EstimationBranch branch = EstimationBranch::Both;
    ReportingSurveyMode reporting_survey = ReportingSurveyMode::AtEnd;
    long long max_attempts = 0; ///< 0 = max(1000, 50 * target_outbreaks)

    long long effective_max_attempts() const {
        return max_attempts > 0 ? max_attempts : std::max<long long>(1000, 50 * target_outbreaks);
    }
};

enum class ReplicateStatus { Ok, MinorOutbreak, EstimationFailed };

const char* to_string(ReplicateStatus status);

/// One simulated epidemic and everything estimated from it. Estimates are
/// present only on Ok rows.
struct ReplicateRow {
    long long index = 0;
    std::uint64_t seed = 0;
    ReplicateStatus status = ReplicateStatus::Ok;
    std::string failure_reason;

    std::optional<double> rho_hat;
    std::optional<double> z_r_hat;
    std::optional<double> pi_survey;
    std::optional<double> p_survey;
    std::optional<double> p_hat_given_pi;
    std::optional<double> beta_hat_given_pi;
    std::optional<double> pi_hat_given_p;
    std::optional<double> beta_hat_given_p;
};

/// Mean and (k-1)-denominator standard deviation of one column over Ok rows.
struct ColumnSummary {
    long long count = 0;
    std::optional<double> mean;
    std::optional<double> sd;
};

struct ExperimentSummary {
    ColumnSummary rho_hat, z_r_hat, pi_survey, p_survey;
    ColumnSummary p_hat_given_pi, beta_hat_given_pi;
    ColumnSummary pi_hat_given_p, beta_hat_given_p;
};

/// Deterministic sequential aggregation over Ok rows in index order.
ExperimentSummary summarize(const std::vector<ReplicateRow>& rows);

struct ExperimentReport {
    ExperimentConfig config;
    std::string rng_id;
    long long attempts = 0;
    long long ok_count = 0;
    long long minor_count = 0;
    long long failed_count = 0;
    std::vector<ReplicateRow> rows;
    ExperimentSummary summary;
};

/// Runs replicates with seeds derived from the master seed at index 0, 1, ...
/// until target_outbreaks of them pass the outbreak threshold (or the attempt
/// cap is reached, e.g. for subcritical parameters). The result is identical
/// for any thread count.
ExperimentReport run_experiment(const ExperimentConfig& config, unsigned threads = 1);

/// One replicate by index; exposed so schedules can be reproduced exactly.
ReplicateRow run_replicate(const ExperimentConfig& config, long long index);

/// CSV header:
/// index,seed,status,rho_hat,z_r_hat,pi_survey,p_survey,p_hat_givenpi,
/// beta_hat_givenpi,pi_hat_givenp,beta_hat_givenp
/// Doubles carry 17 significant digits, so re-reading reproduces aggregates
/// exactly; absent values are empty fields.
void write_rows_csv(const std::vector<ReplicateRow>& rows, const std::string& path);
std::vector<ReplicateRow> read_rows_csv(const std::string& path);

std::string report_to_json(const ExperimentReport& report);
void write_report_json(const ExperimentReport& report, const std::string& path);

} // namespace sirkit
