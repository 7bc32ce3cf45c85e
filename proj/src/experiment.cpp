#include "sirkit/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "csv_util.hpp"
#include "sirkit/gillespie.hpp"

namespace sirkit {

const char* to_string(EstimationBranch branch) {
    switch (branch) {
        case EstimationBranch::GivenPi: return "given-pi";
        case EstimationBranch::GivenP: return "given-p";
        case EstimationBranch::Both: return "both";
    }
    return "?";
}

const char* to_string(ReportingSurveyMode mode) {
    return mode == ReportingSurveyMode::AtEnd ? "at-end" : "at-peak";
}

EstimationBranch branch_from_string(const std::string& text) {
    if (text == "given-pi") return EstimationBranch::GivenPi;
    if (text == "given-p") return EstimationBranch::GivenP;
    if (text == "both") return EstimationBranch::Both;
    throw InvalidParams("unknown branch '" + text + "' (given-pi, given-p, both)");
}

ReportingSurveyMode survey_mode_from_string(const std::string& text) {
    if (text == "at-end") return ReportingSurveyMode::AtEnd;
    if (text == "at-peak") return ReportingSurveyMode::AtPeak;
    throw InvalidParams("unknown reporting survey mode '" + text + "' (at-end, at-peak)");
}

const char* to_string(ReplicateStatus status) {
    switch (status) {
        case ReplicateStatus::Ok: return "Ok";
        case ReplicateStatus::MinorOutbreak: return "MinorOutbreak";
        case ReplicateStatus::EstimationFailed: return "EstimationFailed";
    }
    return "?";
}

ReplicateRow run_replicate(const ExperimentConfig& config, long long index) {
    ReplicateRow row;
    row.index = index;
    row.seed = SeededRng::mix(config.master_seed, static_cast<std::uint64_t>(index));

    // independent sub-streams so each stage sees the same draws regardless of
    // which branches run
    SeededRng sim_rng(SeededRng::mix(row.seed, 0));
    SeededRng pi_rng(SeededRng::mix(row.seed, 1));
    SeededRng p_rng(SeededRng::mix(row.seed, 2));

    const EventLog log = simulate_to_extinction(config.params, config.init, sim_rng);
    const double z_r = final_reported_fraction(log);
    row.z_r_hat = z_r;

    if (z_r < config.outbreak_threshold) {
        row.status = ReplicateStatus::MinorOutbreak;
        return row;
    }

    const auto fail = [&row](const std::string& reason) {
        row.status = ReplicateStatus::EstimationFailed;
        row.failure_reason = reason;
    };

    SummaryStats stats{0.0, z_r, config.params.gamma};
    try {
        const GrowthFit fit = fit_growth_rate(log, config.growth_threshold);
        row.rho_hat = fit.rho_hat;
        stats.rho_hat = fit.rho_hat;
    } catch (const Error& e) {
        fail(std::string("growth fit: ") + e.what());
        return row;
    }

    const bool want_pi = config.branch != EstimationBranch::GivenP;
    const bool want_p = config.branch != EstimationBranch::GivenPi;

    if (want_pi) {
        try {
            const SurveyEstimate survey =
                survey_immunity(log.initial_state, config.survey_size, pi_rng);
            row.pi_survey = survey.estimate;
            const EstimationResult est = estimate_remaining(stats, survey);
            row.p_hat_given_pi = est.p_hat;
            row.beta_hat_given_pi = est.beta_star_hat;
        } catch (const Error& e) {
            fail(std::string("given-pi: ") + e.what());
            return row;
        }
    }
    if (want_p) {
        try {
            const SurveyEstimate survey =
                config.reporting_survey == ReportingSurveyMode::AtEnd
                    ? survey_reporting_at_end(log, config.survey_size, p_rng)
                    : survey_reporting_at_peak(log, config.survey_size, p_rng);
            row.p_survey = survey.estimate;
            const EstimationResult est = estimate_remaining(stats, survey);
            row.pi_hat_given_p = est.pi_hat;
            row.beta_hat_given_p = est.beta_star_hat;
        } catch (const Error& e) {
            fail(std::string("given-p: ") + e.what());
            return row;
        }
    }
    row.status = ReplicateStatus::Ok;
    return row;
}

ExperimentReport run_experiment(const ExperimentConfig& config, unsigned threads) {
    if (config.target_outbreaks < 1) throw InvalidParams("experiment: target_outbreaks must be >= 1");
    if (config.survey_size < 1 || config.survey_size > config.init.n)
        throw InvalidParams("experiment: survey size must be in [1, n]");
    if (threads == 0) threads = 1;

    const long long cap = config.effective_max_attempts();
    std::vector<ReplicateRow> rows;
    long long next_index = 0;
    long long usable = 0; // fully estimated major outbreaks, in index order

    while (usable < config.target_outbreaks && next_index < cap) {
        const long long wave =
            std::min<long long>(cap - next_index, std::max<long long>(threads * 8, 8));
        std::vector<ReplicateRow> wave_rows(static_cast<std::size_t>(wave));
        std::atomic<long long> cursor{0};
        auto worker = [&]() {
            while (true) {
                const long long slot = cursor.fetch_add(1);
                if (slot >= wave) break;
                wave_rows[static_cast<std::size_t>(slot)] =
                    run_replicate(config, next_index + slot);
            }
        };
        if (threads == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
        }
        for (auto& row : wave_rows) {
            if (usable >= config.target_outbreaks) break; // keep output independent of wave size
            if (row.status == ReplicateStatus::Ok) ++usable;
            rows.push_back(std::move(row));
        }
        next_index += wave;
    }

    ExperimentReport report;
    report.config = config;
    report.rng_id = kRngId;
    report.attempts = static_cast<long long>(rows.size());
    for (const ReplicateRow& row : rows) {
        report.ok_count += row.status == ReplicateStatus::Ok;
        report.minor_count += row.status == ReplicateStatus::MinorOutbreak;
        report.failed_count += row.status == ReplicateStatus::EstimationFailed;
    }
    report.rows = std::move(rows);
    report.summary = summarize(report.rows);
    return report;
}

namespace {

class Accumulator {
public:
    void add(const std::optional<double>& value) {
        if (!value) return;
        ++count_;
        values_.push_back(*value);
    }

    ColumnSummary summary() const {
        ColumnSummary out;
        out.count = count_;
        if (count_ == 0) return out;
        double sum = 0;
        for (double v : values_) sum += v;
        const double mean = sum / static_cast<double>(count_);
        out.mean = mean;
        if (count_ >= 2) {
            double ss = 0;
            for (double v : values_) ss += (v - mean) * (v - mean);
            out.sd = std::sqrt(ss / static_cast<double>(count_ - 1));
        }
        return out;
    }

private:
    long long count_ = 0;
    std::vector<double> values_;
};

} // namespace

ExperimentSummary summarize(const std::vector<ReplicateRow>& rows) {
    Accumulator rho, zr, pis, ps, pgpi, bgpi, pigp, bgp;
    for (const ReplicateRow& row : rows) {
        if (row.status != ReplicateStatus::Ok) continue;
        rho.add(row.rho_hat);
        zr.add(row.z_r_hat);
        pis.add(row.pi_survey);
        ps.add(row.p_survey);
        pgpi.add(row.p_hat_given_pi);
        bgpi.add(row.beta_hat_given_pi);
        pigp.add(row.pi_hat_given_p);
        bgp.add(row.beta_hat_given_p);
    }
    return ExperimentSummary{rho.summary(), zr.summary(), pis.summary(), ps.summary(),
                             pgpi.summary(), bgpi.summary(), pigp.summary(), bgp.summary()};
}

namespace {

std::string optional_field(const std::optional<double>& value) {
    return value ? csv::format_double(*value) : std::string();
}

std::optional<double> parse_optional(const std::string& field, const char* context) {
    if (field.empty()) return std::nullopt;
    return csv::parse_double(field, context);
}

constexpr const char* kRowsHeader =
    "index,seed,status,rho_hat,z_r_hat,pi_survey,p_survey,p_hat_givenpi,beta_hat_givenpi,"
    "pi_hat_givenp,beta_hat_givenp";

std::string status_field(const ReplicateRow& row) {
    std::string text = to_string(row.status);
    if (row.status == ReplicateStatus::EstimationFailed && !row.failure_reason.empty()) {
        std::string reason = row.failure_reason;
        for (char& c : reason)
            if (c == ',' || c == '\n') c = ';';
        text += "(" + reason + ")";
    }
    return text;
}

} // namespace

void write_rows_csv(const std::vector<ReplicateRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << kRowsHeader << '\n';
    for (const ReplicateRow& row : rows) {
        out << row.index << ',' << row.seed << ',' << status_field(row) << ','
            << optional_field(row.rho_hat) << ',' << optional_field(row.z_r_hat) << ','
            << optional_field(row.pi_survey) << ',' << optional_field(row.p_survey) << ','
            << optional_field(row.p_hat_given_pi) << ',' << optional_field(row.beta_hat_given_pi)
            << ',' << optional_field(row.pi_hat_given_p) << ','
            << optional_field(row.beta_hat_given_p) << '\n';
    }
    if (!out.good()) throw IoError("write failed: " + path);
}

std::vector<ReplicateRow> read_rows_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open rows csv: " + path);
    std::string line;
    if (!std::getline(in, line) || line != kRowsHeader)
        throw IoError("rows csv: unexpected header");

    std::vector<ReplicateRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = csv::split(line);
        if (fields.size() != 11) throw IoError("rows csv: expected 11 fields");
        ReplicateRow row;
        row.index = csv::parse_ll(fields[0], "rows csv");
        row.seed = static_cast<std::uint64_t>(std::stoull(fields[1]));
        const std::string& status = fields[2];
        if (status == "Ok") {
            row.status = ReplicateStatus::Ok;
        } else if (status == "MinorOutbreak") {
            row.status = ReplicateStatus::MinorOutbreak;
        } else if (status.rfind("EstimationFailed", 0) == 0) {
            row.status = ReplicateStatus::EstimationFailed;
            const auto open = status.find('(');
            if (open != std::string::npos && status.back() == ')')
                row.failure_reason = status.substr(open + 1, status.size() - open - 2);
        } else {
            throw IoError("rows csv: unknown status '" + status + "'");
        }
        row.rho_hat = parse_optional(fields[3], "rows csv");
        row.z_r_hat = parse_optional(fields[4], "rows csv");
        row.pi_survey = parse_optional(fields[5], "rows csv");
        row.p_survey = parse_optional(fields[6], "rows csv");
        row.p_hat_given_pi = parse_optional(fields[7], "rows csv");
        row.beta_hat_given_pi = parse_optional(fields[8], "rows csv");
        row.pi_hat_given_p = parse_optional(fields[9], "rows csv");
        row.beta_hat_given_p = parse_optional(fields[10], "rows csv");
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

nlohmann::json column_json(const ColumnSummary& column) {
    nlohmann::json j;
    j["count"] = column.count;
    j["mean"] = column.mean ? nlohmann::json(*column.mean) : nlohmann::json(nullptr);
    j["sd"] = column.sd ? nlohmann::json(*column.sd) : nlohmann::json(nullptr);
    return j;
}

} // namespace

std::string report_to_json(const ExperimentReport& report) {
    nlohmann::json j;
    j["config"] = {
        {"params",
         {{"beta_r", report.config.params.beta_r},
          {"beta_u", report.config.params.beta_u},
          {"p", report.config.params.p},
          {"pi", report.config.params.pi},
          {"gamma", report.config.params.gamma}}},
        {"init", {{"n", report.config.init.n}, {"i0", report.config.init.i0}}},
        {"survey_size", report.config.survey_size},
        {"target_outbreaks", report.config.target_outbreaks},
        {"outbreak_threshold", report.config.outbreak_threshold},
        {"growth_threshold", report.config.growth_threshold},
        {"master_seed", report.config.master_seed},
        {"branch", to_string(report.config.branch)},
        {"reporting_survey", to_string(report.config.reporting_survey)},
        {"max_attempts", report.config.effective_max_attempts()},
    };
    j["rng"] = report.rng_id;
    j["counts"] = {{"attempts", report.attempts},
                   {"ok", report.ok_count},
                   {"minor_outbreaks", report.minor_count},
                   {"estimation_failures", report.failed_count}};
    j["summary"] = {{"rho_hat", column_json(report.summary.rho_hat)},
                    {"z_r_hat", column_json(report.summary.z_r_hat)},
                    {"pi_survey", column_json(report.summary.pi_survey)},
                    {"p_survey", column_json(report.summary.p_survey)},
                    {"p_hat_given_pi", column_json(report.summary.p_hat_given_pi)},
                    {"beta_hat_given_pi", column_json(report.summary.beta_hat_given_pi)},
                    {"pi_hat_given_p", column_json(report.summary.pi_hat_given_p)},
                    {"beta_hat_given_p", column_json(report.summary.beta_hat_given_p)}};
    return j.dump(2);
}

void write_report_json(const ExperimentReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << report_to_json(report) << '\n';
    if (!out.good()) throw IoError("write failed: " + path);
}

} // namespace sirkit
