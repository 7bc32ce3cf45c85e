#pragma once

#include <array>
#include <vector>

#include "sirkit/event_log.hpp"

namespace sirkit {

/// Observable ingredients of the approximate log-likelihood over a window
/// [0, horizon]: the reported infection times with the reported prevalence and
/// count just before each, plus the piecewise-constant reported path for the
/// survival integral. The recovery rate is known and carried alongside; it
/// enters no term that varies with the parameters.
struct LikelihoodInput {
    double n = 0;
    double horizon = 0;
    double gamma = 1.0;

    // one entry per reported infection at time t_i <= horizon
    std::vector<double> event_times;
    std::vector<double> ir_before; ///< I_r(t_i-), each >= 1
    std::vector<double> n1_before; ///< N1(t_i-) = i - 1

    // right-continuous step path: segment j holds on [seg_times[j], seg_times[j+1])
    // (the last segment ends at the horizon)
    std::vector<double> seg_times;
    std::vector<double> seg_ir;
    std::vector<double> seg_n1;

    /// Builds the input from an event log, truncated to the horizon
    /// (default: the last event time).
    static LikelihoodInput from_log(const EventLog& log, double horizon = -1.0);

    void validate() const;

    long long n1_total() const { return static_cast<long long>(event_times.size()); }

    /// Exact integrals of the step path over [0, horizon]:
    /// j1 = int I_r ds, j2 = int I_r (N1/n) ds.
    struct PathIntegrals {
        double j1;
        double j2;
    };
    PathIntegrals path_integrals() const;
};

struct LikelihoodPoint {
    double beta_star;
    double p;
    double pi;
};

/// The approximate log-likelihood in observable quantities, up to the constant
/// dropped terms:
///   N1 log p + (1-p)/p N1 log(1-p)
///   + (1/p) sum_i log( beta (1/p) I_r(t_i-) A_i )
///   - int beta (1/p) I_r(s) A(s) ds,
/// with A(s) = (1-pi) - N1(s)/(n p) the susceptible-fraction surrogate. The
/// integral is exact piecewise-constant quadrature. Throws LogDomainError when
/// a log argument is not positive or the point is outside its domain.
double log_likelihood(const LikelihoodInput& input, const LikelihoodPoint& point);

/// Partial derivatives in the order (beta_star, pi, p).
struct LikelihoodGradient {
    double d_beta_star;
    double d_pi;
    double d_p;

    double operator[](std::size_t i) const {
        return i == 0 ? d_beta_star : (i == 1 ? d_pi : d_p);
    }
};

LikelihoodGradient gradient(const LikelihoodInput& input, const LikelihoodPoint& point);

/// Symmetric 3x3 matrix of second partials, ordered (beta_star, pi, p).
using LikelihoodHessian = std::array<std::array<double, 3>, 3>;

LikelihoodHessian hessian(const LikelihoodInput& input, const LikelihoodPoint& point);

/// Closed-form maximizer over the rate alone:
///   beta_star = N1 / int I_r(s) ((1-pi) - N1(s)/(n p)) ds.
/// Returns 0 when there are no reported infections; throws DegenerateIntegral
/// when the normalizing integral is not positive.
double beta_star_mle(const LikelihoodInput& input, double p, double pi);

/// Central finite differences of the log-likelihood (independent of the
/// analytic gradient path).
LikelihoodGradient gradient_fd(const LikelihoodInput& input, const LikelihoodPoint& point,
                               double rel_step = 1e-6);

/// Central finite differences of the analytic gradient.
LikelihoodHessian hessian_fd(const LikelihoodInput& input, const LikelihoodPoint& point,
                             double rel_step = 1e-6);

} // namespace sirkit
