#pragma once

#include <limits>

#include "sirkit/event_log.hpp"
#include "sirkit/model.hpp"
#include "sirkit/rng.hpp"

namespace sirkit {

/// Exact continuous-time simulation of the stochastic model.
///
/// Each step computes the infection force lambda = beta_r I_r + beta_u I_u and
/// the four event rates
///   a1 = p lambda S / n        (reported infection)
///   a2 = (1-p) lambda S / n    (unreported infection)
///   a3 = gamma I_r             (reported recovery)
///   a4 = gamma I_u             (unreported recovery),
/// draws an exponential waiting time at the total rate, then selects the event
/// by a cumulative scan over a1..a4 in that fixed order. The loop ends once
/// time reaches end_time or no infectious individuals remain; the final event
/// may land past end_time (the waiting-time draw is applied before the check).
///
/// Identical (params, init, end_time, seed) give a bit-identical log.
EventLog simulate(const ModelParams& params, const InitialConditions& init, double end_time,
                  SeededRng& rng);

inline EventLog simulate_to_extinction(const ModelParams& params, const InitialConditions& init,
                                       SeededRng& rng) {
    return simulate(params, init, std::numeric_limits<double>::infinity(), rng);
}

} // namespace sirkit
