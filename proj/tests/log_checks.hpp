#pragma once

// Structural checks every simulated event log must satisfy, shared between the
// unit suite and the acceptance binary. Returns an empty string when the log
// is sound, else a description of the first violation.

#include <cmath>
#include <sstream>
#include <string>

#include "sirkit/event_log.hpp"

namespace sirkit::testing {

inline std::string check_log_invariants(const EventLog& log) {
    std::ostringstream why;
    const double n = static_cast<double>(log.n);
    if (log.initial_state.total() != n) {
        why << "initial state does not sum to n";
        return why.str();
    }

    CompartmentState prev = log.initial_state;
    double prev_time = 0.0;
    long long prev_counts[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < log.events.size(); ++i) {
        const Event& event = log.events[i];
        const CompartmentState& state = event.state_after;
        if (!(event.time > prev_time)) {
            why << "event " << i << ": time not strictly increasing";
            return why.str();
        }
        if (state.s < 0 || state.i_r < 0 || state.i_u < 0 || state.r_r < 0 || state.r_u < 0) {
            why << "event " << i << ": negative compartment";
            return why.str();
        }
        if (state.total() != n) {
            why << "event " << i << ": conservation broken (total " << state.total() << ")";
            return why.str();
        }
        const long long counts[4] = {event.n1, event.n2, event.n3, event.n4};
        for (int k = 0; k < 4; ++k) {
            if (counts[k] < prev_counts[k]) {
                why << "event " << i << ": counting process " << (k + 1) << " decreased";
                return why.str();
            }
        }
        // N1 - N2 = I_r - I_r(0) and N3 - N4 = I_u - I_u(0)
        if (static_cast<double>(event.n1 - event.n2) != state.i_r - log.initial_state.i_r) {
            why << "event " << i << ": reported counting identity broken";
            return why.str();
        }
        if (static_cast<double>(event.n3 - event.n4) != state.i_u - log.initial_state.i_u) {
            why << "event " << i << ": unreported counting identity broken";
            return why.str();
        }
        prev = state;
        prev_time = event.time;
        for (int k = 0; k < 4; ++k) prev_counts[k] = counts[k];
    }
    return {};
}

inline bool logs_identical(const EventLog& a, const EventLog& b) {
    if (a.n != b.n || a.events.size() != b.events.size()) return false;
    const auto states_equal = [](const CompartmentState& x, const CompartmentState& y) {
        return x.s == y.s && x.i_r == y.i_r && x.i_u == y.i_u && x.r_r == y.r_r && x.r_u == y.r_u;
    };
    if (!states_equal(a.initial_state, b.initial_state)) return false;
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        const Event& x = a.events[i];
        const Event& y = b.events[i];
        if (x.time != y.time || x.kind != y.kind || !states_equal(x.state_after, y.state_after) ||
            x.n1 != y.n1 || x.n2 != y.n2 || x.n3 != y.n3 || x.n4 != y.n4)
            return false;
    }
    return true;
}

} // namespace sirkit::testing
