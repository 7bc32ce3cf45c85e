#include "sirkit/gillespie.hpp"

namespace sirkit {

EventLog simulate(const ModelParams& params, const InitialConditions& init, double end_time,
                  SeededRng& rng) {
    if (!(end_time > 0)) throw InvalidParams("simulate: end_time must be > 0");

    EventLog log;
    log.initial_state = initial_compartments_integer(params, init);
    log.n = init.n;

    CompartmentState state = log.initial_state;
    const double n = static_cast<double>(init.n);
    double time = 0.0;
    long long n1 = 0, n2 = 0, n3 = 0, n4 = 0;

    // typical event count: two per infection plus the initial recoveries
    log.events.reserve(static_cast<std::size_t>(state.infectious()) + 256);

    while (time < end_time && state.infectious() > 0) {
        const double lambda = params.beta_r * state.i_r + params.beta_u * state.i_u;
        const double a1 = params.p * lambda * state.s / n;
        const double a2 = (1.0 - params.p) * lambda * state.s / n;
        const double a3 = params.gamma * state.i_r;
        const double a4 = params.gamma * state.i_u;
        const double total = a1 + a2 + a3 + a4;

        time += rng.exponential(total);
        const double pick = rng.uniform(total);

        Event event;
        if (pick < a1) {
            state.s -= 1;
            state.i_r += 1;
            ++n1;
            event.kind = EventKind::ReportedInfection;
        } else if (pick < a1 + a2) {
            state.s -= 1;
            state.i_u += 1;
            ++n3;
            event.kind = EventKind::UnreportedInfection;
        } else if (pick < a1 + a2 + a3) {
            state.i_r -= 1;
            state.r_r += 1;
            ++n2;
            event.kind = EventKind::ReportedRecovery;
        } else {
            state.i_u -= 1;
            state.r_u += 1;
            ++n4;
            event.kind = EventKind::UnreportedRecovery;
        }
        event.time = time;
        event.state_after = state;
        event.n1 = n1;
        event.n2 = n2;
        event.n3 = n3;
        event.n4 = n4;
        log.events.push_back(event);
    }
    return log;
}

} // namespace sirkit
