#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sirkit/model.hpp"

namespace sirkit {

/// The four jump types of the stochastic model.
enum class EventKind { ReportedInfection, UnreportedInfection, ReportedRecovery, UnreportedRecovery };

const char* event_code(EventKind kind); // "RI", "UI", "RR", "UR"
EventKind event_kind_from_code(const std::string& code);

struct Event {
    double time;
    EventKind kind;
    CompartmentState state_after;
    // cumulative counting processes after this event:
    // n1/n2 reported infections/recoveries, n3/n4 unreported ones
    long long n1 = 0;
    long long n2 = 0;
    long long n3 = 0;
    long long n4 = 0;
};

/// Time-stamped record of one stochastic epidemic. Event times are strictly
/// increasing; population conservation holds after every event.
struct EventLog {
    CompartmentState initial_state;
    long long n = 0;
    std::vector<Event> events;

    const CompartmentState& final_state() const {
        return events.empty() ? initial_state : events.back().state_after;
    }
    double end_time() const { return events.empty() ? 0.0 : events.back().time; }
    bool extinct() const { return final_state().infectious() == 0; }
    long long n1_final() const { return events.empty() ? 0 : events.back().n1; }
    long long n3_final() const { return events.empty() ? 0 : events.back().n3; }
};

/// The counting processes as right-continuous step functions; all start at 0.
struct CountingPaths {
    std::vector<double> times; // jump times
    std::vector<long long> n1, n2, n3, n4; // values from each jump time on
};

CountingPaths counting_paths(const EventLog& log);

/// Final fraction of reported infections in the whole population, N1(end)/n.
/// Requires a completed epidemic; throws NotExtinct otherwise.
double final_reported_fraction(const EventLog& log);

/// CSV with header time,kind,S,Ir,Iu,Rr,Ru,N1,N2,N3,N4. Row 0 is the initial
/// state with kind INIT. Times carry 17 significant digits and round-trip
/// exactly.
void write_event_log_csv(const EventLog& log, std::ostream& out);
void write_event_log_csv(const EventLog& log, const std::string& path);
EventLog read_event_log_csv(std::istream& in);
EventLog read_event_log_csv(const std::string& path);

} // namespace sirkit
