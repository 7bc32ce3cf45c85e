#include "sirkit/event_log.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "csv_util.hpp"

namespace sirkit {

const char* event_code(EventKind kind) {
    switch (kind) {
        case EventKind::ReportedInfection: return "RI";
        case EventKind::UnreportedInfection: return "UI";
        case EventKind::ReportedRecovery: return "RR";
        case EventKind::UnreportedRecovery: return "UR";
    }
    return "??";
}

EventKind event_kind_from_code(const std::string& code) {
    if (code == "RI") return EventKind::ReportedInfection;
    if (code == "UI") return EventKind::UnreportedInfection;
    if (code == "RR") return EventKind::ReportedRecovery;
    if (code == "UR") return EventKind::UnreportedRecovery;
    throw IoError("unknown event kind '" + code + "'");
}

CountingPaths counting_paths(const EventLog& log) {
    CountingPaths paths;
    paths.times.reserve(log.events.size());
    paths.n1.reserve(log.events.size());
    paths.n2.reserve(log.events.size());
    paths.n3.reserve(log.events.size());
    paths.n4.reserve(log.events.size());
    for (const Event& event : log.events) {
        paths.times.push_back(event.time);
        paths.n1.push_back(event.n1);
        paths.n2.push_back(event.n2);
        paths.n3.push_back(event.n3);
        paths.n4.push_back(event.n4);
    }
    return paths;
}

double final_reported_fraction(const EventLog& log) {
    if (!log.extinct())
        throw NotExtinct("final reported fraction needs a completed epidemic");
    return static_cast<double>(log.n1_final()) / static_cast<double>(log.n);
}

namespace {

void write_state_row(std::ostream& out, double time, const char* kind,
                     const CompartmentState& state, long long n1, long long n2, long long n3,
                     long long n4) {
    out << csv::format_double(time) << ',' << kind << ',' << static_cast<long long>(state.s)
        << ',' << static_cast<long long>(state.i_r) << ',' << static_cast<long long>(state.i_u)
        << ',' << static_cast<long long>(state.r_r) << ',' << static_cast<long long>(state.r_u)
        << ',' << n1 << ',' << n2 << ',' << n3 << ',' << n4 << '\n';
}

} // namespace

void write_event_log_csv(const EventLog& log, std::ostream& out) {
    out << "time,kind,S,Ir,Iu,Rr,Ru,N1,N2,N3,N4\n";
    write_state_row(out, 0.0, "INIT", log.initial_state, 0, 0, 0, 0);
    for (const Event& event : log.events)
        write_state_row(out, event.time, event_code(event.kind), event.state_after, event.n1,
                        event.n2, event.n3, event.n4);
}

void write_event_log_csv(const EventLog& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    write_event_log_csv(log, out);
    if (!out.good()) throw IoError("write failed: " + path);
}

namespace {

CompartmentState state_from_fields(const std::vector<std::string>& fields) {
    CompartmentState state;
    state.s = static_cast<double>(csv::parse_ll(fields[2], "event log"));
    state.i_r = static_cast<double>(csv::parse_ll(fields[3], "event log"));
    state.i_u = static_cast<double>(csv::parse_ll(fields[4], "event log"));
    state.r_r = static_cast<double>(csv::parse_ll(fields[5], "event log"));
    state.r_u = static_cast<double>(csv::parse_ll(fields[6], "event log"));
    return state;
}

} // namespace

EventLog read_event_log_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("event log: empty file");
    if (line != "time,kind,S,Ir,Iu,Rr,Ru,N1,N2,N3,N4")
        throw IoError("event log: unexpected header '" + line + "'");

    EventLog log;
    bool have_init = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = csv::split(line);
        if (fields.size() != 11) throw IoError("event log: expected 11 fields, got line '" + line + "'");
        if (!have_init) {
            if (fields[1] != "INIT") throw IoError("event log: first row must have kind INIT");
            log.initial_state = state_from_fields(fields);
            log.n = static_cast<long long>(log.initial_state.total());
            have_init = true;
            continue;
        }
        Event event;
        event.time = csv::parse_double(fields[0], "event log");
        event.kind = event_kind_from_code(fields[1]);
        event.state_after = state_from_fields(fields);
        event.n1 = csv::parse_ll(fields[7], "event log");
        event.n2 = csv::parse_ll(fields[8], "event log");
        event.n3 = csv::parse_ll(fields[9], "event log");
        event.n4 = csv::parse_ll(fields[10], "event log");
        log.events.push_back(event);
    }
    if (!have_init) throw IoError("event log: missing INIT row");
    return log;
}

EventLog read_event_log_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open event log: " + path);
    return read_event_log_csv(in);
}

} // namespace sirkit
