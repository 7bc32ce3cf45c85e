#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "sirkit/errors.hpp"

namespace sirkit::csv {

/// Shortest exact decimal form: 17 significant digits round-trip any double.
inline std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

inline double parse_double(const std::string& field, const char* context) {
    if (field.empty()) throw IoError(std::string(context) + ": empty numeric field");
    char* end = nullptr;
    const double value = std::strtod(field.c_str(), &end);
    if (end != field.c_str() + field.size())
        throw IoError(std::string(context) + ": bad numeric field '" + field + "'");
    return value;
}

inline long long parse_ll(const std::string& field, const char* context) {
    if (field.empty()) throw IoError(std::string(context) + ": empty integer field");
    char* end = nullptr;
    const long long value = std::strtoll(field.c_str(), &end, 10);
    if (end != field.c_str() + field.size())
        throw IoError(std::string(context) + ": bad integer field '" + field + "'");
    return value;
}

inline std::vector<std::string> split(const std::string& line, char sep = ',') {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

} // namespace sirkit::csv
