#pragma once

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "sirkit/model.hpp"

namespace sirkit::testing {

// simulation-study baseline: n = 10,000, i0 = 0.001, beta_r = 2.5,
// beta_u = 1.5 (effective rate 1.9), p = 0.4, pi = 0.3, gamma = 1
inline ModelParams baseline_params() { return ModelParams::make(2.5, 1.5, 0.4, 0.3, 1.0); }
inline InitialConditions baseline_init() { return InitialConditions::make(10000, 0.001); }

// frozen independent-bisection roots of 1 - z = exp(-re z)
inline constexpr double kRootRe133 = 0.45135190081804009;
inline constexpr double kRootRe2 = 0.79681213002002005;
// p (1-pi) z at the baseline: 0.28 * kRootRe133
inline constexpr double kReportedRootBaseline = 0.12637853222905123;

inline double rel_err(double a, double b) {
    const double denom = std::max(std::abs(a), std::abs(b));
    return denom == 0 ? 0.0 : std::abs(a - b) / denom;
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("sirkit_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

} // namespace sirkit::testing
