#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "sirkit/model.hpp"

namespace sirkit {

/// Uniform time grid; the span must be an integer number of steps.
class TimeGrid {
public:
    static TimeGrid make(double t_start, double t_end, double dt);

    double t_start() const { return t_start_; }
    double t_end() const { return t_end_; }
    double dt() const { return dt_; }
    std::size_t steps() const { return steps_; }
    std::size_t points() const { return steps_ + 1; }
    double time(std::size_t i) const { return t_start_ + dt_ * static_cast<double>(i); }

private:
    TimeGrid(double t_start, double t_end, double dt, std::size_t steps)
        : t_start_(t_start), t_end_(t_end), dt_(dt), steps_(steps) {}

    double t_start_;
    double t_end_;
    double dt_;
    std::size_t steps_;
};

/// Real-valued compartment trajectories on a grid, with the running integral
/// of I_r carried alongside.
struct DeterministicPath {
    TimeGrid grid;
    std::vector<CompartmentState> states;
    std::vector<double> ir_integral;

    /// Cumulative reported incidence fraction at grid point i:
    /// (I_r + R_r - I_r(0) - R_r(0)) / n.
    double reported_cumulative_fraction(std::size_t i) const;
    long long population() const { return n_; }

    long long n_ = 0;
};

/// Reported-compartment trajectory from the reduced single-equation form.
struct ReportedPath {
    TimeGrid grid;
    std::vector<double> i_r;
    std::vector<double> ir_integral;
};

/// Classical fixed-step RK4 on the five-compartment system
///   S'   = -(beta_r I_r + beta_u I_u) S / n
///   I_r' = p (beta_r I_r + beta_u I_u) S / n - gamma I_r
///   I_u' = (1-p)(beta_r I_r + beta_u I_u) S / n - gamma I_u
///   R_r' = gamma I_r,   R_u' = gamma I_u
/// with the running integral of I_r as an augmented state. The vector field
/// sums to zero, so conservation holds by construction; it is checked, not
/// corrected. Throws StepTooLarge when a compartment drops below -1e-9 n.
DeterministicPath integrate_full(const ModelParams& params, const InitialConditions& init,
                                 const TimeGrid& grid);

/// The same dynamics reduced to the reported compartment alone:
///   I_r' = I_r [b(1-pi) - (b/p) i0] exp{ -(b/p) Q / n } - gamma I_r,  Q' = I_r
/// with b the effective rate and Q the running integral of I_r.
ReportedPath integrate_reduced(const ModelParams& params, const InitialConditions& init,
                               const TimeGrid& grid);

/// Recovers the remaining compartments from a reported path:
///   S   = [n(1-pi) - I_r(0)/p] exp{ -(b/p) Q / n }
///   I_u = (1-p)/p I_r
///   R_r = p (n - S) - I_r
///   R_u = (1-p)/p R_r.
DeterministicPath reconstruct_compartments(const ReportedPath& reported,
                                           const ModelParams& params,
                                           const InitialConditions& init);

/// CSV with header t,S,Ir,Iu,Rr,Ru,intIr at every grid point (or every
/// `stride`-th point).
void write_path_csv(const DeterministicPath& path, std::ostream& out, std::size_t stride = 1);
void write_path_csv(const DeterministicPath& path, const std::string& file, std::size_t stride = 1);

} // namespace sirkit
