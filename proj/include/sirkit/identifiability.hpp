#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sirkit/model.hpp"
#include "sirkit/ode.hpp"

namespace sirkit {

/// The two quantities that determine the reported trajectory. Parameter sets
/// sharing both (and the same reported initial count) produce identical
/// reported-compartment paths and are indistinguishable from reported data.
struct EquivalenceInvariants {
    double beta_over_p;      ///< beta_star / p
    double beta_times_sfrac; ///< beta_star (1 - pi)
};

EquivalenceInvariants invariants_of(const ModelParams& params);

/// Which parameter to hold fixed when constructing an equivalent set.
enum class PinKind { Reporting, Immunity, BetaStar };

struct ParameterPin {
    PinKind kind;
    double value;
};

/// Solves the two invariant conditions for the remaining two parameters given
/// the pinned one; gamma carries over unchanged. Pinning a parameter at the
/// base's own value returns the base set exactly. Throws OutOfRange when the
/// solved parameters leave their domains.
ModelParams equivalent_params(const ModelParams& base, const ParameterPin& pin);

struct IdentityReport {
    double max_abs_diff_ir;         ///< sup-norm difference of reported paths (count units)
    bool identical_ir;              ///< max_abs_diff_ir <= tolerance
    bool other_compartments_differ; ///< susceptible paths differ beyond 10x tolerance
    double tolerance;
};

/// Integrates the reduced reported-compartment equation for both parameter
/// sets on one grid (same n and i0) and compares; the remaining compartments
/// are reconstructed and compared at ten times the tolerance.
IdentityReport certify_identity(const ModelParams& params1, const ModelParams& params2,
                                const InitialConditions& init, const TimeGrid& grid, double tol);

/// One admissible parameter combination consistent with an observed growth
/// rate and reported final fraction.
struct ManifoldPoint {
    double pi;
    double p;
    double beta_star;
};

/// For each immune fraction on the grid, the (p, beta_star) consistent with
/// the observed growth rate and reported final size: beta_star = (rho+gamma)/(1-pi)
/// and p from the final-size inversion. Grid values where p leaves (0, 1] are
/// skipped. Throws NoEpidemic when rho <= 0.
std::vector<ManifoldPoint> manifold_scan(double rho, double z_r, double gamma,
                                         std::span<const double> pi_grid);

/// Equally spaced immune fractions on [0, 1 - rho/(rho+gamma) - margin].
std::vector<double> default_pi_grid(double rho, double gamma, std::size_t points = 101,
                                    double margin = 1e-6);

/// CSV pi,p,beta_star,beta_over_p,beta_times_sfrac; the last two columns are
/// constant across rows by construction.
void write_scan_csv(std::span<const ManifoldPoint> scan, std::ostream& out);
void write_scan_csv(std::span<const ManifoldPoint> scan, const std::string& path);

} // namespace sirkit
