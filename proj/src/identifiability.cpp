#include "sirkit/identifiability.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "csv_util.hpp"
#include "sirkit/estimation.hpp"

namespace sirkit {

EquivalenceInvariants invariants_of(const ModelParams& params) {
    const double beta = effective_beta(params);
    return EquivalenceInvariants{beta / params.p, beta * (1.0 - params.pi)};
}

ModelParams equivalent_params(const ModelParams& base, const ParameterPin& pin) {
    const double beta1 = effective_beta(base);
    double beta2 = 0, p2 = 0, pi2 = 0;
    switch (pin.kind) {
        case PinKind::Immunity:
            if (pin.value == base.pi) return base;
            if (!(pin.value >= 0 && pin.value < 1)) throw OutOfRange("pinned pi outside [0, 1)");
            pi2 = pin.value;
            beta2 = beta1 * (1.0 - base.pi) / (1.0 - pi2);
            p2 = base.p * beta2 / beta1;
            break;
        case PinKind::Reporting:
            if (pin.value == base.p) return base;
            if (!(pin.value > 0 && pin.value <= 1)) throw OutOfRange("pinned p outside (0, 1]");
            p2 = pin.value;
            beta2 = beta1 * p2 / base.p;
            pi2 = 1.0 - beta1 * (1.0 - base.pi) / beta2;
            break;
        case PinKind::BetaStar:
            if (pin.value == beta1) return base;
            if (!(pin.value > 0)) throw OutOfRange("pinned beta_star must be > 0");
            beta2 = pin.value;
            p2 = base.p * beta2 / beta1;
            pi2 = 1.0 - beta1 * (1.0 - base.pi) / beta2;
            break;
    }
    if (!(p2 > 0 && p2 <= 1)) throw OutOfRange("equivalent set needs p outside (0, 1]");
    if (!(pi2 >= 0 && pi2 < 1)) throw OutOfRange("equivalent set needs pi outside [0, 1)");
    return ModelParams::from_effective(beta2, p2, pi2, base.gamma);
}

IdentityReport certify_identity(const ModelParams& params1, const ModelParams& params2,
                                const InitialConditions& init, const TimeGrid& grid, double tol) {
    const ReportedPath path1 = integrate_reduced(params1, init, grid);
    const ReportedPath path2 = integrate_reduced(params2, init, grid);

    double max_diff = 0.0;
    for (std::size_t i = 0; i < path1.i_r.size(); ++i)
        max_diff = std::max(max_diff, std::abs(path1.i_r[i] - path2.i_r[i]));

    const DeterministicPath full1 = reconstruct_compartments(path1, params1, init);
    const DeterministicPath full2 = reconstruct_compartments(path2, params2, init);
    double max_s_diff = 0.0;
    for (std::size_t i = 0; i < full1.states.size(); ++i)
        max_s_diff = std::max(max_s_diff, std::abs(full1.states[i].s - full2.states[i].s));

    return IdentityReport{max_diff, max_diff <= tol, max_s_diff > 10.0 * tol, tol};
}

std::vector<ManifoldPoint> manifold_scan(double rho, double z_r, double gamma,
                                         std::span<const double> pi_grid) {
    if (!(gamma > 0)) throw InvalidParams("manifold scan: gamma must be > 0");
    if (!(rho > 0)) throw NoEpidemic("manifold scan: growth rate must be positive");
    const FinalSize fs = solve_final_size((rho + gamma) / gamma);

    std::vector<ManifoldPoint> scan;
    scan.reserve(pi_grid.size());
    for (double pi : pi_grid) {
        if (!(pi >= 0 && pi < 1)) continue;
        const double p = z_r / ((1.0 - pi) * fs.z);
        if (!(p > 0 && p <= 1)) continue;
        scan.push_back(ManifoldPoint{pi, p, (rho + gamma) / (1.0 - pi)});
    }
    return scan;
}

std::vector<double> default_pi_grid(double rho, double gamma, std::size_t points, double margin) {
    if (!(rho > 0) || !(gamma > 0)) throw NoEpidemic("pi grid: need rho > 0 and gamma > 0");
    if (points < 2) throw InvalidParams("pi grid: need at least 2 points");
    const double hi = 1.0 - rho / (rho + gamma) - margin;
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = hi * static_cast<double>(i) / static_cast<double>(points - 1);
    return grid;
}

void write_scan_csv(std::span<const ManifoldPoint> scan, std::ostream& out) {
    out << "pi,p,beta_star,beta_over_p,beta_times_sfrac\n";
    for (const ManifoldPoint& point : scan) {
        out << csv::format_double(point.pi) << ',' << csv::format_double(point.p) << ','
            << csv::format_double(point.beta_star) << ','
            << csv::format_double(point.beta_star / point.p) << ','
            << csv::format_double(point.beta_star * (1.0 - point.pi)) << '\n';
    }
}

void write_scan_csv(std::span<const ManifoldPoint> scan, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    write_scan_csv(scan, out);
    if (!out.good()) throw IoError("write failed: " + path);
}

} // namespace sirkit
