#include "sirkit/ode.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <ostream>

#include "csv_util.hpp"

namespace sirkit {

TimeGrid TimeGrid::make(double t_start, double t_end, double dt) {
    if (!(std::isfinite(t_start) && std::isfinite(t_end) && t_start < t_end))
        throw InvalidParams("time grid: need t_start < t_end");
    if (!(std::isfinite(dt) && dt > 0)) throw InvalidParams("time grid: need dt > 0");
    const double span = t_end - t_start;
    const double count = span / dt;
    const auto steps = static_cast<std::size_t>(std::llround(count));
    if (steps < 1 || std::abs(count - static_cast<double>(steps)) > 1e-9 * count)
        throw InvalidParams("time grid: span must be an integer number of steps");
    return TimeGrid(t_start, t_end, dt, steps);
}

double DeterministicPath::reported_cumulative_fraction(std::size_t i) const {
    const CompartmentState& now = states.at(i);
    const CompartmentState& start = states.front();
    return (now.i_r + now.r_r - start.i_r - start.r_r) / static_cast<double>(n_);
}

namespace {

template <std::size_t Dim, typename Deriv>
std::array<double, Dim> rk4_step(const std::array<double, Dim>& y, double dt, Deriv&& deriv) {
    std::array<double, Dim> k1, k2, k3, k4, tmp;
    deriv(y, k1);
    for (std::size_t i = 0; i < Dim; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    deriv(tmp, k2);
    for (std::size_t i = 0; i < Dim; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    deriv(tmp, k3);
    for (std::size_t i = 0; i < Dim; ++i) tmp[i] = y[i] + dt * k3[i];
    deriv(tmp, k4);
    std::array<double, Dim> out;
    for (std::size_t i = 0; i < Dim; ++i)
        out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

} // namespace

DeterministicPath integrate_full(const ModelParams& params, const InitialConditions& init,
                                 const TimeGrid& grid) {
    const double n = static_cast<double>(init.n);
    const double negativity_floor = -1e-9 * n;
    const double conservation_tol = 1e-9 * n;

    const auto deriv = [&](const std::array<double, 6>& y, std::array<double, 6>& dy) {
        const double force = (params.beta_r * y[1] + params.beta_u * y[2]) * y[0] / n;
        dy[0] = -force;
        dy[1] = params.p * force - params.gamma * y[1];
        dy[2] = (1.0 - params.p) * force - params.gamma * y[2];
        dy[3] = params.gamma * y[1];
        dy[4] = params.gamma * y[2];
        dy[5] = y[1];
    };

    const CompartmentState start = initial_compartments(params, init);
    std::array<double, 6> y{start.s, start.i_r, start.i_u, start.r_r, start.r_u, 0.0};

    DeterministicPath path{grid, {}, {}, init.n};
    path.states.reserve(grid.points());
    path.ir_integral.reserve(grid.points());
    path.states.push_back(start);
    path.ir_integral.push_back(0.0);

    for (std::size_t step = 0; step < grid.steps(); ++step) {
        y = rk4_step(y, grid.dt(), deriv);
        for (std::size_t i = 0; i < 5; ++i)
            if (y[i] < negativity_floor)
                throw StepTooLarge("full system: compartment went negative; reduce dt");
        const double total = y[0] + y[1] + y[2] + y[3] + y[4];
        if (std::abs(total - n) > conservation_tol)
            throw StepTooLarge("full system: conservation broke; reduce dt");
        path.states.push_back(CompartmentState{y[0], y[1], y[2], y[3], y[4]});
        path.ir_integral.push_back(y[5]);
    }
    return path;
}

ReportedPath integrate_reduced(const ModelParams& params, const InitialConditions& init,
                               const TimeGrid& grid) {
    const double n = static_cast<double>(init.n);
    const double beta = effective_beta(params);
    // growth coefficient at zero depletion, and the depletion scale of exp{-(b/p) Q / n}
    const double growth = beta * (1.0 - params.pi) - beta / params.p * init.i0;
    const double depletion = beta / (params.p * n);
    const double negativity_floor = -1e-9 * n;

    initial_compartments(params, init); // feasibility check

    const auto deriv = [&](const std::array<double, 2>& y, std::array<double, 2>& dy) {
        dy[0] = y[0] * (growth * std::exp(-depletion * y[1]) - params.gamma);
        dy[1] = y[0];
    };

    std::array<double, 2> y{n * init.i0, 0.0};
    ReportedPath path{grid, {}, {}};
    path.i_r.reserve(grid.points());
    path.ir_integral.reserve(grid.points());
    path.i_r.push_back(y[0]);
    path.ir_integral.push_back(0.0);

    for (std::size_t step = 0; step < grid.steps(); ++step) {
        y = rk4_step(y, grid.dt(), deriv);
        if (y[0] < negativity_floor)
            throw StepTooLarge("reduced system: I_r went negative; reduce dt");
        path.i_r.push_back(y[0]);
        path.ir_integral.push_back(y[1]);
    }
    return path;
}

DeterministicPath reconstruct_compartments(const ReportedPath& reported,
                                           const ModelParams& params,
                                           const InitialConditions& init) {
    const double n = static_cast<double>(init.n);
    const double beta = effective_beta(params);
    const double depletion = beta / (params.p * n);
    const double ir0 = n * init.i0;
    const double s_prefactor = n * (1.0 - params.pi) - ir0 / params.p;
    const double unreported_ratio = (1.0 - params.p) / params.p;

    DeterministicPath path{reported.grid, {}, reported.ir_integral, init.n};
    path.states.reserve(reported.i_r.size());
    for (std::size_t i = 0; i < reported.i_r.size(); ++i) {
        const double ir = reported.i_r[i];
        CompartmentState state;
        state.s = s_prefactor * std::exp(-depletion * reported.ir_integral[i]);
        state.i_r = ir;
        state.i_u = unreported_ratio * ir;
        state.r_r = params.p * (n - state.s) - ir;
        state.r_u = unreported_ratio * state.r_r;
        path.states.push_back(state);
    }
    return path;
}

namespace {

void write_path_row(std::ostream& out, double t, const CompartmentState& s, double integral) {
    out << csv::format_double(t) << ',' << csv::format_double(s.s) << ','
        << csv::format_double(s.i_r) << ',' << csv::format_double(s.i_u) << ','
        << csv::format_double(s.r_r) << ',' << csv::format_double(s.r_u) << ','
        << csv::format_double(integral) << '\n';
}

} // namespace

void write_path_csv(const DeterministicPath& path, std::ostream& out, std::size_t stride) {
    if (stride == 0) throw InvalidParams("path csv: stride must be >= 1");
    out << "t,S,Ir,Iu,Rr,Ru,intIr\n";
    const std::size_t last = path.states.size() - 1;
    for (std::size_t i = 0; i < path.states.size(); i += stride)
        write_path_row(out, path.grid.time(i), path.states[i], path.ir_integral[i]);
    if (last % stride != 0) // always include the final point
        write_path_row(out, path.grid.time(last), path.states[last], path.ir_integral[last]);
}

void write_path_csv(const DeterministicPath& path, const std::string& file, std::size_t stride) {
    std::ofstream out(file);
    if (!out) throw IoError("cannot open for writing: " + file);
    write_path_csv(path, out, stride);
    if (!out.good()) throw IoError("write failed: " + file);
}

} // namespace sirkit
