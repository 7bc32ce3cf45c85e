#include "sirkit/likelihood.hpp"

#include <algorithm>
#include <cmath>

namespace sirkit {

LikelihoodInput LikelihoodInput::from_log(const EventLog& log, double horizon) {
    if (horizon < 0) horizon = log.end_time();

    LikelihoodInput input;
    input.n = static_cast<double>(log.n);
    input.horizon = horizon;

    double ir = log.initial_state.i_r;
    double n1 = 0;
    input.seg_times.push_back(0.0);
    input.seg_ir.push_back(ir);
    input.seg_n1.push_back(n1);

    for (const Event& event : log.events) {
        if (event.time > horizon) break;
        if (event.kind == EventKind::ReportedInfection) {
            input.event_times.push_back(event.time);
            input.ir_before.push_back(ir);
            input.n1_before.push_back(n1);
            ir += 1;
            n1 += 1;
        } else if (event.kind == EventKind::ReportedRecovery) {
            ir -= 1;
        } else {
            continue; // unreported events leave both I_r and N1 unchanged
        }
        input.seg_times.push_back(event.time);
        input.seg_ir.push_back(ir);
        input.seg_n1.push_back(n1);
    }
    input.validate();
    return input;
}

void LikelihoodInput::validate() const {
    if (!(n >= 1)) throw InvalidParams("likelihood input: population size must be >= 1");
    if (!(horizon >= 0)) throw InvalidParams("likelihood input: horizon must be >= 0");
    if (event_times.size() != ir_before.size() || event_times.size() != n1_before.size())
        throw InvalidParams("likelihood input: event arrays disagree in length");
    if (seg_times.size() != seg_ir.size() || seg_times.size() != seg_n1.size())
        throw InvalidParams("likelihood input: segment arrays disagree in length");
    if (seg_times.empty() || seg_times.front() != 0.0)
        throw InvalidParams("likelihood input: path must start at time 0");
    for (std::size_t i = 0; i < event_times.size(); ++i) {
        if (i > 0 && !(event_times[i] > event_times[i - 1]))
            throw InvalidParams("likelihood input: event times must increase");
        // a reported infection can arrive while the reported prevalence is zero
        // (unreported infectious drive the force); such data defeats the
        // approximation and is rejected at evaluation, not here
        if (!(ir_before[i] >= 0))
            throw InvalidParams("likelihood input: negative reported prevalence");
        if (n1_before[i] != static_cast<double>(i))
            throw InvalidParams("likelihood input: N1 must count the reported infection times");
    }
    if (!std::is_sorted(seg_times.begin(), seg_times.end()))
        throw InvalidParams("likelihood input: segment times must be sorted");
}

LikelihoodInput::PathIntegrals LikelihoodInput::path_integrals() const {
    double j1 = 0, j2 = 0;
    for (std::size_t j = 0; j < seg_times.size(); ++j) {
        const double begin = std::min(seg_times[j], horizon);
        const double end = j + 1 < seg_times.size() ? std::min(seg_times[j + 1], horizon) : horizon;
        const double dt = end - begin;
        if (dt <= 0) continue;
        j1 += seg_ir[j] * dt;
        j2 += seg_ir[j] * (seg_n1[j] / n) * dt;
    }
    return PathIntegrals{j1, j2};
}

namespace {

struct Terms {
    double n1;            // N1(horizon)
    double sum_log;       // sum_i log(beta (1/p) I_r(t_i-) A_i)
    double sum_inv_a;     // sum_i 1 / A_i
    double sum_nb_inv_a;  // sum_i N1bar(t_i-) / A_i
    double sum_inv_a2;    // sum_i 1 / A_i^2
    double sum_nb_inv_a2; // sum_i N1bar(t_i-) / A_i^2
    double sum_nb2_inv_a2;// sum_i N1bar(t_i-)^2 / A_i^2
    double j1;            // int I_r ds
    double j2;            // int I_r N1bar ds
    double i1;            // int I_r A ds = (1-pi) j1 - j2 / p
};

void check_point(const LikelihoodPoint& point) {
    if (!(point.beta_star > 0)) throw LogDomainError("likelihood: beta_star must be > 0");
    if (!(point.p > 0 && point.p < 1)) throw LogDomainError("likelihood: p must be in (0, 1)");
    if (!(point.pi >= 0 && point.pi < 1)) throw LogDomainError("likelihood: pi must be in [0, 1)");
}

Terms collect_terms(const LikelihoodInput& input, const LikelihoodPoint& point) {
    check_point(point);
    Terms t{};
    t.n1 = static_cast<double>(input.n1_total());
    for (std::size_t i = 0; i < input.event_times.size(); ++i) {
        const double nb = input.n1_before[i] / input.n;
        const double a = (1.0 - point.pi) - nb / point.p;
        if (!(a > 0))
            throw LogDomainError("likelihood: susceptible-fraction surrogate not positive at an event");
        if (!(input.ir_before[i] > 0))
            throw LogDomainError(
                "likelihood: reported infection with zero reported prevalence defeats the "
                "approximation");
        t.sum_log += std::log(point.beta_star / point.p * input.ir_before[i] * a);
        t.sum_inv_a += 1.0 / a;
        t.sum_nb_inv_a += nb / a;
        t.sum_inv_a2 += 1.0 / (a * a);
        t.sum_nb_inv_a2 += nb / (a * a);
        t.sum_nb2_inv_a2 += nb * nb / (a * a);
    }
    const auto ints = input.path_integrals();
    t.j1 = ints.j1;
    t.j2 = ints.j2;
    t.i1 = (1.0 - point.pi) * ints.j1 - ints.j2 / point.p;
    return t;
}

} // namespace

double log_likelihood(const LikelihoodInput& input, const LikelihoodPoint& point) {
    const Terms t = collect_terms(input, point);
    const double p = point.p;
    return t.n1 * std::log(p) + (1.0 - p) / p * t.n1 * std::log1p(-p) + t.sum_log / p -
           point.beta_star / p * t.i1;
}

LikelihoodGradient gradient(const LikelihoodInput& input, const LikelihoodPoint& point) {
    const Terms t = collect_terms(input, point);
    const double b = point.beta_star;
    const double p = point.p;
    const double pi = point.pi;

    LikelihoodGradient g;
    g.d_beta_star = t.n1 / (p * b) - t.i1 / p;
    g.d_pi = -t.sum_inv_a / p + b / p * t.j1;
    g.d_p = -t.n1 * std::log1p(-p) / (p * p) - t.sum_log / (p * p) +
            t.sum_nb_inv_a / (p * p * p) - t.n1 / (p * p) +
            b * (1.0 - pi) / (p * p) * t.j1 - 2.0 * b / (p * p * p) * t.j2;
    return g;
}

LikelihoodHessian hessian(const LikelihoodInput& input, const LikelihoodPoint& point) {
    const Terms t = collect_terms(input, point);
    const double b = point.beta_star;
    const double p = point.p;
    const double pi = point.pi;
    const double p2 = p * p, p3 = p2 * p, p4 = p3 * p, p5 = p4 * p;

    const double h_bb = -t.n1 / (p * b * b);
    const double h_bpi = t.j1 / p;
    const double h_bp = -t.n1 / (p2 * b) + (1.0 - pi) / p2 * t.j1 - 2.0 / p3 * t.j2;
    const double h_pipi = -t.sum_inv_a2 / p;
    const double h_pip = (1.0 - pi) / p2 * t.sum_inv_a2 - b / p2 * t.j1;
    const double h_pp = t.n1 / (p2 * (1.0 - p)) + 2.0 * t.n1 * std::log1p(-p) / p3 +
                        3.0 * t.n1 / p3 + 2.0 / p3 * t.sum_log - 4.0 / p4 * t.sum_nb_inv_a -
                        t.sum_nb2_inv_a2 / p5 - 2.0 * b * (1.0 - pi) / p3 * t.j1 +
                        6.0 * b / p4 * t.j2;

    return LikelihoodHessian{{{h_bb, h_bpi, h_bp}, {h_bpi, h_pipi, h_pip}, {h_bp, h_pip, h_pp}}};
}

double beta_star_mle(const LikelihoodInput& input, double p, double pi) {
    if (!(p > 0 && p <= 1)) throw LogDomainError("rate maximizer: p must be in (0, 1]");
    if (!(pi >= 0 && pi < 1)) throw LogDomainError("rate maximizer: pi must be in [0, 1)");
    if (input.n1_total() == 0) return 0.0;
    const auto ints = input.path_integrals();
    const double denominator = (1.0 - pi) * ints.j1 - ints.j2 / p;
    if (!(denominator > 0))
        throw DegenerateIntegral("rate maximizer: normalizing integral is not positive");
    return static_cast<double>(input.n1_total()) / denominator;
}

namespace {

double fd_step(double value, double rel_step) { return rel_step * std::max(std::abs(value), 1e-2); }

LikelihoodPoint shifted(const LikelihoodPoint& point, std::size_t coord, double delta) {
    LikelihoodPoint out = point;
    (coord == 0 ? out.beta_star : coord == 1 ? out.pi : out.p) += delta;
    return out;
}

} // namespace

LikelihoodGradient gradient_fd(const LikelihoodInput& input, const LikelihoodPoint& point,
                               double rel_step) {
    double component[3];
    for (std::size_t coord = 0; coord < 3; ++coord) {
        const double value = coord == 0 ? point.beta_star : coord == 1 ? point.pi : point.p;
        const double h = fd_step(value, rel_step);
        component[coord] = (log_likelihood(input, shifted(point, coord, h)) -
                            log_likelihood(input, shifted(point, coord, -h))) /
                           (2.0 * h);
    }
    return LikelihoodGradient{component[0], component[1], component[2]};
}

LikelihoodHessian hessian_fd(const LikelihoodInput& input, const LikelihoodPoint& point,
                             double rel_step) {
    LikelihoodHessian h_fd{};
    for (std::size_t coord = 0; coord < 3; ++coord) {
        const double value = coord == 0 ? point.beta_star : coord == 1 ? point.pi : point.p;
        const double h = fd_step(value, rel_step);
        const LikelihoodGradient hi = gradient(input, shifted(point, coord, h));
        const LikelihoodGradient lo = gradient(input, shifted(point, coord, -h));
        for (std::size_t other = 0; other < 3; ++other)
            h_fd[coord][other] = (hi[other] - lo[other]) / (2.0 * h);
    }
    return h_fd;
}

} // namespace sirkit
