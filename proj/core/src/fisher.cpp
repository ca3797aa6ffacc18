#include "resolute/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "resolute/math.hpp"

namespace resolute {

namespace {

struct WindowPhases {
    double w1, dw1;
    double w2, dw2;
};

/// Per-window tone phases of the correlation sequence and their
/// omega-derivatives, at signal phase phi.
WindowPhases window_phases(double omega, const ToneSignal& tone, const SequenceParams& seq,
                           double phi) {
    const double a = tone.amplitude;
    const double tau = seq.tau;
    const double half = 0.5 * a * tau;
    const double x = 0.25 * omega * tau;
    const double sx = sinc(x);
    const double dsx = dsinc(x);

    const double c1 = 0.25 * tau;                  // window-1 center
    const double c2 = seq.t_corr + 0.75 * tau;     // window-2 center
    const double arg1 = omega * c1 + phi;
    const double arg2 = omega * c2 + phi;

    WindowPhases wp;
    wp.w1 = half * std::sin(arg1) * sx;
    wp.dw1 = half * (c1 * std::cos(arg1) * sx + std::sin(arg1) * dsx * 0.25 * tau);
    wp.w2 = half * std::sin(arg2) * sx;
    wp.dw2 = half * (c2 * std::cos(arg2) * sx + std::sin(arg2) * dsx * 0.25 * tau);
    return wp;
}

double grid_phi(int k, int n) { return two_pi * static_cast<double>(k) / static_cast<double>(n); }

}  // namespace

BlockProbability block_probability(const BlockSpec& block, double omega, const ToneSignal& tone,
                                   const SequenceParams& seq, const SensorParams& sensor) {
    if (!tone.phi) throw std::invalid_argument("tone phase must be fixed for block_probability");
    const WindowPhases wp = window_phases(omega, tone, seq, *tone.phi);
    const double cd = sensor.contrast * decay_factors(sensor, seq).product();
    const double s = static_cast<double>(block.readout_sign);

    BlockProbability bp;
    if (block.middle_phase == MiddlePhase::X) {
        bp.p0 = 0.5 * (1.0 + s * cd * std::cos(wp.w1) * std::cos(wp.w2));
        bp.dp0_domega = -0.5 * s * cd *
                        (std::sin(wp.w1) * std::cos(wp.w2) * wp.dw1 +
                         std::cos(wp.w1) * std::sin(wp.w2) * wp.dw2);
    } else {
        bp.p0 = 0.5 * (1.0 - s * cd * std::sin(wp.w1) * std::sin(wp.w2));
        bp.dp0_domega = -0.5 * s * cd *
                        (std::cos(wp.w1) * std::sin(wp.w2) * wp.dw1 +
                         std::sin(wp.w1) * std::cos(wp.w2) * wp.dw2);
    }
    return bp;
}

double fisher_single(double p0, double dp0) {
    if (dp0 == 0.0) return 0.0;
    if (p0 <= 0.0 || p0 >= 1.0) {
        throw std::domain_error("degenerate outcome: P0 at {0,1} with non-zero derivative");
    }
    return dp0 * dp0 / (p0 * (1.0 - p0));
}

double fisher_sequence_at_phi(double omega, const ToneSignal& tone, const SequenceParams& seq,
                              const SensorParams& sensor, double phi) {
    ToneSignal t = tone;
    t.phi = phi;
    double total = 0.0;
    for (const BlockSpec& block : canonical_blocks()) {
        const BlockProbability bp = block_probability(block, omega, t, seq, sensor);
        total += fisher_single(bp.p0, bp.dp0_domega);
    }
    return total;
}

double fisher_exact_sequence(double omega, const ToneSignal& tone, const SequenceParams& seq,
                             const SensorParams& sensor, int n_phi) {
    if (n_phi < 1) throw std::invalid_argument("n_phi must be at least 1");
    double acc = 0.0;
    for (int k = 0; k < n_phi; ++k) {
        acc += fisher_sequence_at_phi(omega, tone, seq, sensor, grid_phi(k, n_phi));
    }
    return acc / n_phi;
}

double fisher_approx(double omega, const ToneSignal& tone, const SequenceParams& seq,
                     const SensorParams& sensor, double phi) {
    const double a = tone.amplitude;
    const double tau = seq.tau;
    const double t_eff = effective_period(seq);
    const double env = std::exp(-2.0 * tau / sensor.t2_p - seq.t_corr / sensor.t1);
    const double c = std::cos(omega * t_eff + 0.25 * omega * tau + phi);
    const double s = sinc(0.25 * omega * tau);
    return 8.0 * a * a * tau * tau * t_eff * t_eff * env * c * c * s * s;
}

double fisher_approx_phi_avg(double omega, const ToneSignal& tone, const SequenceParams& seq,
                             const SensorParams& sensor) {
    const double a = tone.amplitude;
    const double tau = seq.tau;
    const double t_eff = effective_period(seq);
    const double env = std::exp(-2.0 * tau / sensor.t2_p - seq.t_corr / sensor.t1);
    const double s = sinc(0.25 * omega * tau);
    return 4.0 * a * a * tau * tau * t_eff * t_eff * env * s * s;
}

ExperimentInfo fisher_experiment(double omega, const ToneSignal& tone, const SequenceParams& seq,
                                 const SensorParams& sensor, int n_sequences) {
    if (n_sequences < 1) throw std::invalid_argument("n_sequences must be at least 1");
    const double per_sequence = fisher_exact_sequence(omega, tone, seq, sensor);
    const double t_eff = effective_period(seq);
    const double t_tot = 4.0 * n_sequences * t_eff;
    const double a = tone.amplitude;
    const double tau = seq.tau;

    ExperimentInfo info;
    info.total = n_sequences * per_sequence;
    // Printed linear-accumulation form, kept as a diagnostic ratio only.
    info.eq_closed = 16.0 * a * a * tau * tau * t_eff * t_tot *
                     std::exp(-2.0 * tau / sensor.t2_p - 2.0 * seq.t_corr / sensor.t1);
    info.duration = n_sequences * 4.0 * (seq.tau + seq.t_corr + sensor.overhead);
    return info;
}

bool rayleigh_feasible(double i_total, double omega, double exponent) {
    if (i_total < 0.0) throw std::invalid_argument("information must be non-negative");
    if (i_total == 0.0) return false;
    if (std::isinf(i_total)) return true;
    return 1.0 / i_total <= 4.0 / std::pow(omega, exponent);
}

namespace {

/// Phase-averaged single-measurement information for a protocol whose
/// outcome is P0 = (1 + C d cos(Phi(omega, phi))) / 2.
double envelope_protocol_info(double omega, double amplitude, double tau, double cd,
                              Protocol protocol, int n_phi) {
    double acc = 0.0;
    for (int k = 0; k < n_phi; ++k) {
        const double phi = grid_phi(k, n_phi);
        double big_phi = 0.0;
        double dbig_phi = 0.0;
        if (protocol == Protocol::Ramsey) {
            const double x = 0.5 * omega * tau;
            const double arg = x + phi;
            big_phi = amplitude * tau * std::cos(arg) * sinc(x);
            dbig_phi = amplitude * tau * 0.5 * tau *
                       (-std::sin(arg) * sinc(x) + std::cos(arg) * dsinc(x));
        } else {
            const double x = 0.25 * omega * tau;
            const double arg = 0.5 * omega * tau + phi;
            big_phi = -amplitude * tau * std::sin(x) * sinc(x) * std::cos(arg);
            dbig_phi = -amplitude * tau *
                       (0.25 * tau * (std::cos(x) * sinc(x) + std::sin(x) * dsinc(x)) *
                            std::cos(arg) -
                        std::sin(x) * sinc(x) * std::sin(arg) * 0.5 * tau);
        }
        const double p0 = 0.5 * (1.0 + cd * std::cos(big_phi));
        const double dp0 = -0.5 * cd * std::sin(big_phi) * dbig_phi;
        acc += fisher_single(p0, dp0);
    }
    return acc / n_phi;
}

}  // namespace

FisherReport compare_protocols(const std::vector<double>& omega_grid,
                               const CompareParams& params) {
    if (omega_grid.empty()) throw std::invalid_argument("compare_protocols: empty grid");
    for (std::size_t i = 1; i < omega_grid.size(); ++i) {
        if (omega_grid[i] <= omega_grid[i - 1]) {
            throw std::invalid_argument("compare_protocols: grid must be strictly increasing");
        }
    }

    SensorParams sensor;
    sensor.t1 = params.t1;
    sensor.t2_star = params.t2_star;
    sensor.t2_hahn = params.t2_hahn;
    sensor.t2_p = params.t2_p;
    sensor.contrast = params.contrast;
    sensor.overhead = params.overhead;

    ToneSignal tone;
    tone.amplitude = params.amplitude;

    FisherReport report;
    report.omega = omega_grid;
    report.params = params;
    const double inf = std::numeric_limits<double>::infinity();
    auto crb = [&](double fi) { return fi > 0.0 ? 1.0 / fi : inf; };

    for (double omega : omega_grid) {
        tone.omega = omega;
        const double period = two_pi / omega;

        SequenceParams seq;
        seq.tau = params.tau_resolute;
        seq.t_corr = std::min(period, 0.999 * params.t1);
        seq.n_reps = 1;
        const double fi_res =
            params.n_sequences * fisher_exact_sequence(omega, tone, seq, sensor, params.n_phi);
        const double budget =
            params.n_sequences * 4.0 * (seq.tau + seq.t_corr + params.overhead);

        const double tau_h = std::min(period, params.t2_hahn);
        const double d_h = params.contrast * std::exp(-tau_h / params.t2_hahn);
        const double n_h = budget / (tau_h + params.overhead);
        const double fi_hahn = n_h * envelope_protocol_info(omega, params.amplitude, tau_h, d_h,
                                                            Protocol::HahnEcho, params.n_phi);

        const double tau_r = params.t2_star;
        const double d_r = params.contrast * std::exp(-tau_r / params.t2_star);
        const double n_r = budget / (tau_r + params.overhead);
        const double fi_ramsey = n_r * envelope_protocol_info(omega, params.amplitude, tau_r, d_r,
                                                              Protocol::Ramsey, params.n_phi);

        report.fi_resolute.push_back(fi_res);
        report.fi_hahn.push_back(fi_hahn);
        report.fi_ramsey.push_back(fi_ramsey);
        report.crb_resolute.push_back(crb(fi_res));
        report.crb_hahn.push_back(crb(fi_hahn));
        report.crb_ramsey.push_back(crb(fi_ramsey));
        const double best = std::max({fi_res, fi_hahn, fi_ramsey});
        report.feasible.push_back(rayleigh_feasible(best, omega, params.rayleigh_exponent));
    }
    return report;
}

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    const double l0 = std::log(lo);
    const double l1 = std::log(hi);
    for (int i = 0; i < n; ++i) {
        g[i] = std::exp(l0 + (l1 - l0) * i / static_cast<double>(n - 1));
    }
    return g;
}

template <typename F>
double golden_section_max(F f, double lo, double hi, int iters = 60) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

OptimizeResult optimize_sequence(double omega, const ToneSignal& tone, const SensorParams& sensor,
                                 const OptimizeBounds& bounds, int n_phi) {
    if (!(bounds.tau_min > 0.0) || !(bounds.t_corr_min > 0.0) ||
        bounds.tau_max < bounds.tau_min || bounds.t_corr_max < bounds.t_corr_min) {
        throw std::invalid_argument("optimize_sequence: empty feasible region");
    }
    if (bounds.t_corr_max > sensor.t1) {
        throw std::invalid_argument("optimize_sequence: t_corr bound exceeds T1");
    }

    OptimizeResult result;
    if (bounds.tau_min >= bounds.t_corr_max) {
        result.warnings.push_back("bounds force tau >= t_corr everywhere");
    }

    auto info_at = [&](double tau, double t_corr) {
        SequenceParams seq;
        seq.tau = tau;
        seq.t_corr = t_corr;
        seq.n_reps = 1;
        return fisher_exact_sequence(omega, tone, seq, sensor, n_phi);
    };

    const bool tau_fixed = bounds.tau_max == bounds.tau_min;
    const bool t_corr_fixed = bounds.t_corr_max == bounds.t_corr_min;
    const auto tau_grid = tau_fixed ? std::vector<double>{bounds.tau_min}
                                    : log_grid(bounds.tau_min, bounds.tau_max, 40);
    // The t_corr landscape oscillates with period 2*pi/omega; sample finely
    // enough to see every ridge inside the bounds.
    const double span = bounds.t_corr_max - bounds.t_corr_min;
    const int n_tc = t_corr_fixed
                         ? 1
                         : std::min(4096, std::max(64, static_cast<int>(
                                                       8.0 * span * omega / two_pi)));
    std::vector<double> tc_grid(n_tc);
    for (int i = 0; i < n_tc; ++i) {
        tc_grid[i] = n_tc == 1 ? bounds.t_corr_min
                               : bounds.t_corr_min + span * i / static_cast<double>(n_tc - 1);
    }

    double best = -1.0;
    double best_tau = tau_grid.front();
    double best_tc = tc_grid.front();
    for (double tau : tau_grid) {
        for (double tc : tc_grid) {
            const double v = info_at(tau, tc);
            if (v > best) {
                best = v;
                best_tau = tau;
                best_tc = tc;
            }
        }
    }

    for (int round = 0; round < 2; ++round) {
        if (!tau_fixed) {
            best_tau = golden_section_max([&](double t) { return info_at(t, best_tc); },
                                          std::max(bounds.tau_min, best_tau * 0.5),
                                          std::min(bounds.tau_max, best_tau * 2.0));
        }
        if (!t_corr_fixed) {
            const double half_period = pi / omega;
            best_tc = golden_section_max([&](double t) { return info_at(best_tau, t); },
                                         std::max(bounds.t_corr_min, best_tc - half_period),
                                         std::min(bounds.t_corr_max, best_tc + half_period));
        }
    }
    result.tau = best_tau;
    result.t_corr = best_tc;
    result.info = info_at(best_tau, best_tc);

    // Ridge census along t_corr at the optimal tau.
    std::vector<double> vals(tc_grid.size());
    for (std::size_t i = 0; i < tc_grid.size(); ++i) vals[i] = info_at(best_tau, tc_grid[i]);
    const double floor_level = 0.5 * result.info;
    for (std::size_t i = 0; i < tc_grid.size(); ++i) {
        const bool left_ok = i == 0 || vals[i] >= vals[i - 1];
        const bool right_ok = i + 1 == vals.size() || vals[i] > vals[i + 1];
        if (left_ok && right_ok && vals[i] >= floor_level) {
            result.ridges.push_back({tc_grid[i], vals[i]});
        }
    }
    return result;
}

}  // namespace resolute
