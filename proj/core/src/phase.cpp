#include "resolute/phase.hpp"

#include <cmath>
#include <stdexcept>

#include "resolute/math.hpp"

namespace resolute {

const char* to_string(Channel c) {
    return c == Channel::Diff ? "diff" : "sum";
}

const char* to_string(Protocol p) {
    switch (p) {
        case Protocol::Ramsey: return "ramsey";
        case Protocol::HahnEcho: return "hahn";
        case Protocol::Resolute: return "resolute";
    }
    return "?";
}

double window_phase(const ToneSignal& tone, double t0, double t1) {
    const double len = t1 - t0;
    const double mid = 0.5 * (t0 + t1);
    const double phi = tone.phi.value_or(0.0);
    return tone.amplitude * len * std::sin(tone.omega * mid + phi) *
           sinc(0.5 * tone.omega * len);
}

namespace {

double require_phi(const ToneSignal& tone) {
    if (!tone.phi) {
        throw std::invalid_argument("tone phase must be fixed for phase evaluation");
    }
    return *tone.phi;
}

double integrate_window(const ToneSignal& tone, double t0, double t1, bool cosine_ref) {
    const double a = tone.amplitude;
    const double w = tone.omega;
    const double phi = *tone.phi;
    const double scale = std::max(a * (t1 - t0), 1e-300);
    auto f = cosine_ref
                 ? std::function<double(double)>([=](double t) { return a * std::cos(w * t + phi); })
                 : std::function<double(double)>([=](double t) { return a * std::sin(w * t + phi); });
    return integrate_adaptive(f, t0, t1, scale);
}

}  // namespace

double phase_integral(const ToneSignal& tone, const SequenceParams& seq, Protocol protocol,
                      Channel channel) {
    require_phi(tone);
    const double tau = seq.tau;
    switch (protocol) {
        case Protocol::Ramsey:
            return integrate_window(tone, 0.0, tau, /*cosine_ref=*/true);
        case Protocol::HahnEcho:
            return integrate_window(tone, 0.0, 0.5 * tau, false) -
                   integrate_window(tone, 0.5 * tau, tau, false);
        case Protocol::Resolute: {
            const double phi1 = integrate_window(tone, 0.0, 0.5 * tau, false);
            const double phi2 =
                integrate_window(tone, seq.t_corr + 0.5 * tau, seq.t_corr + tau, false);
            return channel == Channel::Diff ? phi1 - phi2 : phi1 + phi2;
        }
    }
    throw std::invalid_argument("unknown protocol");
}

double resolute_phase_closed(const ToneSignal& tone, const SequenceParams& seq, Channel channel) {
    const double phi = require_phi(tone);
    const double a = tone.amplitude;
    const double w = tone.omega;
    const double tau = seq.tau;
    const double half_wt = 0.5 * w * seq.t_corr;
    const double s = sinc(0.25 * w * tau);
    if (channel == Channel::Sum) {
        return a * tau * std::sin(half_wt + 0.5 * w * tau + phi) *
               std::cos(half_wt + 0.25 * w * tau) * s;
    }
    return -a * tau * s * std::sin(half_wt + 0.25 * w * tau) *
           std::cos(half_wt + 0.5 * w * tau + phi);
}

double ramsey_phase_closed(const ToneSignal& tone, double tau_r) {
    const double phi = require_phi(tone);
    return tone.amplitude * tau_r * std::cos(0.5 * tone.omega * tau_r + phi) *
           sinc(0.5 * tone.omega * tau_r);
}

double hahn_phase_closed(const ToneSignal& tone, double tau_he) {
    const double phi = require_phi(tone);
    const double x = 0.25 * tone.omega * tau_he;
    return -tone.amplitude * tau_he * std::sin(x) * sinc(x) *
           std::cos(0.5 * tone.omega * tau_he + phi);
}

double filter_function(Protocol protocol, Channel channel, const SequenceParams& seq,
                       double omega) {
    const double tau = seq.tau;
    const double a_tau = tau;  // per unit amplitude; scaled by caller via amplitude^2
    double envelope = 0.0;
    switch (protocol) {
        case Protocol::Ramsey:
            envelope = a_tau * sinc(0.5 * omega * tau);
            break;
        case Protocol::HahnEcho: {
            const double x = 0.25 * omega * tau;
            envelope = a_tau * std::sin(x) * sinc(x);
            break;
        }
        case Protocol::Resolute: {
            const double arg = 0.5 * omega * seq.t_corr + 0.25 * omega * tau;
            const double s = sinc(0.25 * omega * tau);
            envelope = channel == Channel::Sum ? a_tau * std::cos(arg) * s
                                               : a_tau * std::sin(arg) * s;
            break;
        }
    }
    return 0.5 * envelope * envelope;
}

FilterMap filter_map(const std::vector<double>& t_corr_grid, const std::vector<double>& omega_grid,
                     double tau, Channel channel, double amplitude) {
    if (t_corr_grid.empty() || omega_grid.empty()) {
        throw std::invalid_argument("filter_map: empty grid");
    }
    for (std::size_t i = 1; i < t_corr_grid.size(); ++i) {
        if (t_corr_grid[i] <= t_corr_grid[i - 1]) {
            throw std::invalid_argument("filter_map: t_corr grid must be strictly increasing");
        }
    }
    for (std::size_t j = 1; j < omega_grid.size(); ++j) {
        if (omega_grid[j] <= omega_grid[j - 1]) {
            throw std::invalid_argument("filter_map: omega grid must be strictly increasing");
        }
    }
    FilterMap map{t_corr_grid, omega_grid, {}};
    map.values.reserve(t_corr_grid.size() * omega_grid.size());
    const double a2 = amplitude * amplitude;
    SequenceParams seq;
    seq.tau = tau;
    seq.n_reps = 1;
    for (double tc : t_corr_grid) {
        seq.t_corr = tc;
        for (double w : omega_grid) {
            map.values.push_back(a2 * filter_function(Protocol::Resolute, channel, seq, w));
        }
    }
    return map;
}

}  // namespace resolute
