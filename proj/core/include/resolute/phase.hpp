#pragma once

#include <cstdint>
#include <vector>

#include "resolute/types.hpp"

namespace resolute {

/// Phase combination formed from the four phase-cycled blocks.
/// Diff is Phi1 - Phi2 (the S- signal), Sum is Phi1 + Phi2 (the S+ signal).
enum class Channel : std::uint8_t { Diff, Sum };

enum class Protocol : std::uint8_t { Ramsey, HahnEcho, Resolute };

const char* to_string(Channel c);
const char* to_string(Protocol p);

// Sensing windows and signed combinations per protocol:
//   Ramsey:    one window [0, tau]
//   Hahn Echo: + on [0, tau/2], - on [tau/2, tau]
//   Resolute:  window 1 = [0, tau/2], window 2 = [t_corr+tau/2, t_corr+tau],
//              combined per channel.
//
// The tone phase phi is referenced per protocol so that each closed form
// below is the exact integral of its defining window pattern: Ramsey
// integrates A*cos(omega*t + phi), Hahn Echo and the correlation sequence
// integrate A*sin(omega*t + phi). Phase-averaged quantities do not depend
// on the reference.

/// Phase accumulated from the tone over one window [t0, t1] of the
/// sine-referenced integrand (closed form).
double window_phase(const ToneSignal& tone, double t0, double t1);

/// Numerical quadrature of the protocol's window pattern; the oracle every
/// closed form must match. Requires tone.phi.
double phase_integral(const ToneSignal& tone, const SequenceParams& seq, Protocol protocol,
                      Channel channel);

/// Closed-form correlation-sequence phase for either channel. Requires tone.phi.
double resolute_phase_closed(const ToneSignal& tone, const SequenceParams& seq, Channel channel);

/// Closed-form Ramsey phase: A*tau_r*cos(omega*tau_r/2 + phi)*sinc(omega*tau_r/2).
double ramsey_phase_closed(const ToneSignal& tone, double tau_r);

/// Closed-form Hahn-Echo phase:
/// -A*tau*sin(omega*tau/4)*sinc(omega*tau/4)*cos(omega*tau/2 + phi).
double hahn_phase_closed(const ToneSignal& tone, double tau_he);

/// Phase-averaged mean-square accumulated phase <Phi^2>_phi (rad^2):
/// half the squared phi-independent envelope of the protocol's phase.
double filter_function(Protocol protocol, Channel channel, const SequenceParams& seq,
                       double omega);

/// filter_function sampled on a (t_corr, omega) grid at fixed tau.
/// Row-major: value(i, j) = rows t_corr[i], columns omega[j].
struct FilterMap {
    std::vector<double> t_corr;  ///< s
    std::vector<double> omega;   ///< rad/s
    std::vector<double> values;  ///< row-major, size t_corr.size() * omega.size()

    double at(std::size_t i, std::size_t j) const { return values[i * omega.size() + j]; }
};

FilterMap filter_map(const std::vector<double>& t_corr_grid, const std::vector<double>& omega_grid,
                     double tau, Channel channel, double amplitude = 1.0);

}  // namespace resolute
