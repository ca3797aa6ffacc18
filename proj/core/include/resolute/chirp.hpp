#pragma once

#include <cstdint>
#include <vector>

#include "resolute/types.hpp"

namespace resolute {

/// Adiabaticity factor Q = 2 pi nu^2 t_p / span.
double q_factor(double nu_hz, double t_p_s, double span_hz);

/// Frequency span that yields adiabaticity q at Rabi frequency nu.
double span_from_q(double nu_hz, double t_p_s, double q);

/// Linear frequency sweep over t_p. Exactly one of {span, q} is given at
/// construction; the other is derived from the Rabi frequency.
struct ChirpParams {
    double t_p = 2e-6;             ///< pulse duration (s)
    double span = 0.0;             ///< frequency span (Hz)
    double q = 0.0;                ///< adiabaticity factor
    double center_detuning = 0.0;  ///< sweep center minus nominal resonance (Hz)

    static ChirpParams from_span(double t_p_s, double span_hz, double nu_hz,
                                 double center_detuning_hz = 0.0);
    static ChirpParams from_q(double t_p_s, double q, double nu_hz,
                              double center_detuning_hz = 0.0);
};

/// Named parameter sets used throughout: the 2 us / Q = 5 pulse of the
/// contrast study and the 1.6 us / 2.5 MHz spectroscopy pulse.
ChirpParams chirp_preset_contrast(double nu_hz);
ChirpParams chirp_preset_spectroscopy(double nu_hz);

/// Spin-flip probability of a two-level spin detuned by `detuning_hz` from
/// the sweep center, from fixed-step 4th-order integration of the sweep.
/// Step size <= 1/(50 * max(nu, span)).
double lz_flip_probability(const ChirpParams& chirp, double nu_hz, double detuning_hz);

/// Final state norm error of the last lz_flip_probability call on this
/// thread (unitarity diagnostic).
double lz_last_norm_error();

/// Gauss-Hermite average of lz_flip_probability over a Gaussian detuning
/// distribution with standard deviation line_sigma (n_nodes >= 32).
double ensemble_flip(const ChirpParams& chirp, double nu_hz, double line_sigma_hz,
                     int n_nodes = 64);

struct QContrastPoint {
    double q = 0.0;
    double span = 0.0;       ///< Hz
    double p_avg = 0.0;      ///< ensemble-averaged flip probability
    double contrast = 0.0;   ///< predicted Diff-channel dipolar contrast
};

/// Predicted dipolar-oscillation contrast for each adiabaticity at fixed
/// pulse duration, via ensemble_flip and the per-repetition flip scaling.
std::vector<QContrastPoint> contrast_vs_q(double t_p_s, const std::vector<double>& q_list,
                                          double nu_hz, double line_sigma_hz,
                                          double readout_contrast = 1.0, int n_nodes = 64);

enum class PulseKind : std::uint8_t { Pi, Chirp };

struct DeerScanPoint {
    double freq = 0.0;    ///< drive center frequency (Hz)
    double signal = 0.0;  ///< normalized signal, 1 - contrast*p_avg
    double p_avg = 0.0;
};

/// Simulated resonance scan: contrast dip versus drive center frequency,
/// averaged over the target's Gaussian line. A pi pulse uses the rectangular
/// resonance profile at duration 1/(2*rabi); a chirp uses the sweep integral.
std::vector<DeerScanPoint> deer_frequency_scan(const std::vector<double>& freq_grid_hz,
                                               PulseKind kind, const TargetSpin& target,
                                               const ChirpParams& chirp = {},
                                               double readout_contrast = 1.0, int n_nodes = 64);

/// Resonance profile of a rectangular pulse of duration t_pulse at detuning
/// delta: (nu^2/(nu^2+delta^2)) sin^2(pi t sqrt(nu^2+delta^2)).
double rect_pulse_flip_probability(double nu_hz, double t_pulse_s, double detuning_hz);

}  // namespace resolute
