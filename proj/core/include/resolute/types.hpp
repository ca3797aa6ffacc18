#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "resolute/units.hpp"

namespace resolute {

/// Probe coherence/relaxation parameters. All times in seconds.
struct SensorParams {
    double t1 = 500e-6;          ///< relaxation time T1
    double t2_star = 0.38e-6;    ///< Ramsey dephasing time T2*
    double t2_hahn = 4.3e-6;     ///< Hahn-Echo coherence time T2
    double t2_p = 5.1e-6;        ///< correlation-sequence effective coherence time T2^p
    double contrast = 0.3;       ///< readout contrast C in (0, 1]
    double overhead = 3e-6;      ///< per-measurement dead time
    double gamma_nv = two_pi * gamma_electron_hz_per_gauss;  ///< rad s^-1 G^-1
};

/// Pure tone A*sin(omega*t + phi). Amplitude is an angular phase-accumulation
/// rate (rad/s). An absent phi means "drawn uniformly per sequence".
struct ToneSignal {
    double amplitude = 0.0;            ///< A (rad/s)
    double omega = 0.0;                ///< angular frequency (rad/s)
    std::optional<double> phi{};       ///< signal phase in [0, 2*pi), optional
};

/// Static phase-rate contributions (rad/s each).
struct DcTerms {
    double detuning = 0.0;   ///< gamma * dB
    double hyperfine = 0.0;  ///< A^N
    double dipolar = 0.0;    ///< omega_dd, >= 0

    double sum() const { return detuning + hyperfine + dipolar; }
};

/// Gaussian noise-bath scales. alpha_* are inverse-variance scales with
/// units of time^2: the slow (shared-between-windows) bath decays the Sum
/// channel as exp(-tau^2/alpha_corr), the fast (per-window) bath decays the
/// Diff channel as exp(-tau^2/(4*alpha_fast)).
struct NoiseParams {
    double alpha_corr = 1e-12;   ///< alpha_1 (s^2)
    double alpha_fast = 1e-12;   ///< alpha_2 (s^2)
    std::uint64_t seed = 0;
};

/// Timing of one correlation block: two tau/2 sensing windows separated by
/// t_corr, repeated n_reps times per sweep point.
struct SequenceParams {
    double tau = 5e-6;       ///< total sensing time (s), split tau/2 + tau/2
    double t_corr = 100e-6;  ///< correlation time (s)
    int n_reps = 500;        ///< repetitions per point
};

enum class MiddlePhase : std::uint8_t { X, Y };

/// One of the four phase-cycled blocks: middle-pulse axis and readout sign.
struct BlockSpec {
    MiddlePhase middle_phase = MiddlePhase::X;
    int readout_sign = +1;  ///< +1 or -1

    friend bool operator==(const BlockSpec&, const BlockSpec&) = default;
};

/// The four blocks of one full measurement, in canonical order
/// (X,+), (X,-), (Y,+), (Y,-).
std::array<BlockSpec, 4> canonical_blocks();

/// Target electron spin addressed during the correlation window.
struct TargetSpin {
    double larmor_freq = 0.0;  ///< Hz
    double dipolar = 0.0;      ///< omega_dd (rad/s), >= 0
    double line_sigma = 0.0;   ///< Gaussian inhomogeneous linewidth sigma (Hz)
    double rabi = 0.0;         ///< Rabi frequency nu (Hz)
};

/// Validation. Each check throws std::invalid_argument naming the first
/// violated invariant; values pass through unchanged.
const SensorParams& validate_sensor(const SensorParams& p);
const ToneSignal& validate_tone(const ToneSignal& t);
const DcTerms& validate_dc(const DcTerms& d);
const NoiseParams& validate_noise(const NoiseParams& n);
const SequenceParams& validate_sequence(const SequenceParams& s);
const TargetSpin& validate_target(const TargetSpin& t);

/// Advisory conditions that do not stop a run: t_corr <= tau, and, when a
/// sensor is supplied at the use site, t_corr >= T1.
std::vector<std::string> sequence_warnings(const SequenceParams& s);
std::vector<std::string> sequence_warnings(const SequenceParams& s, const SensorParams& sensor);

enum class Species : std::uint8_t { C13, Electron };

/// Larmor frequency (Hz) at a given bias field (Gauss).
double larmor_frequency(double field_gauss, Species species);

/// Effective period T~ = t_corr + tau/2 (s).
double effective_period(const SequenceParams& seq);

}  // namespace resolute
