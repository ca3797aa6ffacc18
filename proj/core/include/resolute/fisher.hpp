#pragma once

#include <string>
#include <vector>

#include "resolute/block.hpp"
#include "resolute/phase.hpp"
#include "resolute/types.hpp"

namespace resolute {

/// Ground-state probability of one block and its frequency derivative.
struct BlockProbability {
    double p0 = 0.0;
    double dp0_domega = 0.0;  ///< dP0/d(omega), units s
};

/// Composes the per-window tone phases with the block closed form and its
/// analytic omega-derivative. The tone's phi must be fixed.
BlockProbability block_probability(const BlockSpec& block, double omega, const ToneSignal& tone,
                                   const SequenceParams& seq, const SensorParams& sensor);

/// Fisher information of one binary outcome: (dP0)^2 / (P0 (1 - P0)).
/// Throws on a degenerate outcome (P0 at 0 or 1 with a non-zero derivative).
double fisher_single(double p0, double dp0);

/// Four-block Fisher information at a fixed signal phase phi.
double fisher_sequence_at_phi(double omega, const ToneSignal& tone, const SequenceParams& seq,
                              const SensorParams& sensor, double phi);

/// Phase-averaged exact Fisher information of one four-block sequence:
/// the mean of fisher_sequence_at_phi over a deterministic uniform phi grid.
double fisher_exact_sequence(double omega, const ToneSignal& tone, const SequenceParams& seq,
                             const SensorParams& sensor, int n_phi = 64);

/// Closed-form approximation:
/// 8 A^2 tau^2 T~^2 exp(-2 tau/T2p - t_corr/T1) cos^2(omega T~ + omega tau/4 + phi)
///   * sinc^2(omega tau / 4),  with T~ = t_corr + tau/2.
double fisher_approx(double omega, const ToneSignal& tone, const SequenceParams& seq,
                     const SensorParams& sensor, double phi);

/// fisher_approx averaged over phi (cos^2 -> 1/2).
double fisher_approx_phi_avg(double omega, const ToneSignal& tone, const SequenceParams& seq,
                             const SensorParams& sensor);

struct ExperimentInfo {
    double total = 0.0;          ///< n * phi-averaged exact sequence information
    double eq_closed = 0.0;      ///< closed linear-accumulation estimate (diagnostic only)
    double duration = 0.0;       ///< n * 4 * (tau + t_corr + overhead), seconds
};

/// Information accumulated over n identical sequences.
ExperimentInfo fisher_experiment(double omega, const ToneSignal& tone, const SequenceParams& seq,
                                 const SensorParams& sensor, int n_sequences);

/// Rayleigh-style feasibility: 1/i <= 4/omega^exponent, with the CRB
/// Delta-omega^2 = 1/i. Closed boundary counts as feasible.
bool rayleigh_feasible(double i_total, double omega, double exponent = 2.0);

/// Parameters of the protocol-comparison study.
struct CompareParams {
    double t2_p = 5e-6;
    double t2_hahn = 5e-6;
    double t2_star = 0.5e-6;
    double t1 = 1000e-6;
    double overhead = 3e-6;
    int n_sequences = 500;
    double amplitude = 1e6;     ///< rad/s (1 rad/us)
    double contrast = 1.0;
    double tau_resolute = 5e-6;
    int n_phi = 64;
    double rayleigh_exponent = 2.0;
};

/// Per-frequency information totals for an equal-duration experiment.
struct FisherReport {
    std::vector<double> omega;        ///< rad/s
    std::vector<double> fi_resolute;  ///< s^2
    std::vector<double> fi_hahn;
    std::vector<double> fi_ramsey;
    std::vector<double> crb_resolute; ///< 1/FI where FI > 0, +inf otherwise
    std::vector<double> crb_hahn;
    std::vector<double> crb_ramsey;
    std::vector<bool> feasible;       ///< best protocol passes the Rayleigh bound
    CompareParams params;
};

/// Exact-information comparison of the three protocols on an omega grid.
/// The correlation time is matched to 2*pi/omega (capped below T1), the
/// Hahn-Echo time to min(2*pi/omega, T2), the Ramsey time to T2*; Hahn and
/// Ramsey repetitions fill the same wall-clock budget as the N sequences.
FisherReport compare_protocols(const std::vector<double>& omega_grid, const CompareParams& params);

struct OptimizeBounds {
    double tau_min = 0.5e-6;
    double tau_max = 20e-6;
    double t_corr_min = 1e-6;
    double t_corr_max = 900e-6;
};

struct Ridge {
    double t_corr = 0.0;
    double info = 0.0;
};

struct OptimizeResult {
    double tau = 0.0;
    double t_corr = 0.0;
    double info = 0.0;
    std::vector<Ridge> ridges;          ///< distinct local maxima in t_corr at the best tau
    std::vector<std::string> warnings;
};

/// Coarse log-grid search over (tau, t_corr) on the phi-averaged exact
/// information, refined by golden-section passes on each axis.
OptimizeResult optimize_sequence(double omega, const ToneSignal& tone, const SensorParams& sensor,
                                 const OptimizeBounds& bounds, int n_phi = 32);

}  // namespace resolute
