#pragma once

#include "resolute/phase.hpp"
#include "resolute/types.hpp"

namespace resolute {

/// Multiplicative coherence/population survival over one block.
struct DecayFactors {
    double d_sense = 1.0;  ///< exp(-tau/T2p), coherence over both sensing windows
    double d_store = 1.0;  ///< exp(-t_corr/T1), population over the correlation window

    double product() const { return d_sense * d_store; }
};

/// Decay factors for a sequence run on a given sensor.
DecayFactors decay_factors(const SensorParams& sensor, const SequenceParams& seq);

/// Ground-state probability after one phase-cycled block.
///
/// Bloch propagation with ideal instantaneous pulses: first pi/2 about x,
/// middle pulses about the block's axis, transverse components erased and the
/// longitudinal component scaled by d_store during t_corr, coherence scaled
/// by d_sense over the sensing windows. With d = d_sense*d_store:
///   P0(X, +/-) = (1 +/- C d cos(phi1) cos(phi2)) / 2
///   P0(Y, +/-) = (1 -/+ C d sin(phi1) sin(phi2)) / 2
/// These closed forms are the contract; the rotation conventions behind them
/// are fixed.
double propagate_block(const BlockSpec& block, double phi1, double phi2,
                       const DecayFactors& decay, double contrast);

struct ChannelSignals {
    double s_plus = 0.0;   ///< C d cos(phi1 + phi2) for ideal inputs
    double s_minus = 0.0;  ///< C d cos(phi1 - phi2) for ideal inputs
    double s_x = 0.0;      ///< X-block pair alone: C d cos(phi1) cos(phi2)
};

/// Signed block combinations, normalized so ideal inputs give
/// s_minus = C d cos(phi1 - phi2) and s_plus = C d cos(phi1 + phi2).
ChannelSignals combine_channels(double p_xplus, double p_xminus, double p_yplus,
                                double p_yminus);

/// Analytic noise-decay envelope of the channel signal at sensing time tau:
/// Sum -> exp(-tau^2/alpha_corr), Diff -> exp(-tau^2/(4*alpha_fast)).
double analytic_envelope(Channel channel, double tau, const NoiseParams& noise);

/// Ramsey reference envelope exp(-gamma^2 tau^2 / (4 alpha)) for a Gaussian
/// field bath with inverse variance alpha.
double ramsey_envelope(double tau, double gamma, double alpha);

/// Oscillation amplitude of the Diff channel when the target-spin flip
/// succeeds with probability p per repetition: the per-repetition mean
/// (1-p) + p*cos(w_dd*tau) swings by C*(1 + (2p-1))/2 around its offset.
double dipolar_contrast(double p_flip, double contrast);

}  // namespace resolute
