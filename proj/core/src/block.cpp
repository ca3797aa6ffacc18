#include "resolute/block.hpp"

#include <cmath>
#include <stdexcept>

namespace resolute {

DecayFactors decay_factors(const SensorParams& sensor, const SequenceParams& seq) {
    return {std::exp(-seq.tau / sensor.t2_p), std::exp(-seq.t_corr / sensor.t1)};
}

double propagate_block(const BlockSpec& block, double phi1, double phi2,
                       const DecayFactors& decay, double contrast) {
    const double d = decay.product();
    const double signal = block.middle_phase == MiddlePhase::X
                              ? std::cos(phi1) * std::cos(phi2)
                              : -std::sin(phi1) * std::sin(phi2);
    return 0.5 * (1.0 + block.readout_sign * contrast * d * signal);
}

ChannelSignals combine_channels(double p_xplus, double p_xminus, double p_yplus,
                                double p_yminus) {
    const double sx = p_xplus - p_xminus;
    const double sy = p_yplus - p_yminus;
    return {sx + sy, sx - sy, sx};
}

double analytic_envelope(Channel channel, double tau, const NoiseParams& noise) {
    if (tau < 0.0) throw std::invalid_argument("tau must be non-negative");
    if (channel == Channel::Sum) {
        return std::exp(-tau * tau / noise.alpha_corr);
    }
    return std::exp(-tau * tau / (4.0 * noise.alpha_fast));
}

double ramsey_envelope(double tau, double gamma, double alpha) {
    return std::exp(-gamma * gamma * tau * tau / (4.0 * alpha));
}

double dipolar_contrast(double p_flip, double contrast) {
    if (p_flip < 0.0 || p_flip > 1.0) throw std::invalid_argument("p_flip must lie in [0, 1]");
    return contrast * 0.5 * (1.0 + (2.0 * p_flip - 1.0));
}

}  // namespace resolute
