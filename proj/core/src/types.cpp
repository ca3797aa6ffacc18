#include "resolute/types.hpp"

#include <cmath>
#include <stdexcept>

namespace resolute {

namespace {

void require(bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

std::array<BlockSpec, 4> canonical_blocks() {
    return {BlockSpec{MiddlePhase::X, +1}, BlockSpec{MiddlePhase::X, -1},
            BlockSpec{MiddlePhase::Y, +1}, BlockSpec{MiddlePhase::Y, -1}};
}

const SensorParams& validate_sensor(const SensorParams& p) {
    require(finite(p.t1) && p.t1 > 0.0, "T1 must be positive");
    require(finite(p.t2_star) && p.t2_star > 0.0, "T2* must be positive");
    require(finite(p.t2_hahn) && p.t2_hahn > 0.0, "T2 must be positive");
    require(finite(p.t2_p) && p.t2_p > 0.0, "T2p must be positive");
    require(p.t2_star <= p.t2_hahn, "T2* exceeds T2");
    require(p.t2_hahn <= p.t1, "T2 exceeds T1");
    require(p.t2_p <= p.t1, "T2p exceeds T1");
    require(finite(p.contrast) && p.contrast > 0.0 && p.contrast <= 1.0,
            "contrast out of range (0, 1]");
    require(finite(p.overhead) && p.overhead >= 0.0, "overhead must be non-negative");
    require(finite(p.gamma_nv) && p.gamma_nv > 0.0, "gamma_nv must be positive");
    return p;
}

const ToneSignal& validate_tone(const ToneSignal& t) {
    require(finite(t.amplitude) && t.amplitude >= 0.0, "tone amplitude must be non-negative");
    require(finite(t.omega) && t.omega >= 0.0, "tone frequency must be non-negative");
    if (t.phi) {
        require(finite(*t.phi) && *t.phi >= 0.0 && *t.phi < two_pi,
                "tone phase must lie in [0, 2*pi)");
    }
    return t;
}

const DcTerms& validate_dc(const DcTerms& d) {
    require(finite(d.detuning), "detuning must be finite");
    require(finite(d.hyperfine), "hyperfine must be finite");
    require(finite(d.dipolar) && d.dipolar >= 0.0, "dipolar must be non-negative");
    return d;
}

const NoiseParams& validate_noise(const NoiseParams& n) {
    require(finite(n.alpha_corr) && n.alpha_corr > 0.0, "alpha_corr must be positive");
    require(finite(n.alpha_fast) && n.alpha_fast > 0.0, "alpha_fast must be positive");
    return n;
}

const SequenceParams& validate_sequence(const SequenceParams& s) {
    require(finite(s.tau) && s.tau > 0.0, "tau must be positive");
    require(finite(s.t_corr) && s.t_corr > 0.0, "t_corr must be positive");
    require(s.n_reps >= 1, "n_reps must be at least 1");
    return s;
}

const TargetSpin& validate_target(const TargetSpin& t) {
    require(finite(t.larmor_freq) && t.larmor_freq >= 0.0, "larmor_freq must be non-negative");
    require(finite(t.dipolar) && t.dipolar >= 0.0, "dipolar must be non-negative");
    require(finite(t.line_sigma) && t.line_sigma >= 0.0, "line_sigma must be non-negative");
    require(finite(t.rabi) && t.rabi >= 0.0, "rabi must be non-negative");
    return t;
}

std::vector<std::string> sequence_warnings(const SequenceParams& s) {
    std::vector<std::string> w;
    if (s.t_corr <= s.tau) {
        w.push_back("t_corr <= tau: correlation window shorter than the sensing time");
    }
    return w;
}

std::vector<std::string> sequence_warnings(const SequenceParams& s, const SensorParams& sensor) {
    auto w = sequence_warnings(s);
    if (s.t_corr >= sensor.t1) {
        w.push_back("t_corr >= T1: stored population decays before the second window");
    }
    return w;
}

double larmor_frequency(double field_gauss, Species species) {
    if (!std::isfinite(field_gauss) || field_gauss < 0.0) {
        throw std::invalid_argument("field must be non-negative");
    }
    switch (species) {
        case Species::C13: return gamma_c13_hz_per_gauss * field_gauss;
        case Species::Electron: return gamma_electron_hz_per_gauss * field_gauss;
    }
    throw std::invalid_argument("unknown species tag");
}

double effective_period(const SequenceParams& seq) {
    return seq.t_corr + 0.5 * seq.tau;
}

}  // namespace resolute
