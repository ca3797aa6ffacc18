#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "resolute/block.hpp"
#include "resolute/phase.hpp"
#include "resolute/types.hpp"

namespace resolute {

enum class SweepAxis : std::uint8_t { Tau, Tcorr };

const char* to_string(SweepAxis a);

struct SweepSpec {
    SweepAxis axis = SweepAxis::Tcorr;
    double start = 10e-6;   ///< s
    double stop = 200e-6;   ///< s
    int n_points = 100;
};

struct SimConfig {
    SensorParams sensor;
    SequenceParams seq;
    std::vector<ToneSignal> tones;
    DcTerms dc;
    NoiseParams noise;
    SweepSpec sweep;
    int shots_per_block = 1;

    /// Canonical key-value rendering, embedded in every output.
    std::string describe() const;
};

/// One named column of a swept record: per-point mean and standard error.
struct TraceColumn {
    std::string name;
    std::vector<double> values;
    std::vector<double> stderrs;
};

/// A swept measurement record with its full provenance.
struct Trace {
    std::string axis_name;        ///< e.g. "tau_us", "tcorr_us", "freq_khz"
    std::vector<double> axis;     ///< axis values in the named unit
    std::vector<TraceColumn> columns;
    std::string config_echo;      ///< effective configuration, one key per line
    std::uint64_t seed = 0;
    std::string label;

    const TraceColumn& column(const std::string& name) const;
    bool has_column(const std::string& name) const;
};

/// Monte-Carlo synthesis of a swept measurement.
///
/// Per repetition: a phase is drawn for every phi-free tone, the slow bath
/// draw is shared between the two windows, the fast bath is redrawn per
/// window, the four block probabilities are propagated, and binomial shots
/// are aggregated. Per-point substreams are derived from (seed, point, rep),
/// so results do not depend on evaluation order. The correlation protocol
/// emits columns s_minus/s_plus/s_x; Ramsey and Hahn Echo emit a single
/// column s.
Trace simulate_trace(const SimConfig& cfg, Protocol protocol);

/// Correlation sequence with a target-spin flip attempt during t_corr: the
/// dipolar term enters the first window with +w_dd*tau/2 and the second with
/// its sign flipped with probability p_flip per repetition.
Trace simulate_deer_resolute(const SimConfig& cfg, const TargetSpin& target, double p_flip);

}  // namespace resolute
