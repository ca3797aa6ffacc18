#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "resolute/chirp.hpp"
#include "resolute/fisher.hpp"
#include "resolute/simulate.hpp"
#include "resolute/types.hpp"

namespace resolute {

/// Parse/validation failure with the offending location.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& message, int line, int column)
        : std::runtime_error(message + " (line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ")"),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// Flat key-value configuration. Keys are unit-suffixed (tau_us, freq_khz,
/// field_g); unknown keys are rejected. All values below are stored in the
/// file units and converted once when assembling domain objects.
struct Config {
    // [sensor]
    double t1_us = 500.0;
    double t2star_us = 0.38;
    double t2_us = 4.3;
    double t2p_us = 5.1;
    double contrast = 0.3;
    double overhead_us = 3.0;
    double gamma_nv_mhz_per_g = 2.8024;

    // [sequence]
    double tau_us = 5.0;
    double tcorr_us = 100.0;
    int n_reps = 500;

    // [tone], repeatable
    struct Tone {
        double amp_rad_per_us = 0.0;
        double freq_khz = 0.0;
        std::optional<double> phi_rad{};

        friend bool operator==(const Tone&, const Tone&) = default;
    };
    std::vector<Tone> tones;

    // [dc]
    double detuning_khz = 0.0;
    double hyperfine_khz = 0.0;
    double dipolar_khz = 0.0;

    // [noise]
    double alpha_corr_us2 = 1e9;
    double alpha_fast_us2 = 1e9;

    // [target]
    double larmor_khz = 0.0;
    double target_dipolar_khz = 0.0;
    double line_sigma_khz = 0.0;
    double rabi_khz = 0.0;

    // [chirp]; exactly one of q/span_mhz may be set, the other derives
    double t_p_us = 2.0;
    std::optional<double> chirp_q{};
    std::optional<double> span_mhz{};
    double center_detuning_khz = 0.0;

    // [sweep]
    std::string sweep_axis = "tcorr";  // tau | tcorr | frequency
    double start_us = 10.0;
    double stop_us = 200.0;
    double start_khz = 2.0;
    double stop_khz = 150.0;
    int n_points = 100;

    // [run]
    std::uint64_t seed = 1;
    int shots = 1;

    friend bool operator==(const Config&, const Config&) = default;

    /// Canonical serialization; load(to_ini()) reproduces this Config.
    std::string to_ini() const;

    // Converters into domain objects (canonical units).
    SensorParams sensor() const;
    SequenceParams sequence() const;
    std::vector<ToneSignal> tone_signals() const;
    DcTerms dc_terms() const;
    NoiseParams noise_params() const;
    TargetSpin target_spin() const;
    ChirpParams chirp_params() const;
    SweepSpec sweep_spec() const;
    SimConfig sim_config() const;
};

/// Parse configuration text; errors carry line/column.
Config parse_config(const std::string& text);

/// Load and parse a configuration file.
Config load_config(const std::string& path);

}  // namespace resolute
