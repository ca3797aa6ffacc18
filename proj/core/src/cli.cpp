#include "resolute/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "resolute/config.hpp"
#include "resolute/fisher.hpp"
#include "resolute/fit.hpp"
#include "resolute/io.hpp"
#include "resolute/simulate.hpp"

namespace resolute {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Bare filenames land in $RESOLUTE_OUT_DIR when it is set.
std::string resolve_out(const std::string& path) {
    if (path.empty() || path.find('/') != std::string::npos) return path;
    const char* dir = std::getenv("RESOLUTE_OUT_DIR");
    if (!dir || !*dir) return path;
    std::string d(dir);
    if (d.back() != '/') d += '/';
    return d + path;
}

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        write_text_atomic(resolve_out(out_path), content);
    }
}

Protocol parse_protocol(const std::string& s) {
    if (s == "ramsey") return Protocol::Ramsey;
    if (s == "hahn") return Protocol::HahnEcho;
    if (s == "resolute") return Protocol::Resolute;
    throw CLI::ValidationError("--protocol", "must be ramsey, hahn or resolute");
}

Channel parse_channel(const std::string& s) {
    if (s == "diff") return Channel::Diff;
    if (s == "sum") return Channel::Sum;
    throw CLI::ValidationError("--channel", "must be diff or sum");
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1.0);
    return v;
}

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;

    Config load() const {
        Config cfg = config_path.empty() ? Config{} : load_config(config_path);
        if (seed) cfg.seed = *seed;
        return cfg;
    }
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_seed = true) {
    cmd->add_option("--config", opts.config_path, "configuration file (INI)");
    cmd->add_option("--out", opts.out_path, "output path (.csv or .json); stdout when omitted");
    if (with_seed) {
        cmd->add_option_function<std::uint64_t>(
            "--seed", [&opts](const std::uint64_t& s) { opts.seed = s; }, "override [run] seed");
    }
}

// ---- subcommand bodies -----------------------------------------------------

int cmd_filter(const CommonOpts& common, const std::string& channel_s, double at_freq_khz,
               double at_tcorr_us, double fmin_khz, double fmax_khz, int fpoints) {
    Config cfg = common.load();
    const Channel channel = parse_channel(channel_s);
    const double amp = cfg.tones.empty() ? 1.0 : cfg.tones.front().amp_rad_per_us * 1e6;

    if (at_freq_khz > 0.0) {
        SequenceParams seq = cfg.sequence();
        if (at_tcorr_us > 0.0) seq.t_corr = us_to_s(at_tcorr_us);
        const double value = amp * amp *
                             filter_function(Protocol::Resolute, channel, seq,
                                             khz_to_omega(at_freq_khz));
        nlohmann::json j{{"freq_khz", at_freq_khz},
                         {"tcorr_us", s_to_us(seq.t_corr)},
                         {"tau_us", s_to_us(seq.tau)},
                         {"channel", to_string(channel)},
                         {"filter_rad2", value}};
        emit(j.dump(2) + "\n", common.out_path);
        return 0;
    }

    const SweepSpec sweep = cfg.sweep_spec();
    if (sweep.axis != SweepAxis::Tcorr) {
        throw std::invalid_argument("filter map needs a tcorr sweep in [sweep]");
    }
    std::vector<double> tc = linspace(sweep.start, sweep.stop, sweep.n_points);
    std::vector<double> omega(fpoints);
    for (int i = 0; i < fpoints; ++i) {
        omega[i] = khz_to_omega(fpoints == 1 ? fmin_khz
                                             : fmin_khz + (fmax_khz - fmin_khz) * i /
                                                              (fpoints - 1.0));
    }
    const FilterMap map = filter_map(tc, omega, cfg.sequence().tau, channel, amp);
    std::string s;
    s += "# schema: resolute-csv v1\n";
    s += "# label: filter map (" + std::string(to_string(channel)) + ", tau_us=" +
         fmt(cfg.tau_us) + ")\n";
    s += "tcorr_us,freq_khz,filter_rad2\n";
    for (std::size_t i = 0; i < tc.size(); ++i) {
        for (std::size_t j = 0; j < omega.size(); ++j) {
            s += fmt(s_to_us(tc[i])) + "," + fmt(omega_to_khz(omega[j])) + "," +
                 fmt(map.at(i, j)) + "\n";
        }
    }
    emit(s, common.out_path);
    return 0;
}

int cmd_phase(const CommonOpts& common, const std::string& protocol_s,
              const std::string& channel_s, double phi_rad) {
    Config cfg = common.load();
    const Protocol protocol = parse_protocol(protocol_s);
    const Channel channel = parse_channel(channel_s);
    auto tones = cfg.tone_signals();
    if (tones.empty()) throw std::invalid_argument("phase needs a [tone] in the config");
    ToneSignal tone = tones.front();
    if (!tone.phi) tone.phi = phi_rad;
    const SequenceParams seq = cfg.sequence();

    double closed = 0.0;
    switch (protocol) {
        case Protocol::Ramsey: closed = ramsey_phase_closed(tone, seq.tau); break;
        case Protocol::HahnEcho: closed = hahn_phase_closed(tone, seq.tau); break;
        case Protocol::Resolute: closed = resolute_phase_closed(tone, seq, channel); break;
    }
    const double quad = phase_integral(tone, seq, protocol, channel);
    const double scale = std::max({std::abs(quad), tone.amplitude * seq.tau * 1e-2, 1e-300});
    nlohmann::json j{{"protocol", to_string(protocol)},
                     {"channel", to_string(channel)},
                     {"phi_rad", *tone.phi},
                     {"closed_rad", closed},
                     {"quadrature_rad", quad},
                     {"rel_error", std::abs(closed - quad) / scale}};
    emit(j.dump(2) + "\n", common.out_path);
    return 0;
}

int cmd_simulate(const CommonOpts& common, const std::string& protocol_s, bool deer,
                 double p_flip, const std::string& format_s) {
    Config cfg = common.load();
    SimConfig sim = cfg.sim_config();
    Trace trace;
    if (deer) {
        trace = simulate_deer_resolute(sim, cfg.target_spin(), p_flip);
    } else {
        trace = simulate_trace(sim, parse_protocol(protocol_s));
    }
    // The echo carries the user's configuration verbatim so the file alone
    // reproduces the run.
    trace.config_echo = cfg.to_ini();
    OutputFormat format = format_from_path(common.out_path);
    if (format_s == "json") format = OutputFormat::Json;
    if (format_s == "csv") format = OutputFormat::Csv;
    if (common.out_path.empty()) {
        emit(format == OutputFormat::Json ? trace_to_json(trace) : trace_to_csv(trace), "");
    } else {
        write_trace(trace, resolve_out(common.out_path), format);
    }
    return 0;
}

int cmd_fisher(const CommonOpts& common, double omega_khz, double tau_us, double tcorr_us,
               double amp_rad_per_us, double phi_rad, int n_sequences) {
    Config cfg = common.load();
    if (tau_us > 0.0) cfg.tau_us = tau_us;
    if (tcorr_us > 0.0) cfg.tcorr_us = tcorr_us;
    const SensorParams sensor = cfg.sensor();
    const SequenceParams seq = cfg.sequence();

    ToneSignal tone;
    if (!cfg.tones.empty()) tone = cfg.tone_signals().front();
    if (amp_rad_per_us > 0.0) tone.amplitude = amp_rad_per_us * 1e6;
    if (tone.amplitude <= 0.0) tone.amplitude = 1e6;
    const double omega = omega_khz > 0.0 ? khz_to_omega(omega_khz) : tone.omega;
    if (omega <= 0.0) throw std::invalid_argument("fisher needs --omega-khz or a [tone]");

    const double exact = fisher_exact_sequence(omega, tone, seq, sensor);
    const double approx_avg = fisher_approx_phi_avg(omega, tone, seq, sensor);
    const ExperimentInfo exp_info = fisher_experiment(omega, tone, seq, sensor, n_sequences);

    nlohmann::json j{{"omega_khz", omega_to_khz(omega)},
                     {"tau_us", s_to_us(seq.tau)},
                     {"tcorr_us", s_to_us(seq.t_corr)},
                     {"amp_rad_per_us", tone.amplitude * 1e-6},
                     {"exact", exact},
                     {"approx", approx_avg},
                     {"ratio", approx_avg > 0.0 ? exact / approx_avg : 0.0},
                     {"experiment",
                      {{"n_sequences", n_sequences},
                       {"total", exp_info.total},
                       {"eq_closed", exp_info.eq_closed},
                       {"duration_s", exp_info.duration}}}};
    if (phi_rad >= 0.0) {
        j["approx_at_phi"] = fisher_approx(omega, tone, seq, sensor, phi_rad);
        j["phi_rad"] = phi_rad;
    }
    emit(j.dump(2) + "\n", common.out_path);
    return 0;
}

int cmd_compare(const CommonOpts& common, double fmin_khz, double fmax_khz, int fpoints,
                const std::string& json_path) {
    Config cfg = common.load();
    CompareParams params;
    params.t2_p = us_to_s(cfg.t2p_us);
    params.t2_hahn = us_to_s(cfg.t2_us);
    params.t2_star = us_to_s(cfg.t2star_us);
    params.t1 = us_to_s(cfg.t1_us);
    params.overhead = us_to_s(cfg.overhead_us);
    params.n_sequences = cfg.n_reps;
    params.tau_resolute = us_to_s(cfg.tau_us);
    params.contrast = cfg.contrast;
    if (!cfg.tones.empty()) params.amplitude = cfg.tones.front().amp_rad_per_us * 1e6;

    double lo = fmin_khz > 0.0 ? fmin_khz : cfg.start_khz;
    double hi = fmax_khz > 0.0 ? fmax_khz : cfg.stop_khz;
    int n = fpoints > 0 ? fpoints : cfg.n_points;
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i) {
        grid[i] = khz_to_omega(n == 1 ? lo : lo * std::pow(hi / lo, i / (n - 1.0)));
    }
    const FisherReport report = compare_protocols(grid, params);
    emit(report_to_csv(report), common.out_path);
    if (!json_path.empty()) {
        write_text_atomic(resolve_out(json_path), report_to_json(report));
    }
    return 0;
}

int cmd_optimize(const CommonOpts& common, double omega_khz, double tau_min_us, double tau_max_us,
                 double tcorr_min_us, double tcorr_max_us) {
    Config cfg = common.load();
    const SensorParams sensor = cfg.sensor();
    ToneSignal tone;
    tone.amplitude = cfg.tones.empty() ? 1e6 : cfg.tones.front().amp_rad_per_us * 1e6;
    if (omega_khz <= 0.0 && !cfg.tones.empty()) omega_khz = cfg.tones.front().freq_khz;
    if (omega_khz <= 0.0) throw std::invalid_argument("optimize needs --omega-khz or a [tone]");

    OptimizeBounds bounds;
    bounds.tau_min = us_to_s(tau_min_us);
    bounds.tau_max = us_to_s(tau_max_us);
    bounds.t_corr_min = us_to_s(tcorr_min_us);
    bounds.t_corr_max = us_to_s(tcorr_max_us);
    const OptimizeResult result =
        optimize_sequence(khz_to_omega(omega_khz), tone, sensor, bounds);
    emit(optimize_to_json(result), common.out_path);
    return 0;
}

int cmd_chirp(const CommonOpts& common, const std::string& mode, double detuning_mhz,
              const std::string& qlist_s, double fmin_mhz, double fmax_mhz, int fpoints,
              const std::string& pulse_s) {
    Config cfg = common.load();
    const TargetSpin target = cfg.target_spin();
    const double nu = target.rabi;

    if (mode == "q") {
        const ChirpParams chirp = cfg.chirp_params();
        nlohmann::json j{{"nu_mhz", nu / 1e6},
                         {"t_p_us", s_to_us(chirp.t_p)},
                         {"span_mhz", chirp.span / 1e6},
                         {"q", chirp.q}};
        emit(j.dump(2) + "\n", common.out_path);
        return 0;
    }
    if (mode == "lz") {
        const ChirpParams chirp = cfg.chirp_params();
        const double p = lz_flip_probability(chirp, nu, detuning_mhz * 1e6);
        nlohmann::json j{{"q", chirp.q},
                         {"span_mhz", chirp.span / 1e6},
                         {"detuning_mhz", detuning_mhz},
                         {"p_flip", p},
                         {"p_landau_zener", 1.0 - std::exp(-pi * chirp.q / 2.0)},
                         {"norm_error", lz_last_norm_error()}};
        emit(j.dump(2) + "\n", common.out_path);
        return 0;
    }
    if (mode == "ensemble") {
        const ChirpParams chirp = cfg.chirp_params();
        const double p = ensemble_flip(chirp, nu, target.line_sigma);
        nlohmann::json j{{"q", chirp.q},
                         {"span_mhz", chirp.span / 1e6},
                         {"line_sigma_mhz", target.line_sigma / 1e6},
                         {"p_avg", p}};
        emit(j.dump(2) + "\n", common.out_path);
        return 0;
    }
    if (mode == "contrast") {
        std::vector<double> qs;
        std::istringstream qss(qlist_s);
        std::string tok;
        while (std::getline(qss, tok, ',')) qs.push_back(std::strtod(tok.c_str(), nullptr));
        const auto curve =
            contrast_vs_q(us_to_s(cfg.t_p_us), qs, nu, target.line_sigma, cfg.contrast);
        std::string s = "# schema: resolute-csv v1\n# label: contrast vs q\nq,span_mhz,p_avg,contrast\n";
        for (const QContrastPoint& pt : curve) {
            s += fmt(pt.q) + "," + fmt(pt.span / 1e6) + "," + fmt(pt.p_avg) + "," +
                 fmt(pt.contrast) + "\n";
        }
        emit(s, common.out_path);
        return 0;
    }
    if (mode == "deerscan") {
        const PulseKind kind = pulse_s == "pi" ? PulseKind::Pi : PulseKind::Chirp;
        std::vector<double> grid(fpoints);
        for (int i = 0; i < fpoints; ++i) {
            grid[i] = 1e6 * (fpoints == 1 ? fmin_mhz
                                          : fmin_mhz + (fmax_mhz - fmin_mhz) * i / (fpoints - 1.0));
        }
        const auto scan =
            deer_frequency_scan(grid, kind, target, cfg.chirp_params(), cfg.contrast);
        std::string s = "# schema: resolute-csv v1\n# label: deer frequency scan (" + pulse_s +
                        ")\nfreq_mhz,signal,p_avg\n";
        for (const DeerScanPoint& pt : scan) {
            s += fmt(pt.freq / 1e6) + "," + fmt(pt.signal) + "," + fmt(pt.p_avg) + "\n";
        }
        emit(s, common.out_path);
        return 0;
    }
    throw CLI::ValidationError("--mode", "must be q, lz, ensemble, contrast or deerscan");
}

int cmd_fit(const CommonOpts& common, const std::string& in_path, const std::string& model,
            const std::string& column, int components, int replicas, double truth_khz) {
    if (model == "crb") {
        // replica study straight from the configuration
        Config cfg = common.load();
        SimConfig sim = cfg.sim_config();
        if (sim.tones.empty()) throw std::invalid_argument("crb study needs a [tone]");
        const ToneSignal tone = sim.tones.front();
        const double truth_hz = truth_khz > 0.0 ? truth_khz * 1e3 : omega_to_hz(tone.omega);

        double i_point = 0.0;
        const SweepSpec& sweep = sim.sweep;
        for (int i = 0; i < sweep.n_points; ++i) {
            SequenceParams seq = sim.seq;
            const double x = sweep.n_points == 1 ? sweep.start
                                                 : sweep.start + (sweep.stop - sweep.start) * i /
                                                                     (sweep.n_points - 1.0);
            (sweep.axis == SweepAxis::Tau ? seq.tau : seq.t_corr) = x;
            i_point += fisher_exact_sequence(tone.omega, tone, seq, sim.sensor);
        }
        const double i_total = i_point * sim.seq.n_reps * sim.shots_per_block;

        std::vector<double> estimates;
        estimates.reserve(replicas);
        for (int r = 0; r < replicas; ++r) {
            SimConfig rep_cfg = sim;
            rep_cfg.noise.seed = sim.noise.seed + static_cast<std::uint64_t>(r);
            const Trace trace = simulate_trace(rep_cfg, Protocol::Resolute);
            CosineFitOptions opts;
            opts.n_components = components;
            opts.fit_decay = false;
            opts.freq_hints_hz = {truth_hz, 2.0 * truth_hz};
            const FitResult fit = fit_decaying_cosines(trace, column, opts);
            estimates.push_back(fit.value("freq_1"));
        }
        const CrbReport report = crb_report(estimates, truth_hz, i_total);
        emit(crb_to_json(report), common.out_path);
        return 0;
    }

    const Trace trace = load_trace(in_path);
    if (model == "periodogram") {
        const Periodogram p = periodogram(trace, column);
        std::string s = "# schema: resolute-csv v1\n# label: periodogram\nfreq_khz,power\n";
        for (std::size_t i = 0; i < p.freq.size(); ++i) {
            s += fmt(p.freq[i] / 1e3) + "," + fmt(p.power[i]) + "\n";
        }
        emit(s, common.out_path);
        return 0;
    }
    if (model == "cosines") {
        CosineFitOptions opts;
        opts.n_components = components;
        emit(fit_to_json(fit_decaying_cosines(trace, column, opts)), common.out_path);
        return 0;
    }
    if (model == "stretched") {
        emit(fit_to_json(fit_stretched_exp(trace, column)), common.out_path);
        return 0;
    }
    throw CLI::ValidationError("--model", "must be periodogram, cosines, stretched or crb");
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
    CLI::App app{"resolute: phase-cycled Ramsey correlation sensing toolkit"};
    app.require_subcommand(1);

    // filter
    CommonOpts filter_common;
    std::string filter_channel = "sum";
    double at_freq_khz = 0.0, at_tcorr_us = 0.0;
    double fmin_khz = 10.0, fmax_khz = 200.0;
    int fpoints = 200;
    auto* filter_cmd = app.add_subcommand("filter", "filter function values and (tcorr, f) maps");
    add_common(filter_cmd, filter_common, false);
    filter_cmd->add_option("--channel", filter_channel, "diff or sum");
    filter_cmd->add_option("--at-freq-khz", at_freq_khz, "evaluate a single point");
    filter_cmd->add_option("--at-tcorr-us", at_tcorr_us, "t_corr for the single point");
    filter_cmd->add_option("--fmin-khz", fmin_khz, "map: lowest frequency");
    filter_cmd->add_option("--fmax-khz", fmax_khz, "map: highest frequency");
    filter_cmd->add_option("--fpoints", fpoints, "map: frequency count");

    // phase
    CommonOpts phase_common;
    std::string phase_protocol = "resolute", phase_channel = "diff";
    double phi_rad = 0.0;
    auto* phase_cmd = app.add_subcommand("phase", "closed-form phases with a quadrature check");
    add_common(phase_cmd, phase_common, false);
    phase_cmd->add_option("--protocol", phase_protocol, "ramsey, hahn or resolute");
    phase_cmd->add_option("--channel", phase_channel, "diff or sum");
    phase_cmd->add_option("--phi-rad", phi_rad, "signal phase when the tone has none");

    // simulate
    CommonOpts sim_common;
    std::string sim_protocol = "resolute", sim_format;
    bool deer = false;
    double p_flip = 1.0;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo trace synthesis");
    add_common(sim_cmd, sim_common);
    sim_cmd->add_option("--protocol", sim_protocol, "ramsey, hahn or resolute");
    sim_cmd->add_flag("--deer", deer, "flip a target spin during t_corr");
    sim_cmd->add_option("--p-flip", p_flip, "flip probability for --deer");
    sim_cmd->add_option("--format", sim_format, "csv or json (default: from --out)");

    // fisher
    CommonOpts fisher_common;
    double omega_khz = 0.0, tau_us = 0.0, tcorr_us = 0.0, amp_rad_per_us = 0.0;
    double fisher_phi = -1.0;
    int n_sequences = 500;
    auto* fisher_cmd = app.add_subcommand("fisher", "exact and approximate information");
    add_common(fisher_cmd, fisher_common, false);
    fisher_cmd->add_option("--omega-khz", omega_khz, "target frequency");
    fisher_cmd->add_option("--tau-us", tau_us, "sensing time override");
    fisher_cmd->add_option("--tcorr-us", tcorr_us, "correlation time override");
    fisher_cmd->add_option("--amp-rad-per-us", amp_rad_per_us, "tone amplitude override");
    fisher_cmd->add_option("--phi-rad", fisher_phi, "also report the approximation at this phase");
    fisher_cmd->add_option("--n", n_sequences, "sequences in the experiment total");

    // compare
    CommonOpts compare_common;
    double cmp_fmin = 0.0, cmp_fmax = 0.0;
    int cmp_fpoints = 0;
    std::string cmp_json;
    auto* compare_cmd = app.add_subcommand("compare", "protocol comparison over frequency");
    add_common(compare_cmd, compare_common, false);
    compare_cmd->add_option("--fmin-khz", cmp_fmin, "lowest frequency");
    compare_cmd->add_option("--fmax-khz", cmp_fmax, "highest frequency");
    compare_cmd->add_option("--fpoints", cmp_fpoints, "grid size (log-spaced)");
    compare_cmd->add_option("--json", cmp_json, "also write the full JSON report here");

    // optimize
    CommonOpts opt_common;
    double opt_omega = 0.0, opt_tau_min = 0.5, opt_tau_max = 20.0, opt_tc_min = 1.0,
           opt_tc_max = 900.0;
    auto* opt_cmd = app.add_subcommand("optimize", "best (tau, t_corr) for a target frequency");
    add_common(opt_cmd, opt_common, false);
    opt_cmd->add_option("--omega-khz", opt_omega, "target frequency");
    opt_cmd->add_option("--tau-min-us", opt_tau_min, "tau lower bound");
    opt_cmd->add_option("--tau-max-us", opt_tau_max, "tau upper bound");
    opt_cmd->add_option("--tcorr-min-us", opt_tc_min, "t_corr lower bound");
    opt_cmd->add_option("--tcorr-max-us", opt_tc_max, "t_corr upper bound");

    // chirp
    CommonOpts chirp_common;
    std::string chirp_mode = "q", qlist = "1,2,5,10,20", pulse = "chirp";
    double chirp_detuning_mhz = 0.0, scan_fmin_mhz = 0.0, scan_fmax_mhz = 0.0;
    int scan_fpoints = 81;
    auto* chirp_cmd = app.add_subcommand("chirp", "adiabatic-pulse calculations");
    add_common(chirp_cmd, chirp_common, false);
    chirp_cmd->add_option("--mode", chirp_mode, "q, lz, ensemble, contrast or deerscan");
    chirp_cmd->add_option("--detuning-mhz", chirp_detuning_mhz, "spin offset for --mode lz");
    chirp_cmd->add_option("--qlist", qlist, "comma-separated Q values for --mode contrast");
    chirp_cmd->add_option("--fmin-mhz", scan_fmin_mhz, "deerscan: lowest drive frequency");
    chirp_cmd->add_option("--fmax-mhz", scan_fmax_mhz, "deerscan: highest drive frequency");
    chirp_cmd->add_option("--fpoints", scan_fpoints, "deerscan: grid size");
    chirp_cmd->add_option("--pulse", pulse, "deerscan: pi or chirp");

    // fit
    CommonOpts fit_common;
    std::string fit_in, fit_model = "cosines", fit_column = "s_minus";
    int fit_components = 2, fit_replicas = 200;
    double fit_truth_khz = 0.0;
    auto* fit_cmd = app.add_subcommand("fit", "spectral estimation and least-squares fits");
    add_common(fit_cmd, fit_common);
    fit_cmd->add_option("--in", fit_in, "input trace CSV");
    fit_cmd->add_option("--model", fit_model, "periodogram, cosines, stretched or crb");
    fit_cmd->add_option("--column", fit_column, "trace column to analyze");
    fit_cmd->add_option("--components", fit_components, "cosine components (1-3)");
    fit_cmd->add_option("--replicas", fit_replicas, "crb: replica count");
    fit_cmd->add_option("--truth-khz", fit_truth_khz, "crb: true frequency");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints help/usage text
        return e.get_exit_code() == 0 ? 0 : 1;
    }

    try {
        if (filter_cmd->parsed()) {
            return cmd_filter(filter_common, filter_channel, at_freq_khz, at_tcorr_us, fmin_khz,
                              fmax_khz, fpoints);
        }
        if (phase_cmd->parsed()) {
            return cmd_phase(phase_common, phase_protocol, phase_channel, phi_rad);
        }
        if (sim_cmd->parsed()) {
            return cmd_simulate(sim_common, sim_protocol, deer, p_flip, sim_format);
        }
        if (fisher_cmd->parsed()) {
            return cmd_fisher(fisher_common, omega_khz, tau_us, tcorr_us, amp_rad_per_us,
                              fisher_phi, n_sequences);
        }
        if (compare_cmd->parsed()) {
            return cmd_compare(compare_common, cmp_fmin, cmp_fmax, cmp_fpoints, cmp_json);
        }
        if (opt_cmd->parsed()) {
            return cmd_optimize(opt_common, opt_omega, opt_tau_min, opt_tau_max, opt_tc_min,
                                opt_tc_max);
        }
        if (chirp_cmd->parsed()) {
            return cmd_chirp(chirp_common, chirp_mode, chirp_detuning_mhz, qlist, scan_fmin_mhz,
                             scan_fmax_mhz, scan_fpoints, pulse);
        }
        if (fit_cmd->parsed()) {
            return cmd_fit(fit_common, fit_in, fit_model, fit_column, fit_components,
                           fit_replicas, fit_truth_khz);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

int run_command(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_command(args);
}

}  // namespace resolute
