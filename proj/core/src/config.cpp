#include "resolute/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace resolute {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return {};
    return s.substr(a, b - a + 1);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct KeyRef {
    std::function<void(Config&, double)> set_number;
    std::function<void(Config&, const std::string&)> set_string;  // for enum-like keys
    bool integer = false;
};

using Schema = std::map<std::string, std::map<std::string, KeyRef>>;

KeyRef num(double Config::* member) {
    return {[member](Config& c, double v) { c.*member = v; }, nullptr, false};
}

KeyRef opt_num(std::optional<double> Config::* member) {
    return {[member](Config& c, double v) { c.*member = v; }, nullptr, false};
}

KeyRef int_num(int Config::* member) {
    return {[member](Config& c, double v) { c.*member = static_cast<int>(v); }, nullptr, true};
}

const Schema& schema() {
    static const Schema s = [] {
        Schema m;
        m["sensor"] = {
            {"t1_us", num(&Config::t1_us)},
            {"t2star_us", num(&Config::t2star_us)},
            {"t2_us", num(&Config::t2_us)},
            {"t2p_us", num(&Config::t2p_us)},
            {"contrast", num(&Config::contrast)},
            {"overhead_us", num(&Config::overhead_us)},
            {"gamma_nv_mhz_per_g", num(&Config::gamma_nv_mhz_per_g)},
        };
        m["sequence"] = {
            {"tau_us", num(&Config::tau_us)},
            {"tcorr_us", num(&Config::tcorr_us)},
            {"n_reps", int_num(&Config::n_reps)},
        };
        m["tone"] = {};  // handled separately
        m["dc"] = {
            {"detuning_khz", num(&Config::detuning_khz)},
            {"hyperfine_khz", num(&Config::hyperfine_khz)},
            {"dipolar_khz", num(&Config::dipolar_khz)},
        };
        m["noise"] = {
            {"alpha_corr_us2", num(&Config::alpha_corr_us2)},
            {"alpha_fast_us2", num(&Config::alpha_fast_us2)},
        };
        m["target"] = {
            {"larmor_khz", num(&Config::larmor_khz)},
            {"dipolar_khz", num(&Config::target_dipolar_khz)},
            {"line_sigma_khz", num(&Config::line_sigma_khz)},
            {"rabi_khz", num(&Config::rabi_khz)},
        };
        m["chirp"] = {
            {"t_p_us", num(&Config::t_p_us)},
            {"q", opt_num(&Config::chirp_q)},
            {"span_mhz", opt_num(&Config::span_mhz)},
            {"center_detuning_khz", num(&Config::center_detuning_khz)},
        };
        m["sweep"] = {
            {"axis", {nullptr, [](Config& c, const std::string& v) { c.sweep_axis = v; }, false}},
            {"start_us", num(&Config::start_us)},
            {"stop_us", num(&Config::stop_us)},
            {"start_khz", num(&Config::start_khz)},
            {"stop_khz", num(&Config::stop_khz)},
            {"n_points", int_num(&Config::n_points)},
        };
        m["run"] = {
            {"seed",
             {[](Config& c, double v) { c.seed = static_cast<std::uint64_t>(v); }, nullptr, true}},
            {"shots", int_num(&Config::shots)},
        };
        return m;
    }();
    return s;
}

/// "did you mean" helper for wrong unit suffixes: same stem before the last '_'.
std::string suffix_hint(const std::string& section, const std::string& key) {
    const auto sec = schema().find(section);
    if (sec == schema().end()) return {};
    const std::size_t cut = key.find_last_of('_');
    if (cut == std::string::npos) return {};
    const std::string stem = key.substr(0, cut + 1);
    for (const auto& [known, ref] : sec->second) {
        if (known.rfind(stem, 0) == 0) {
            return "; wrong unit suffix? expected '" + known + "'";
        }
    }
    return {};
}

const std::map<std::string, KeyRef> tone_schema_marker{};

}  // namespace

Config parse_config(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    std::string section;
    Config::Tone* tone = nullptr;
    std::map<std::string, std::vector<std::string>> seen;  // duplicate detection

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const std::size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("unterminated section header", line_no, 1);
            }
            section = trim(line.substr(1, line.size() - 2));
            if (schema().find(section) == schema().end()) {
                throw ConfigError("unknown section [" + section + "]", line_no, 1);
            }
            if (section == "tone") {
                cfg.tones.emplace_back();
                tone = &cfg.tones.back();
            } else {
                tone = nullptr;
            }
            seen[section].clear();
            continue;
        }

        const std::size_t eq = line.find('=');
        const int column = static_cast<int>(raw.find_first_not_of(" \t")) + 1;
        if (eq == std::string::npos) {
            throw ConfigError("expected 'key = value'", line_no, column);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) {
            throw ConfigError("key '" + key + "' outside any section", line_no, column);
        }
        auto& dupes = seen[section];
        if (std::find(dupes.begin(), dupes.end(), key) != dupes.end()) {
            throw ConfigError("duplicate key '" + key + "' in [" + section + "]", line_no, column);
        }
        dupes.push_back(key);

        auto parse_number = [&](bool integer) {
            char* end = nullptr;
            const double v = std::strtod(value.c_str(), &end);
            if (end == value.c_str() || *end != '\0' || !std::isfinite(v)) {
                throw ConfigError("value for '" + key + "' is not a number", line_no, column);
            }
            if (integer && v != std::floor(v)) {
                throw ConfigError("value for '" + key + "' must be an integer", line_no, column);
            }
            return v;
        };

        if (section == "tone") {
            if (key == "amp_rad_per_us") {
                tone->amp_rad_per_us = parse_number(false);
            } else if (key == "freq_khz") {
                tone->freq_khz = parse_number(false);
            } else if (key == "phi_rad") {
                tone->phi_rad = parse_number(false);
            } else {
                std::string hint;
                if (key.rfind("amp", 0) == 0) hint = "; wrong unit suffix? expected 'amp_rad_per_us'";
                if (key.rfind("freq", 0) == 0) hint = "; wrong unit suffix? expected 'freq_khz'";
                throw ConfigError("unknown key '" + key + "' in [tone]" + hint, line_no, column);
            }
            continue;
        }

        const auto& keys = schema().at(section);
        const auto it = keys.find(key);
        if (it == keys.end()) {
            throw ConfigError("unknown key '" + key + "' in [" + section + "]" +
                                  suffix_hint(section, key),
                              line_no, column);
        }
        if (it->second.set_string) {
            it->second.set_string(cfg, value);
        } else {
            it->second.set_number(cfg, parse_number(it->second.integer));
        }
    }

    // cross-field checks with approximate locations unavailable: report line 0
    if (cfg.sweep_axis != "tau" && cfg.sweep_axis != "tcorr" && cfg.sweep_axis != "frequency") {
        throw ConfigError("sweep axis must be tau, tcorr or frequency", 0, 0);
    }
    if (cfg.chirp_q && cfg.span_mhz) {
        throw ConfigError("give exactly one of chirp q and span_mhz", 0, 0);
    }
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string Config::to_ini() const {
    std::string s;
    auto kv = [&s](const char* k, const std::string& v) {
        s += k;
        s += " = ";
        s += v;
        s += '\n';
    };
    s += "[sensor]\n";
    kv("t1_us", fmt(t1_us));
    kv("t2star_us", fmt(t2star_us));
    kv("t2_us", fmt(t2_us));
    kv("t2p_us", fmt(t2p_us));
    kv("contrast", fmt(contrast));
    kv("overhead_us", fmt(overhead_us));
    kv("gamma_nv_mhz_per_g", fmt(gamma_nv_mhz_per_g));
    s += "[sequence]\n";
    kv("tau_us", fmt(tau_us));
    kv("tcorr_us", fmt(tcorr_us));
    kv("n_reps", std::to_string(n_reps));
    for (const Tone& t : tones) {
        s += "[tone]\n";
        kv("amp_rad_per_us", fmt(t.amp_rad_per_us));
        kv("freq_khz", fmt(t.freq_khz));
        if (t.phi_rad) kv("phi_rad", fmt(*t.phi_rad));
    }
    s += "[dc]\n";
    kv("detuning_khz", fmt(detuning_khz));
    kv("hyperfine_khz", fmt(hyperfine_khz));
    kv("dipolar_khz", fmt(dipolar_khz));
    s += "[noise]\n";
    kv("alpha_corr_us2", fmt(alpha_corr_us2));
    kv("alpha_fast_us2", fmt(alpha_fast_us2));
    s += "[target]\n";
    kv("larmor_khz", fmt(larmor_khz));
    kv("dipolar_khz", fmt(target_dipolar_khz));
    kv("line_sigma_khz", fmt(line_sigma_khz));
    kv("rabi_khz", fmt(rabi_khz));
    s += "[chirp]\n";
    kv("t_p_us", fmt(t_p_us));
    if (chirp_q) kv("q", fmt(*chirp_q));
    if (span_mhz) kv("span_mhz", fmt(*span_mhz));
    kv("center_detuning_khz", fmt(center_detuning_khz));
    s += "[sweep]\n";
    kv("axis", sweep_axis);
    kv("start_us", fmt(start_us));
    kv("stop_us", fmt(stop_us));
    kv("start_khz", fmt(start_khz));
    kv("stop_khz", fmt(stop_khz));
    kv("n_points", std::to_string(n_points));
    s += "[run]\n";
    kv("seed", std::to_string(seed));
    kv("shots", std::to_string(shots));
    return s;
}

SensorParams Config::sensor() const {
    SensorParams p;
    p.t1 = us_to_s(t1_us);
    p.t2_star = us_to_s(t2star_us);
    p.t2_hahn = us_to_s(t2_us);
    p.t2_p = us_to_s(t2p_us);
    p.contrast = contrast;
    p.overhead = us_to_s(overhead_us);
    p.gamma_nv = two_pi * gamma_nv_mhz_per_g * 1e6;
    return validate_sensor(p);
}

SequenceParams Config::sequence() const {
    SequenceParams p;
    p.tau = us_to_s(tau_us);
    p.t_corr = us_to_s(tcorr_us);
    p.n_reps = n_reps;
    return validate_sequence(p);
}

std::vector<ToneSignal> Config::tone_signals() const {
    std::vector<ToneSignal> out;
    out.reserve(tones.size());
    for (const Tone& t : tones) {
        ToneSignal sig;
        sig.amplitude = t.amp_rad_per_us * 1e6;
        sig.omega = khz_to_omega(t.freq_khz);
        sig.phi = t.phi_rad;
        out.push_back(validate_tone(sig));
    }
    return out;
}

DcTerms Config::dc_terms() const {
    DcTerms d;
    d.detuning = khz_to_omega(detuning_khz);
    d.hyperfine = khz_to_omega(hyperfine_khz);
    d.dipolar = khz_to_omega(dipolar_khz);
    return validate_dc(d);
}

NoiseParams Config::noise_params() const {
    NoiseParams n;
    n.alpha_corr = alpha_corr_us2 * 1e-12;
    n.alpha_fast = alpha_fast_us2 * 1e-12;
    n.seed = seed;
    return validate_noise(n);
}

TargetSpin Config::target_spin() const {
    TargetSpin t;
    t.larmor_freq = larmor_khz * 1e3;
    t.dipolar = khz_to_omega(target_dipolar_khz);
    t.line_sigma = line_sigma_khz * 1e3;
    t.rabi = rabi_khz * 1e3;
    return validate_target(t);
}

ChirpParams Config::chirp_params() const {
    const double nu = rabi_khz * 1e3;
    const double t_p = us_to_s(t_p_us);
    const double offset = center_detuning_khz * 1e3;
    if (span_mhz) return ChirpParams::from_span(t_p, *span_mhz * 1e6, nu, offset);
    return ChirpParams::from_q(t_p, chirp_q.value_or(5.0), nu, offset);
}

SweepSpec Config::sweep_spec() const {
    SweepSpec s;
    if (sweep_axis == "tau") {
        s.axis = SweepAxis::Tau;
    } else if (sweep_axis == "tcorr") {
        s.axis = SweepAxis::Tcorr;
    } else {
        throw std::invalid_argument("sweep axis 'frequency' has no time-domain sweep");
    }
    s.start = us_to_s(start_us);
    s.stop = us_to_s(stop_us);
    s.n_points = n_points;
    return s;
}

SimConfig Config::sim_config() const {
    SimConfig c;
    c.sensor = sensor();
    c.seq = sequence();
    c.tones = tone_signals();
    c.dc = dc_terms();
    c.noise = noise_params();
    c.sweep = sweep_spec();
    c.shots_per_block = shots;
    return c;
}

}  // namespace resolute
