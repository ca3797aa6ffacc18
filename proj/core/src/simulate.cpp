#include "resolute/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "resolute/rng.hpp"

namespace resolute {

const char* to_string(SweepAxis a) { return a == SweepAxis::Tau ? "tau" : "tcorr"; }

namespace {

std::string fmt_kv(const char* key, double value_us) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s = %.17g", key, value_us);
    return buf;
}

}  // namespace

std::string SimConfig::describe() const {
    std::string s;
    auto add = [&s](const std::string& line) {
        s += line;
        s += '\n';
    };
    add("[sensor]");
    add(fmt_kv("t1_us", s_to_us(sensor.t1)));
    add(fmt_kv("t2star_us", s_to_us(sensor.t2_star)));
    add(fmt_kv("t2_us", s_to_us(sensor.t2_hahn)));
    add(fmt_kv("t2p_us", s_to_us(sensor.t2_p)));
    add(fmt_kv("contrast", sensor.contrast));
    add(fmt_kv("overhead_us", s_to_us(sensor.overhead)));
    add("[sequence]");
    add(fmt_kv("tau_us", s_to_us(seq.tau)));
    add(fmt_kv("tcorr_us", s_to_us(seq.t_corr)));
    add("n_reps = " + std::to_string(seq.n_reps));
    for (const ToneSignal& t : tones) {
        add("[tone]");
        add(fmt_kv("amp_rad_per_us", t.amplitude * 1e-6));
        add(fmt_kv("freq_khz", omega_to_khz(t.omega)));
        if (t.phi) add(fmt_kv("phi_rad", *t.phi));
    }
    add("[dc]");
    add(fmt_kv("detuning_khz", omega_to_khz(dc.detuning)));
    add(fmt_kv("hyperfine_khz", omega_to_khz(dc.hyperfine)));
    add(fmt_kv("dipolar_khz", omega_to_khz(dc.dipolar)));
    add("[noise]");
    add(fmt_kv("alpha_corr_us2", noise.alpha_corr * 1e12));
    add(fmt_kv("alpha_fast_us2", noise.alpha_fast * 1e12));
    add("[sweep]");
    add(std::string("axis = ") + to_string(sweep.axis));
    add(fmt_kv("start_us", s_to_us(sweep.start)));
    add(fmt_kv("stop_us", s_to_us(sweep.stop)));
    add("n_points = " + std::to_string(sweep.n_points));
    add("[run]");
    add("seed = " + std::to_string(noise.seed));
    add("shots = " + std::to_string(shots_per_block));
    return s;
}

const TraceColumn& Trace::column(const std::string& name) const {
    for (const TraceColumn& c : columns) {
        if (c.name == name) return c;
    }
    throw std::out_of_range("trace has no column named '" + name + "'");
}

bool Trace::has_column(const std::string& name) const {
    return std::any_of(columns.begin(), columns.end(),
                       [&](const TraceColumn& c) { return c.name == name; });
}

namespace {

struct Welford {
    long long n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }
    double stderr_mean() const {
        if (n < 2) return 0.0;
        return std::sqrt(m2 / (n - 1.0) / n);
    }
};

void validate_sim_config(const SimConfig& cfg) {
    validate_sensor(cfg.sensor);
    validate_sequence(cfg.seq);
    validate_noise(cfg.noise);
    validate_dc(cfg.dc);
    for (const ToneSignal& t : cfg.tones) validate_tone(t);
    if (!(cfg.sweep.start > 0.0) || !(cfg.sweep.stop >= cfg.sweep.start)) {
        throw std::invalid_argument("sweep bounds must be positive and ordered");
    }
    if (cfg.sweep.n_points < 1) throw std::invalid_argument("sweep needs at least one point");
    if (cfg.shots_per_block < 1) throw std::invalid_argument("shots_per_block must be at least 1");
}

std::vector<double> sweep_points(const SweepSpec& sweep) {
    std::vector<double> pts(sweep.n_points);
    for (int i = 0; i < sweep.n_points; ++i) {
        pts[i] = sweep.n_points == 1
                     ? sweep.start
                     : sweep.start + (sweep.stop - sweep.start) * i / (sweep.n_points - 1.0);
    }
    return pts;
}

struct PointAccumulators {
    Welford s_minus, s_plus, s_x, s_single;
};

/// Flip mode of the dipolar term during t_corr.
struct FlipSpec {
    bool enabled = false;
    double omega_dd = 0.0;
    double p_flip = 0.0;
};

Trace run_simulation(const SimConfig& cfg, Protocol protocol, const FlipSpec& flip,
                     const std::string& label) {
    validate_sim_config(cfg);
    const auto points = sweep_points(cfg.sweep);
    if (cfg.sweep.axis == SweepAxis::Tcorr || protocol == Protocol::Resolute) {
        const double max_tcorr =
            cfg.sweep.axis == SweepAxis::Tcorr ? cfg.sweep.stop : cfg.seq.t_corr;
        if (protocol == Protocol::Resolute && max_tcorr >= cfg.sensor.t1) {
            throw std::invalid_argument("t_corr must stay below the sensor T1");
        }
    }

    const double sigma_slow = std::sqrt(2.0 / cfg.noise.alpha_corr);
    const double sigma_fast = std::sqrt(1.0 / cfg.noise.alpha_fast);
    const double contrast = cfg.sensor.contrast;
    const auto blocks = canonical_blocks();
    const int shots = cfg.shots_per_block;

    std::vector<PointAccumulators> acc(points.size());

    for (std::size_t ip = 0; ip < points.size(); ++ip) {
        SequenceParams seq = cfg.seq;
        if (cfg.sweep.axis == SweepAxis::Tau) {
            seq.tau = points[ip];
        } else {
            seq.t_corr = points[ip];
        }
        const DecayFactors decay = decay_factors(cfg.sensor, seq);
        const double tau = seq.tau;
        const double t2 = seq.t_corr + 0.5 * tau;  // start of window 2

        for (int rep = 0; rep < seq.n_reps; ++rep) {
            Rng rng = Rng::substream(cfg.noise.seed, ip, rep);

            double phi1 = 0.0;
            double phi2 = 0.0;
            // Tones: random phase per repetition unless fixed.
            for (const ToneSignal& tone : cfg.tones) {
                ToneSignal t = tone;
                if (!t.phi) t.phi = rng.phase();
                if (protocol == Protocol::Resolute) {
                    phi1 += window_phase(t, 0.0, 0.5 * tau);
                    phi2 += window_phase(t, t2, t2 + 0.5 * tau);
                } else if (protocol == Protocol::HahnEcho) {
                    phi1 += window_phase(t, 0.0, 0.5 * tau);
                    phi2 += window_phase(t, 0.5 * tau, tau);
                } else {
                    phi1 += window_phase(t, 0.0, tau);
                }
            }
            // Baths: the slow draw is shared, the fast one is per window.
            const double slow = sigma_slow * rng.normal();
            const double fast1 = sigma_fast * rng.normal();
            const double fast2 = sigma_fast * rng.normal();

            double dc_static = cfg.dc.sum();
            double dd1 = 0.0, dd2 = 0.0;
            if (flip.enabled) {
                dc_static = cfg.dc.detuning + cfg.dc.hyperfine;
                dd1 = flip.omega_dd;
                dd2 = rng.bernoulli(flip.p_flip) ? -flip.omega_dd : flip.omega_dd;
            }

            if (protocol == Protocol::Resolute) {
                phi1 += (dc_static + dd1 + slow + fast1) * 0.5 * tau;
                phi2 += (dc_static + dd2 + slow + fast2) * 0.5 * tau;
                double p_hat[4];
                for (int b = 0; b < 4; ++b) {
                    const double p = propagate_block(blocks[b], phi1, phi2, decay, contrast);
                    p_hat[b] = static_cast<double>(rng.binomial(shots, p)) / shots;
                }
                const ChannelSignals s = combine_channels(p_hat[0], p_hat[1], p_hat[2], p_hat[3]);
                acc[ip].s_minus.add(s.s_minus);
                acc[ip].s_plus.add(s.s_plus);
                acc[ip].s_x.add(s.s_x);
            } else {
                double phase = 0.0;
                if (protocol == Protocol::Ramsey) {
                    phase = phi1 + (dc_static + slow + fast1) * tau;
                } else {
                    phase = phi1 - phi2 + (fast1 - fast2) * 0.5 * tau;
                }
                const double p = 0.5 * (1.0 + contrast * std::cos(phase));
                const double p_hat = static_cast<double>(rng.binomial(shots, p)) / shots;
                acc[ip].s_single.add(2.0 * p_hat - 1.0);
            }
        }
    }

    Trace trace;
    trace.axis_name = cfg.sweep.axis == SweepAxis::Tau ? "tau_us" : "tcorr_us";
    trace.axis.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) trace.axis[i] = s_to_us(points[i]);
    trace.seed = cfg.noise.seed;
    trace.config_echo = cfg.describe();
    trace.label = label;

    auto emit = [&](const char* name, auto pick) {
        TraceColumn col;
        col.name = name;
        col.values.reserve(points.size());
        col.stderrs.reserve(points.size());
        for (const PointAccumulators& a : acc) {
            const Welford& w = pick(a);
            col.values.push_back(w.mean);
            col.stderrs.push_back(w.stderr_mean());
        }
        trace.columns.push_back(std::move(col));
    };
    if (protocol == Protocol::Resolute) {
        emit("s_minus", [](const PointAccumulators& a) -> const Welford& { return a.s_minus; });
        emit("s_plus", [](const PointAccumulators& a) -> const Welford& { return a.s_plus; });
        emit("s_x", [](const PointAccumulators& a) -> const Welford& { return a.s_x; });
    } else {
        emit("s", [](const PointAccumulators& a) -> const Welford& { return a.s_single; });
    }
    return trace;
}

}  // namespace

Trace simulate_trace(const SimConfig& cfg, Protocol protocol) {
    return run_simulation(cfg, protocol, FlipSpec{}, to_string(protocol));
}

Trace simulate_deer_resolute(const SimConfig& cfg, const TargetSpin& target, double p_flip) {
    if (!(p_flip >= 0.0 && p_flip <= 1.0)) {
        throw std::invalid_argument("p_flip must lie in [0, 1]");
    }
    validate_target(target);
    FlipSpec flip;
    flip.enabled = true;
    flip.omega_dd = target.dipolar > 0.0 ? target.dipolar : cfg.dc.dipolar;
    flip.p_flip = p_flip;
    return run_simulation(cfg, Protocol::Resolute, flip, "deer_resolute");
}

}  // namespace resolute
