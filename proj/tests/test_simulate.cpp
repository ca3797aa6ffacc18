#include <doctest.h>

#include <cmath>

#include "resolute/simulate.hpp"

using namespace resolute;

namespace {

SimConfig base_config() {
    SimConfig cfg;
    cfg.sensor.t1 = 1.0;        // effectively no relaxation
    cfg.sensor.t2_p = 1.0;      // effectively no intrinsic dephasing
    cfg.sensor.t2_hahn = 0.5;
    cfg.sensor.t2_star = 0.1;
    cfg.sensor.contrast = 1.0;
    cfg.seq.tau = 4e-6;
    cfg.seq.t_corr = 20e-6;
    cfg.seq.n_reps = 400;
    cfg.noise.alpha_corr = 1.0;  // sigma ~ 0: noiseless
    cfg.noise.alpha_fast = 1.0;
    cfg.noise.seed = 42;
    cfg.sweep.axis = SweepAxis::Tau;
    cfg.sweep.start = 1e-6;
    cfg.sweep.stop = 8e-6;
    cfg.sweep.n_points = 12;
    return cfg;
}

bool traces_identical(const Trace& a, const Trace& b) {
    if (a.axis != b.axis || a.columns.size() != b.columns.size()) return false;
    for (std::size_t c = 0; c < a.columns.size(); ++c) {
        if (a.columns[c].name != b.columns[c].name) return false;
        if (a.columns[c].values != b.columns[c].values) return false;
        if (a.columns[c].stderrs != b.columns[c].stderrs) return false;
    }
    return true;
}

}  // namespace

TEST_SUITE("block-sim.simulate") {

TEST_CASE("identical seed gives a bit-identical trace") {
    SimConfig cfg = base_config();
    cfg.tones.push_back({2e5, khz_to_omega(70.0), {}});
    const Trace a = simulate_trace(cfg, Protocol::Resolute);
    const Trace b = simulate_trace(cfg, Protocol::Resolute);
    CHECK(traces_identical(a, b));
    cfg.noise.seed = 43;
    const Trace c = simulate_trace(cfg, Protocol::Resolute);
    CHECK(!traces_identical(a, c));
}

TEST_CASE("signals stay within physical bounds") {
    SimConfig cfg = base_config();
    cfg.tones.push_back({8e5, khz_to_omega(90.0), {}});
    cfg.noise.alpha_corr = 25e-12;
    cfg.noise.alpha_fast = 25e-12;
    const Trace t = simulate_trace(cfg, Protocol::Resolute);
    for (const char* name : {"s_minus", "s_plus"}) {
        for (double v : t.column(name).values) {
            CHECK(v >= -1.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("static environment: Diff flat at maximum, X-pair oscillates") {
    SimConfig cfg = base_config();
    cfg.dc.detuning = khz_to_omega(150.0);
    cfg.dc.hyperfine = khz_to_omega(40.0);
    cfg.seq.n_reps = 200;
    const Trace t = simulate_trace(cfg, Protocol::Resolute);
    const auto& s_minus = t.column("s_minus").values;
    double lo = 1e9, hi = -1e9;
    for (double v : s_minus) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    // noiseless static phases cancel exactly: s_minus == contrast at every tau
    CHECK(lo == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(hi == doctest::Approx(1.0).epsilon(1e-9));

    const auto& s_x = t.column("s_x").values;
    double xlo = 1e9, xhi = -1e9;
    for (double v : s_x) {
        xlo = std::min(xlo, v);
        xhi = std::max(xhi, v);
    }
    CHECK(xhi - xlo > 0.5);  // the X-only signal retains the DC oscillation
}

TEST_CASE("standard errors scale as one over sqrt of the budget") {
    SimConfig cfg = base_config();
    cfg.tones.push_back({3e5, khz_to_omega(60.0), {}});
    cfg.sweep.n_points = 1;
    cfg.sweep.start = cfg.sweep.stop = 5e-6;
    cfg.seq.n_reps = 400;
    const Trace small = simulate_trace(cfg, Protocol::Resolute);
    cfg.seq.n_reps = 40000;  // 100x budget
    const Trace big = simulate_trace(cfg, Protocol::Resolute);
    const double ratio = small.column("s_minus").stderrs[0] / big.column("s_minus").stderrs[0];
    CHECK(ratio == doctest::Approx(10.0).epsilon(0.10));
}

TEST_CASE("shots enter the budget like repetitions") {
    SimConfig cfg = base_config();
    cfg.tones.push_back({3e5, khz_to_omega(60.0), {}});
    cfg.sweep.n_points = 1;
    cfg.sweep.start = cfg.sweep.stop = 5e-6;
    cfg.seq.n_reps = 2000;
    cfg.shots_per_block = 1;
    const Trace one = simulate_trace(cfg, Protocol::Resolute);
    cfg.shots_per_block = 16;
    const Trace many = simulate_trace(cfg, Protocol::Resolute);
    const double ratio = one.column("s_minus").stderrs[0] / many.column("s_minus").stderrs[0];
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.10));
}

TEST_CASE("deer: no flip means no dipolar oscillation") {
    SimConfig cfg = base_config();
    cfg.seq.n_reps = 200;
    TargetSpin target;
    target.dipolar = khz_to_omega(600.0);
    const Trace t = simulate_deer_resolute(cfg, target, 0.0);
    for (double v : t.column("s_minus").values) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(simulate_deer_resolute(cfg, target, 1.5), std::invalid_argument);
}

TEST_CASE("deer: oscillation amplitude is affine in the flip probability") {
    SimConfig cfg = base_config();
    cfg.seq.n_reps = 6000;
    cfg.sweep.axis = SweepAxis::Tau;
    cfg.sweep.start = 0.1e-6;
    cfg.sweep.stop = 3.4e-6;  // two periods at 0.6 MHz
    cfg.sweep.n_points = 48;
    TargetSpin target;
    target.dipolar = khz_to_omega(600.0);

    // regression of measured amplitude against (2p-1)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double ps[] = {0.2, 0.4, 0.6, 0.8, 1.0};
    for (double p : ps) {
        const Trace t = simulate_deer_resolute(cfg, target, p);
        double lo = 1e9, hi = -1e9;
        for (double v : t.column("s_minus").values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double amplitude = 0.5 * (hi - lo);
        const double x = 2.0 * p - 1.0;
        sx += x;
        sy += amplitude;
        sxx += x * x;
        sxy += x * amplitude;
    }
    const int n = 5;
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    CHECK(slope == doctest::Approx(0.5).epsilon(0.06));
    CHECK(intercept == doctest::Approx(0.5).epsilon(0.06));
    // residuals of the affine law stay small
    for (double p : ps) {
        const Trace t = simulate_deer_resolute(cfg, target, p);
        double lo = 1e9, hi = -1e9;
        for (double v : t.column("s_minus").values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK(std::abs(0.5 * (hi - lo) - (intercept + slope * (2.0 * p - 1.0))) <= 0.03);
    }
}

TEST_CASE("invalid configurations are rejected") {
    SimConfig cfg = base_config();
    cfg.sweep.stop = cfg.sweep.start - 1e-6;
    CHECK_THROWS_AS(simulate_trace(cfg, Protocol::Resolute), std::invalid_argument);
    cfg = base_config();
    cfg.shots_per_block = 0;
    CHECK_THROWS_AS(simulate_trace(cfg, Protocol::Resolute), std::invalid_argument);
    cfg = base_config();
    cfg.seq.t_corr = 2.0;  // above T1
    CHECK_THROWS_AS(simulate_trace(cfg, Protocol::Resolute), std::invalid_argument);
}

}  // TEST_SUITE
