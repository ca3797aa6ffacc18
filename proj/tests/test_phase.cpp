#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "resolute/phase.hpp"
#include "resolute/rng.hpp"

using namespace resolute;

namespace {

ToneSignal random_tone(Rng& rng) {
    ToneSignal t;
    t.amplitude = 1e5 + 2.9e6 * rng.uniform();            // 0.1 .. 3 rad/us
    t.omega = khz_to_omega(1.0 + 299.0 * rng.uniform());  // 1 .. 300 kHz
    t.phi = rng.phase();
    return t;
}

SequenceParams random_seq(Rng& rng) {
    SequenceParams s;
    s.tau = us_to_s(0.5 + 7.5 * rng.uniform());      // 0.5 .. 8 us
    s.t_corr = us_to_s(5.0 + 295.0 * rng.uniform()); // 5 .. 300 us
    s.n_reps = 1;
    return s;
}

double closed_phase(const ToneSignal& t, const SequenceParams& s, Protocol p, Channel c) {
    switch (p) {
        case Protocol::Ramsey: return ramsey_phase_closed(t, s.tau);
        case Protocol::HahnEcho: return hahn_phase_closed(t, s.tau);
        case Protocol::Resolute: return resolute_phase_closed(t, s, c);
    }
    return 0.0;
}

}  // namespace

TEST_SUITE("phase-filter") {

TEST_CASE("closed forms match the quadrature oracle") {
    Rng rng(2024);
    const std::pair<Protocol, Channel> combos[] = {
        {Protocol::Ramsey, Channel::Diff},
        {Protocol::HahnEcho, Channel::Diff},
        {Protocol::Resolute, Channel::Diff},
        {Protocol::Resolute, Channel::Sum},
    };
    for (const auto& [protocol, channel] : combos) {
        double worst = 0.0;
        for (int i = 0; i < 250; ++i) {
            const ToneSignal tone = random_tone(rng);
            const SequenceParams seq = random_seq(rng);
            const double quad = phase_integral(tone, seq, protocol, channel);
            const double closed = closed_phase(tone, seq, protocol, channel);
            worst = std::max(worst,
                             oracles::rel_err(closed, quad, 1e-2 * tone.amplitude * seq.tau));
        }
        CAPTURE(to_string(protocol));
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("DC tone cancels in the Diff channel and accumulates in Sum") {
    SequenceParams seq;
    seq.tau = 4e-6;
    seq.t_corr = 50e-6;
    ToneSignal tone;
    tone.amplitude = 1.0;
    tone.omega = 0.0;
    for (double phi : {0.0, 0.7, pi / 2, 3.0}) {
        tone.phi = phi;
        CHECK(phase_integral(tone, seq, Protocol::Resolute, Channel::Diff) ==
              doctest::Approx(0.0).epsilon(0.0).scale(1e-15));
        CHECK(resolute_phase_closed(tone, seq, Channel::Diff) == 0.0);
    }
    tone.phi = pi / 2;
    CHECK(phase_integral(tone, seq, Protocol::Resolute, Channel::Sum) ==
          doctest::Approx(4e-6).epsilon(1e-9));
    CHECK(resolute_phase_closed(tone, seq, Channel::Sum) == doctest::Approx(4e-6).epsilon(1e-12));
}

TEST_CASE("Diff channel vanishes when the stored phase advances by 2*pi") {
    SequenceParams seq;
    seq.tau = 5e-6;
    ToneSignal tone;
    tone.amplitude = 2e5;
    // omega (t_corr + tau/2) = 2*pi exactly
    tone.omega = khz_to_omega(40.0);
    seq.t_corr = two_pi / tone.omega - 0.5 * seq.tau;
    for (double phi : {0.0, 1.0, 2.5, 5.0}) {
        tone.phi = phi;
        const double quad = phase_integral(tone, seq, Protocol::Resolute, Channel::Diff);
        CHECK(std::abs(quad) <= 1e-9 * tone.amplitude * seq.tau);
        CHECK(std::abs(resolute_phase_closed(tone, seq, Channel::Diff)) <=
              1e-12 * tone.amplitude * seq.tau);
    }
}

TEST_CASE("printed closed form equals the Sum channel term-for-term") {
    ToneSignal tone;
    tone.amplitude = 7.3e5;
    tone.omega = khz_to_omega(68.8);
    tone.phi = 1.234;
    SequenceParams seq;
    seq.tau = 5e-6;
    seq.t_corr = 37e-6;
    const double a = tone.amplitude, w = tone.omega, tau = seq.tau, tc = seq.t_corr;
    const double printed = a * tau * std::sin(0.5 * w * tc + 0.5 * w * tau + *tone.phi) *
                           std::cos(0.5 * w * tc + 0.25 * w * tau) * sinc(0.25 * w * tau);
    CHECK(resolute_phase_closed(tone, seq, Channel::Sum) == printed);
}

TEST_CASE("Ramsey closed-form anchors") {
    ToneSignal tone;
    tone.amplitude = 1.0;
    tone.omega = 0.0;
    tone.phi = 0.0;
    CHECK(ramsey_phase_closed(tone, 3e-6) == doctest::Approx(3e-6).epsilon(1e-12));
    tone.phi = pi / 2;
    CHECK(ramsey_phase_closed(tone, 3e-6) == doctest::Approx(0.0).scale(1e-15));
}

TEST_CASE("Hahn closed-form anchors") {
    ToneSignal tone;
    tone.amplitude = 1.0;
    tone.omega = 0.0;
    for (double phi : {0.0, 1.0, 4.0}) {
        tone.phi = phi;
        CHECK(hahn_phase_closed(tone, 6e-6) == doctest::Approx(0.0).scale(1e-15));
    }
    // omega tau = 2*pi at phi = pi/2
    tone.omega = khz_to_omega(100.0);
    const double tau = two_pi / tone.omega;
    tone.phi = pi / 2;
    CHECK(hahn_phase_closed(tone, tau) == doctest::Approx(0.0).scale(1e-12));
}

TEST_CASE("phases are linear in amplitude, filters quadratic") {
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        ToneSignal tone = random_tone(rng);
        const SequenceParams seq = random_seq(rng);
        const double p1 = resolute_phase_closed(tone, seq, Channel::Diff);
        const double f1 = tone.amplitude * tone.amplitude *
                          filter_function(Protocol::Resolute, Channel::Sum, seq, tone.omega);
        tone.amplitude *= 3.0;
        const double p3 = resolute_phase_closed(tone, seq, Channel::Diff);
        const double f3 = tone.amplitude * tone.amplitude *
                          filter_function(Protocol::Resolute, Channel::Sum, seq, tone.omega);
        CHECK(p3 == doctest::Approx(3.0 * p1).epsilon(1e-12));
        CHECK(f3 == doctest::Approx(9.0 * f1).epsilon(1e-12));
    }
}

TEST_CASE("filter function matches the Monte-Carlo phase average") {
    Rng rng(99);
    for (int i = 0; i < 12; ++i) {
        ToneSignal tone = random_tone(rng);
        const SequenceParams seq = random_seq(rng);
        for (Channel ch : {Channel::Diff, Channel::Sum}) {
            const double analytic = tone.amplitude * tone.amplitude *
                                    filter_function(Protocol::Resolute, ch, seq, tone.omega);
            double mc = 0.0;
            const int n = 100000;
            for (int k = 0; k < n; ++k) {
                tone.phi = rng.phase();
                const double phi = resolute_phase_closed(tone, seq, ch);
                mc += phi * phi;
            }
            mc /= n;
            const double scale = tone.amplitude * tone.amplitude * seq.tau * seq.tau;
            CHECK(oracles::rel_err(analytic, mc, 1e-3 * scale) <= 0.01);
        }
    }
}

TEST_CASE("filter DC limits") {
    SequenceParams seq;
    seq.tau = 5e-6;
    seq.t_corr = 80e-6;
    CHECK(filter_function(Protocol::Resolute, Channel::Diff, seq, 0.0) == 0.0);
    // A^2 tau^2 / 2 at unit amplitude
    CHECK(filter_function(Protocol::Resolute, Channel::Sum, seq, 0.0) ==
          doctest::Approx(0.5 * seq.tau * seq.tau).epsilon(1e-12));
}

TEST_CASE("filter extrema sit on the omega*(t_corr + tau/2) = k*pi lattice") {
    const double tau = 5e-6;
    for (double f_khz : {23.0, 68.8, 117.0}) {
        const double omega = khz_to_omega(f_khz);
        SequenceParams seq;
        seq.tau = tau;
        // bracket the extremum near omega * t_eff = 6 pi (Sum maximum at even k)
        const double t_eff_star = 6.0 * pi / omega;
        const double dt = 1e-3 / omega;
        double best_t = 0.0, best_v = -1.0;
        for (double t_eff = t_eff_star - 0.2 / omega; t_eff <= t_eff_star + 0.2 / omega;
             t_eff += dt) {
            seq.t_corr = t_eff - 0.5 * tau;
            const double v = filter_function(Protocol::Resolute, Channel::Sum, seq, omega);
            if (v > best_v) {
                best_v = v;
                best_t = t_eff;
            }
        }
        CHECK(std::abs(best_t * omega - 6.0 * pi) <= 2.0 * dt * omega);
        // Diff extrema at odd multiples of pi
        const double t_eff_diff = 5.0 * pi / omega;
        best_v = -1.0;
        for (double t_eff = t_eff_diff - 0.2 / omega; t_eff <= t_eff_diff + 0.2 / omega;
             t_eff += dt) {
            seq.t_corr = t_eff - 0.5 * tau;
            const double v = filter_function(Protocol::Resolute, Channel::Diff, seq, omega);
            if (v > best_v) {
                best_v = v;
                best_t = t_eff;
            }
        }
        CHECK(std::abs(best_t * omega - 5.0 * pi) <= 2.0 * dt * omega);
    }
}

TEST_CASE("filter period along t_corr is one signal period") {
    const double omega = khz_to_omega(68.8);
    SequenceParams seq;
    seq.tau = 6e-6;
    const double period = two_pi / omega;
    Rng rng(5);
    for (int i = 0; i < 40; ++i) {
        seq.t_corr = us_to_s(10.0 + 100.0 * rng.uniform());
        const double v0 = filter_function(Protocol::Resolute, Channel::Diff, seq, omega);
        seq.t_corr += period;
        const double v1 = filter_function(Protocol::Resolute, Channel::Diff, seq, omega);
        CHECK(v1 == doctest::Approx(v0).epsilon(1e-9));
    }
}

TEST_CASE("filter_map layout and errors") {
    CHECK_THROWS_AS(filter_map({}, {1.0}, 5e-6, Channel::Sum), std::invalid_argument);
    CHECK_THROWS_AS(filter_map({1e-6, 1e-6}, {1.0}, 5e-6, Channel::Sum), std::invalid_argument);

    // degenerate single-cell grid equals filter_function
    SequenceParams seq;
    seq.tau = 5e-6;
    seq.t_corr = 33e-6;
    const double omega = khz_to_omega(70.0);
    const FilterMap map = filter_map({seq.t_corr}, {omega}, seq.tau, Channel::Sum, 2.0);
    CHECK(map.at(0, 0) ==
          doctest::Approx(4.0 * filter_function(Protocol::Resolute, Channel::Sum, seq, omega))
              .epsilon(1e-12));
}

TEST_CASE("three-tone peak positions match the layout") {
    // peaks at t_corr = 2 pi n / omega - tau/2, tau = 5.5 us
    const double tau = 5.5e-6;
    for (double f_khz : {53.0, 71.0, 117.0}) {
        const double omega = khz_to_omega(f_khz);
        const int n = 2;
        const double expected = two_pi * n / omega - 0.5 * tau;
        std::vector<double> tc;
        const double lo = expected * 0.9, hi = expected * 1.1;
        for (int i = 0; i < 400; ++i) tc.push_back(lo + (hi - lo) * i / 399.0);
        const FilterMap map = filter_map(tc, {omega}, tau, Channel::Sum);
        std::size_t best = 0;
        for (std::size_t i = 1; i < tc.size(); ++i) {
            if (map.at(i, 0) > map.at(best, 0)) best = i;
        }
        CHECK(std::abs(tc[best] - expected) / expected <= 0.02);
    }
}

}  // TEST_SUITE
