#include <doctest.h>

#include <set>

#include "resolute/rng.hpp"
#include "resolute/types.hpp"

using namespace resolute;

TEST_SUITE("core-model") {

TEST_CASE("paper sensor parameters validate") {
    SensorParams p;
    p.t2_star = 0.38e-6;
    p.t2_p = 5.1e-6;
    p.t2_hahn = 4.3e-6;
    p.t1 = 500e-6;
    CHECK_NOTHROW(validate_sensor(p));
}

TEST_CASE("contrast bounds") {
    SensorParams p;
    p.contrast = 0.0;
    CHECK_THROWS_WITH_AS(validate_sensor(p), "contrast out of range (0, 1]",
                         std::invalid_argument);
    p.contrast = 1.0;
    CHECK_NOTHROW(validate_sensor(p));
    p.contrast = 1.0 + 1e-12;
    CHECK_THROWS_AS(validate_sensor(p), std::invalid_argument);
}

TEST_CASE("coherence-time ordering") {
    SensorParams p;
    p.t2_star = 10e-6;
    p.t2_hahn = 4.3e-6;
    CHECK_THROWS_WITH_AS(validate_sensor(p), "T2* exceeds T2", std::invalid_argument);
}

TEST_CASE("larmor frequency reproduces the measured fields") {
    CHECK(larmor_frequency(64.3, Species::C13) == doctest::Approx(68.8e3).epsilon(0.0015));
    CHECK(larmor_frequency(49.5, Species::C13) == doctest::Approx(52.9e3).epsilon(0.004));
    CHECK(larmor_frequency(0.0, Species::C13) == 0.0);
    CHECK(larmor_frequency(0.0, Species::Electron) == 0.0);
    CHECK_THROWS_AS(larmor_frequency(-1.0, Species::C13), std::invalid_argument);
}

TEST_CASE("larmor frequency is linear in the field") {
    Rng rng(42);
    for (int i = 0; i < 100; ++i) {
        const double b = 200.0 * rng.uniform();
        for (Species s : {Species::C13, Species::Electron}) {
            CHECK(larmor_frequency(2.0 * b, s) ==
                  doctest::Approx(2.0 * larmor_frequency(b, s)).epsilon(1e-12));
        }
    }
}

TEST_CASE("effective period") {
    SequenceParams seq;
    seq.tau = 5e-6;
    seq.t_corr = 100e-6;
    CHECK(effective_period(seq) == doctest::Approx(102.5e-6).epsilon(1e-12));
    seq.tau = 6e-6;
    seq.t_corr = 10e-6;
    CHECK(effective_period(seq) == doctest::Approx(13e-6).epsilon(1e-12));
    seq.tau = 1e-30;  // tau -> 0 limit
    CHECK(effective_period(seq) == doctest::Approx(10e-6).epsilon(1e-12));
}

TEST_CASE("unit conversions round-trip to 1e-12") {
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        const double us = 1e3 * rng.uniform() + 1e-3;
        CHECK(s_to_us(us_to_s(us)) == doctest::Approx(us).epsilon(1e-12));
        const double khz = 1e4 * rng.uniform() + 1e-3;
        CHECK(omega_to_khz(khz_to_omega(khz)) == doctest::Approx(khz).epsilon(1e-12));
        const double hz = 1e8 * rng.uniform() + 1e-3;
        CHECK(omega_to_hz(hz_to_omega(hz)) == doctest::Approx(hz).epsilon(1e-12));
    }
}

TEST_CASE("the four canonical blocks are distinct and ordered") {
    const auto blocks = canonical_blocks();
    CHECK(blocks[0] == BlockSpec{MiddlePhase::X, +1});
    CHECK(blocks[1] == BlockSpec{MiddlePhase::X, -1});
    CHECK(blocks[2] == BlockSpec{MiddlePhase::Y, +1});
    CHECK(blocks[3] == BlockSpec{MiddlePhase::Y, -1});
    std::set<std::pair<int, int>> seen;
    for (const BlockSpec& b : blocks) {
        seen.insert({static_cast<int>(b.middle_phase), b.readout_sign});
    }
    CHECK(seen.size() == 4);
}

TEST_CASE("sequence warnings") {
    SequenceParams seq;
    seq.tau = 10e-6;
    seq.t_corr = 5e-6;
    CHECK(sequence_warnings(seq).size() == 1);
    seq.t_corr = 20e-6;
    CHECK(sequence_warnings(seq).empty());
    SensorParams sensor;
    seq.t_corr = 600e-6;  // above the 500 us default T1
    CHECK(sequence_warnings(seq, sensor).size() == 1);
}

TEST_CASE("tone and noise invariants") {
    ToneSignal t;
    t.amplitude = -1.0;
    CHECK_THROWS_AS(validate_tone(t), std::invalid_argument);
    t.amplitude = 1.0;
    t.phi = two_pi;  // half-open interval
    CHECK_THROWS_AS(validate_tone(t), std::invalid_argument);
    t.phi = 0.0;
    CHECK_NOTHROW(validate_tone(t));

    NoiseParams n;
    n.alpha_corr = 0.0;
    CHECK_THROWS_AS(validate_noise(n), std::invalid_argument);
}

}  // TEST_SUITE
