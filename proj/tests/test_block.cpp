#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "resolute/block.hpp"
#include "resolute/rng.hpp"

using namespace resolute;

TEST_SUITE("block-sim") {

TEST_CASE("ideal block anchors") {
    const DecayFactors ideal{1.0, 1.0};
    CHECK(propagate_block({MiddlePhase::X, +1}, 0.0, 0.0, ideal, 1.0) == doctest::Approx(1.0));
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        const double phi2 = rng.phase();
        CHECK(propagate_block({MiddlePhase::Y, +1}, 0.0, phi2, ideal, 1.0) ==
              doctest::Approx(0.5));
    }
}

TEST_CASE("blocks match the density-matrix oracle") {
    Rng rng(17);
    for (int i = 0; i < 300; ++i) {
        const double phi1 = rng.phase();
        const double phi2 = rng.phase();
        const double s_window = 0.5 + 0.5 * rng.uniform();   // per-window coherence factor
        const double d_store = 0.5 + 0.5 * rng.uniform();
        const double contrast = 0.2 + 0.8 * rng.uniform();
        const DecayFactors decay{s_window * s_window, d_store};
        for (const BlockSpec& block : canonical_blocks()) {
            const double lib = propagate_block(block, phi1, phi2, decay, contrast);
            const double dm = oracles::propagate_block_dm(block.middle_phase, block.readout_sign,
                                                          phi1, phi2, s_window, d_store, contrast);
            CHECK(std::abs(lib - dm) <= 1e-12);
        }
    }
}

TEST_CASE("channel combination anchors") {
    // static field: phi1 == phi2, ideal decay
    const DecayFactors ideal{1.0, 1.0};
    Rng rng(23);
    for (int i = 0; i < 20; ++i) {
        const double phi = rng.phase();
        const auto p = canonical_blocks();
        double probs[4];
        for (int b = 0; b < 4; ++b) probs[b] = propagate_block(p[b], phi, phi, ideal, 1.0);
        const ChannelSignals s = combine_channels(probs[0], probs[1], probs[2], probs[3]);
        CHECK(s.s_minus == doctest::Approx(1.0).epsilon(1e-12));
    }

    // phi1 = phi2 = pi/2
    const auto blocks = canonical_blocks();
    double probs[4];
    for (int b = 0; b < 4; ++b) {
        probs[b] = propagate_block(blocks[b], pi / 2, pi / 2, ideal, 1.0);
    }
    const ChannelSignals s = combine_channels(probs[0], probs[1], probs[2], probs[3]);
    CHECK(s.s_plus == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(s.s_minus == doctest::Approx(+1.0).epsilon(1e-12));
}

TEST_CASE("channel combination reproduces cos(phi1 -/+ phi2)") {
    Rng rng(31);
    for (int i = 0; i < 100; ++i) {
        const double phi1 = rng.phase();
        const double phi2 = rng.phase();
        const double d = 0.3 + 0.7 * rng.uniform();
        const double c = 0.2 + 0.8 * rng.uniform();
        const DecayFactors decay{d, 1.0};
        const auto blocks = canonical_blocks();
        double probs[4];
        for (int b = 0; b < 4; ++b) probs[b] = propagate_block(blocks[b], phi1, phi2, decay, c);
        const ChannelSignals s = combine_channels(probs[0], probs[1], probs[2], probs[3]);
        CHECK(s.s_minus == doctest::Approx(c * d * std::cos(phi1 - phi2)).epsilon(1e-12));
        CHECK(s.s_plus == doctest::Approx(c * d * std::cos(phi1 + phi2)).epsilon(1e-12));
    }
}

TEST_CASE("decay factors") {
    SensorParams sensor;
    sensor.t2_p = 5.1e-6;
    sensor.t1 = 500e-6;
    SequenceParams seq;
    seq.tau = 5.1e-6;
    seq.t_corr = 500e-7;
    const DecayFactors d = decay_factors(sensor, seq);
    CHECK(d.d_sense == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(d.d_store == doctest::Approx(std::exp(-0.1)).epsilon(1e-12));
}

TEST_CASE("analytic envelopes") {
    NoiseParams noise;
    noise.alpha_corr = 2e-12;
    noise.alpha_fast = 6.50e-12;
    CHECK(analytic_envelope(Channel::Sum, 0.0, noise) == 1.0);
    CHECK(analytic_envelope(Channel::Diff, 0.0, noise) == 1.0);
    // Diff envelope = 1/e at tau = 5.1 us requires alpha_fast = 6.50 us^2
    noise.alpha_fast = us_to_s(5.1) * us_to_s(5.1) / 4.0;
    CHECK(noise.alpha_fast == doctest::Approx(6.5025e-12).epsilon(1e-6));
    CHECK(analytic_envelope(Channel::Diff, 5.1e-6, noise) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(analytic_envelope(Channel::Sum, 3e-6, noise) ==
          doctest::Approx(std::exp(-9e-12 / noise.alpha_corr)).epsilon(1e-12));
}

TEST_CASE("Gaussian sampling reproduces the Ramsey envelope") {
    // average of cos(gamma db tau) over db ~ N(0, 1/sqrt(2 alpha)) vs
    // exp(-gamma^2 tau^2 / (4 alpha))
    const double gamma = 1.7608e7;  // rad/(s G)
    const double alpha = 40.0;      // G^-2
    const double sigma = 1.0 / std::sqrt(2.0 * alpha);
    Rng rng(12345);
    for (double tau_us : {0.2, 0.38, 0.8}) {
        const double tau = us_to_s(tau_us);
        double acc = 0.0;
        const int n = 1000000;
        for (int i = 0; i < n; ++i) acc += std::cos(gamma * sigma * rng.normal() * tau);
        acc /= n;
        const double expected = ramsey_envelope(tau, gamma, alpha);
        CHECK(std::abs(acc - expected) <= 0.005);
    }
}

TEST_CASE("dipolar contrast scaling") {
    CHECK(dipolar_contrast(1.0, 1.0) == doctest::Approx(1.0));
    CHECK(dipolar_contrast(0.0, 1.0) == doctest::Approx(0.0));
    CHECK(dipolar_contrast(0.5, 0.8) == doctest::Approx(0.4));
    CHECK_THROWS_AS(dipolar_contrast(1.5, 1.0), std::invalid_argument);
}

}  // TEST_SUITE
