#include "resolute/chirp.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "resolute/block.hpp"
#include "resolute/math.hpp"

namespace resolute {

double q_factor(double nu_hz, double t_p_s, double span_hz) {
    if (nu_hz <= 0.0 || t_p_s <= 0.0 || span_hz <= 0.0) {
        throw std::invalid_argument("q_factor: all parameters must be positive");
    }
    return two_pi * nu_hz * nu_hz * t_p_s / span_hz;
}

double span_from_q(double nu_hz, double t_p_s, double q) {
    if (nu_hz <= 0.0 || t_p_s <= 0.0 || q <= 0.0) {
        throw std::invalid_argument("span_from_q: all parameters must be positive");
    }
    return two_pi * nu_hz * nu_hz * t_p_s / q;
}

ChirpParams ChirpParams::from_span(double t_p_s, double span_hz, double nu_hz,
                                   double center_detuning_hz) {
    ChirpParams c;
    c.t_p = t_p_s;
    c.span = span_hz;
    c.q = q_factor(nu_hz, t_p_s, span_hz);
    c.center_detuning = center_detuning_hz;
    return c;
}

ChirpParams ChirpParams::from_q(double t_p_s, double q, double nu_hz,
                                double center_detuning_hz) {
    ChirpParams c;
    c.t_p = t_p_s;
    c.q = q;
    c.span = span_from_q(nu_hz, t_p_s, q);
    c.center_detuning = center_detuning_hz;
    return c;
}

ChirpParams chirp_preset_contrast(double nu_hz) { return ChirpParams::from_q(2e-6, 5.0, nu_hz); }

ChirpParams chirp_preset_spectroscopy(double nu_hz) {
    return ChirpParams::from_span(1.6e-6, 2.5e6, nu_hz);
}

namespace {

using State = std::array<std::complex<double>, 2>;

thread_local double g_last_norm_error = 0.0;

/// dpsi/dt = -i H(t) psi with H = (Delta(t) sigma_z + Omega sigma_x) / 2.
State schrodinger_rhs(const State& psi, double delta, double omega_rabi) {
    const std::complex<double> minus_i(0.0, -1.0);
    State d;
    d[0] = minus_i * (0.5 * delta * psi[0] + 0.5 * omega_rabi * psi[1]);
    d[1] = minus_i * (0.5 * omega_rabi * psi[0] - 0.5 * delta * psi[1]);
    return d;
}

}  // namespace

double lz_flip_probability(const ChirpParams& chirp, double nu_hz, double detuning_hz) {
    if (chirp.t_p <= 0.0 || chirp.span <= 0.0 || nu_hz <= 0.0) {
        throw std::invalid_argument("lz_flip_probability: invalid chirp");
    }
    const double f_max = std::max({nu_hz, chirp.span, std::abs(detuning_hz), 1.0});
    // Well below the 1/(50 max(nu, span)) cap so fourth-order norm drift
    // stays under 1e-9 over the whole sweep.
    const double steps_real = std::ceil(320.0 * chirp.t_p * f_max);
    if (steps_real > 5e7) {
        throw std::runtime_error("lz_flip_probability: step count overflow");
    }
    const int n = std::max(64, static_cast<int>(steps_real));
    const double h = chirp.t_p / n;
    const double omega_rabi = two_pi * nu_hz;
    const double rate = chirp.span / chirp.t_p;  // Hz per second
    auto delta_at = [&](double t) {
        return two_pi * (-0.5 * chirp.span + rate * t - detuning_hz);
    };

    State psi{std::complex<double>(1.0, 0.0), std::complex<double>(0.0, 0.0)};
    for (int i = 0; i < n; ++i) {
        const double t = i * h;
        const double d1 = delta_at(t);
        const double d2 = delta_at(t + 0.5 * h);
        const double d3 = delta_at(t + h);
        const State k1 = schrodinger_rhs(psi, d1, omega_rabi);
        State tmp{psi[0] + 0.5 * h * k1[0], psi[1] + 0.5 * h * k1[1]};
        const State k2 = schrodinger_rhs(tmp, d2, omega_rabi);
        tmp = {psi[0] + 0.5 * h * k2[0], psi[1] + 0.5 * h * k2[1]};
        const State k3 = schrodinger_rhs(tmp, d2, omega_rabi);
        tmp = {psi[0] + h * k3[0], psi[1] + h * k3[1]};
        const State k4 = schrodinger_rhs(tmp, d3, omega_rabi);
        psi[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        psi[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    }
    const double norm = std::norm(psi[0]) + std::norm(psi[1]);
    g_last_norm_error = std::abs(norm - 1.0);
    return std::norm(psi[1]) / norm;
}

double lz_last_norm_error() { return g_last_norm_error; }

namespace {

/// Gauss-Hermite nodes and weights for the weight exp(-x^2).
void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const double pim4 = 0.7511255444649425;  // pi^(-1/4)
    const int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(n, 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * nodes[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * nodes[1];
        } else {
            z = 2.0 * z - nodes[i - 2];
        }
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = pim4;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 -
                     std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        weights[i] = 2.0 / (pp * pp);
        weights[n - 1 - i] = weights[i];
    }
}

}  // namespace

double ensemble_flip(const ChirpParams& chirp, double nu_hz, double line_sigma_hz, int n_nodes) {
    if (line_sigma_hz < 0.0) throw std::invalid_argument("line_sigma must be non-negative");
    if (n_nodes < 32) throw std::invalid_argument("ensemble_flip needs at least 32 nodes");
    if (line_sigma_hz == 0.0) {
        return lz_flip_probability(chirp, nu_hz, -chirp.center_detuning);
    }
    std::vector<double> x, w;
    gauss_hermite(n_nodes, x, w);
    const double sqrt_pi = std::sqrt(pi);
    double acc = 0.0;
    for (int i = 0; i < n_nodes; ++i) {
        const double delta = std::sqrt(2.0) * line_sigma_hz * x[i];
        acc += w[i] * lz_flip_probability(chirp, nu_hz, delta - chirp.center_detuning);
    }
    return acc / sqrt_pi;
}

std::vector<QContrastPoint> contrast_vs_q(double t_p_s, const std::vector<double>& q_list,
                                          double nu_hz, double line_sigma_hz,
                                          double readout_contrast, int n_nodes) {
    if (q_list.empty()) throw std::invalid_argument("contrast_vs_q: empty q list");
    std::vector<QContrastPoint> out;
    out.reserve(q_list.size());
    for (double q : q_list) {
        const ChirpParams chirp = ChirpParams::from_q(t_p_s, q, nu_hz);
        QContrastPoint pt;
        pt.q = q;
        pt.span = chirp.span;
        pt.p_avg = ensemble_flip(chirp, nu_hz, line_sigma_hz, n_nodes);
        pt.contrast = dipolar_contrast(pt.p_avg, readout_contrast);
        out.push_back(pt);
    }
    return out;
}

double rect_pulse_flip_probability(double nu_hz, double t_pulse_s, double detuning_hz) {
    const double nu2 = nu_hz * nu_hz;
    const double eff2 = nu2 + detuning_hz * detuning_hz;
    if (eff2 == 0.0) return 0.0;
    const double s = std::sin(pi * t_pulse_s * std::sqrt(eff2));
    return nu2 / eff2 * s * s;
}

std::vector<DeerScanPoint> deer_frequency_scan(const std::vector<double>& freq_grid_hz,
                                               PulseKind kind, const TargetSpin& target,
                                               const ChirpParams& chirp, double readout_contrast,
                                               int n_nodes) {
    if (freq_grid_hz.empty()) throw std::invalid_argument("deer_frequency_scan: empty grid");
    for (std::size_t i = 1; i < freq_grid_hz.size(); ++i) {
        if (freq_grid_hz[i] <= freq_grid_hz[i - 1]) {
            throw std::invalid_argument("deer_frequency_scan: grid must be strictly increasing");
        }
    }
    if (target.rabi <= 0.0) throw std::invalid_argument("deer_frequency_scan: rabi must be positive");

    std::vector<double> x, w;
    const bool broadened = target.line_sigma > 0.0;
    if (broadened) gauss_hermite(n_nodes, x, w);
    const double sqrt_pi = std::sqrt(pi);
    const double t_pi = 1.0 / (2.0 * target.rabi);

    std::vector<DeerScanPoint> out;
    out.reserve(freq_grid_hz.size());
    for (double fc : freq_grid_hz) {
        auto flip_at = [&](double spin_freq) {
            const double detuning = spin_freq - fc;
            return kind == PulseKind::Pi
                       ? rect_pulse_flip_probability(target.rabi, t_pi, detuning)
                       : lz_flip_probability(chirp, target.rabi, detuning);
        };
        double p_avg = 0.0;
        if (broadened) {
            for (int i = 0; i < n_nodes; ++i) {
                p_avg += w[i] * flip_at(target.larmor_freq + std::sqrt(2.0) * target.line_sigma * x[i]);
            }
            p_avg /= sqrt_pi;
        } else {
            p_avg = flip_at(target.larmor_freq);
        }
        out.push_back({fc, 1.0 - readout_contrast * p_avg, p_avg});
    }
    return out;
}

}  // namespace resolute
