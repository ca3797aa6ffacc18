#pragma once

// Independent reference implementations used only by tests. These must not
// share code paths with the library routines they check.

#include <array>
#include <cmath>
#include <complex>
#include <functional>

#include "resolute/types.hpp"

namespace oracles {

using cd = std::complex<double>;

/// 2x2 density matrix, row major.
struct Dm {
    std::array<cd, 4> m{};

    static Dm ground() {
        Dm d;
        d.m[0] = 1.0;
        return d;
    }
};

using Mat = std::array<cd, 4>;

inline Mat mat_mul(const Mat& a, const Mat& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

inline Mat dagger(const Mat& a) {
    return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])};
}

inline void apply_unitary(Dm& rho, const Mat& u) {
    rho.m = mat_mul(mat_mul(u, rho.m), dagger(u));
}

/// e^(-i theta sigma_x / 2)
inline Mat u_x(double theta) {
    const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
    return {cd(c, 0), cd(0, -s), cd(0, -s), cd(c, 0)};
}

/// e^(-i theta sigma_y / 2)
inline Mat u_y(double theta) {
    const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
    return {cd(c, 0), cd(-s, 0), cd(s, 0), cd(c, 0)};
}

/// e^(-i phi sigma_z / 2): free evolution accumulating phase phi
inline Mat u_z(double phi) {
    return {std::polar(1.0, -0.5 * phi), cd(0, 0), cd(0, 0), std::polar(1.0, 0.5 * phi)};
}

/// Pure dephasing: off-diagonals scaled by f.
inline void dephase(Dm& rho, double f) {
    rho.m[1] *= f;
    rho.m[2] *= f;
}

/// Correlation-window channel: transverse erasure plus longitudinal
/// shrinkage toward the fully mixed state by d_store.
inline void storage_channel(Dm& rho, double d_store) {
    rho.m[1] = 0.0;
    rho.m[2] = 0.0;
    const double p0 = rho.m[0].real();
    rho.m[0] = 0.5 + d_store * (p0 - 0.5);
    rho.m[3] = 1.0 - rho.m[0].real();
}

/// Full density-matrix propagation of one phase-cycled block with ideal
/// pulses. Middle pulses are +pi/2 about the block axis; the readout pulse
/// is +/-pi/2 about x. Readout contrast scales the signed part of P0.
inline double propagate_block_dm(resolute::MiddlePhase axis, int readout_sign, double phi1,
                                 double phi2, double sense_factor_per_window, double d_store,
                                 double contrast) {
    Dm rho = Dm::ground();
    const Mat mid = axis == resolute::MiddlePhase::X ? u_x(M_PI / 2) : u_y(M_PI / 2);
    apply_unitary(rho, u_x(M_PI / 2));
    apply_unitary(rho, u_z(phi1));
    dephase(rho, sense_factor_per_window);
    apply_unitary(rho, mid);
    storage_channel(rho, d_store);
    apply_unitary(rho, mid);
    apply_unitary(rho, u_z(phi2));
    dephase(rho, sense_factor_per_window);
    apply_unitary(rho, u_x(readout_sign * M_PI / 2));
    const double p0 = rho.m[0].real();
    return 0.5 + contrast * (p0 - 0.5);
}

/// Central finite difference.
inline double central_diff(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Relative error with a floor on the denominator scale.
inline double rel_err(double got, double want, double scale_floor) {
    const double denom = std::max(std::abs(want), scale_floor);
    return std::abs(got - want) / denom;
}

}  // namespace oracles
