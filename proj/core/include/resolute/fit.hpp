#pragma once

#include <string>
#include <vector>

#include "resolute/simulate.hpp"

namespace resolute {

struct Periodogram {
    std::vector<double> freq;   ///< Hz, k/(N dt) for k = 0..N-1 (two-sided)
    std::vector<double> power;  ///< |X_k|^2 / N of the mean-subtracted series
};

/// Mean-subtracted discrete Fourier power spectrum. The abscissa must be
/// uniformly spaced to 1e-6 relative; otherwise an error directs the caller
/// to resample.
Periodogram periodogram(const std::vector<double>& t_s, const std::vector<double>& y);
Periodogram periodogram(const Trace& trace, const std::string& column);

/// Location of the largest power bin in [f_min, f_max] (one-sided search),
/// refined by parabolic interpolation of log-power.
double peak_frequency(const Periodogram& p, double f_min_hz, double f_max_hz);

/// Least-squares fit output: parameter values with 1-sigma uncertainties
/// from the local quadratic model at the optimum.
struct FitResult {
    std::string model;
    std::vector<std::string> names;
    std::vector<double> values;
    std::vector<double> sigmas;
    std::vector<bool> reliable;
    double residual_norm = 0.0;  ///< sqrt(sum of squared residuals)
    bool converged = false;
    int iterations = 0;
    std::vector<std::string> warnings;

    double value(const std::string& name) const;
    double sigma(const std::string& name) const;
};

struct CosineFitOptions {
    int n_components = 2;
    bool fit_decay = true;   ///< when false the envelope is fixed at 1
    bool fit_beta = false;   ///< when false beta is fixed at 1
    std::vector<double> freq_hints_hz;   ///< initial frequencies; else periodogram peaks
    std::vector<double> warm_start;      ///< full parameter vector to resume from
    int max_iter = 500;
};

/// Damped Gauss-Newton fit of exp(-(t/T)^beta) * sum_k a_k cos(2 pi f_k t + c_k)
/// + offset. Steps are accepted only when the objective decreases; the
/// Levenberg damping grows by 10 on rejection and shrinks by 3 on acceptance.
/// Parameter names: offset, decay_T, beta, amp_k, freq_k, phase_k.
FitResult fit_decaying_cosines(const std::vector<double>& t_s, const std::vector<double>& y,
                               const CosineFitOptions& opts = {});
FitResult fit_decaying_cosines(const Trace& trace, const std::string& column,
                               const CosineFitOptions& opts = {});

/// Same engine on A exp(-(t/Gamma)^beta) + c with beta constrained to (0.3, 4).
/// Parameter names: amp, gamma, beta, offset.
FitResult fit_stretched_exp(const std::vector<double>& t_s, const std::vector<double>& y,
                            int max_iter = 500);
FitResult fit_stretched_exp(const Trace& trace, const std::string& column, int max_iter = 500);

struct CrbReport {
    int n_replicas = 0;
    double mse_omega = 0.0;        ///< sample MSE of the angular frequency, (rad/s)^2
    double crb_omega = 0.0;        ///< 1 / i_total
    double ratio = 0.0;            ///< mse / crb
    double mse_stat_sigma = 0.0;   ///< 1-sigma statistical error of the MSE estimate
    bool passes = false;           ///< mse >= crb within 2 sigma
    bool super_efficient = false;  ///< mse below crb beyond 2 sigma
};

/// Replica study versus the information bound. Estimates and truth are in
/// Hz; i_total is the experiment's Fisher information about the angular
/// frequency (s^2). Requires at least 50 replicas.
CrbReport crb_report(const std::vector<double>& freq_estimates_hz, double truth_hz,
                     double i_total);
CrbReport crb_report(const std::vector<FitResult>& fits, const std::string& freq_param,
                     double truth_hz, double i_total);

}  // namespace resolute
