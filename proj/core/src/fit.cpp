#include "resolute/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "resolute/math.hpp"

namespace resolute {

Periodogram periodogram(const std::vector<double>& t_s, const std::vector<double>& y) {
    const std::size_t n = t_s.size();
    if (n != y.size() || n < 4) throw std::invalid_argument("periodogram: need >= 4 samples");
    const double dt = (t_s.back() - t_s.front()) / static_cast<double>(n - 1);
    if (!(dt > 0.0)) throw std::invalid_argument("periodogram: abscissa must increase");
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs((t_s[i] - t_s[i - 1]) - dt) > 1e-6 * dt) {
            throw std::invalid_argument(
                "periodogram: non-uniform abscissa spacing; resample to a uniform grid first");
        }
    }
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / n;

    Periodogram p;
    p.freq.resize(n);
    p.power.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        double re = 0.0, im = 0.0;
        const double w = two_pi * static_cast<double>(k) / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double x = y[j] - mean;
            re += x * std::cos(w * j);
            im -= x * std::sin(w * j);
        }
        p.freq[k] = static_cast<double>(k) / (n * dt);
        p.power[k] = (re * re + im * im) / n;
    }
    return p;
}

Periodogram periodogram(const Trace& trace, const std::string& column) {
    std::vector<double> t(trace.axis.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = us_to_s(trace.axis[i]);
    return periodogram(t, trace.column(column).values);
}

double peak_frequency(const Periodogram& p, double f_min_hz, double f_max_hz) {
    const std::size_t n = p.freq.size();
    const std::size_t half = n / 2;
    std::size_t best = 0;
    double best_power = -1.0;
    for (std::size_t k = 1; k <= half; ++k) {
        if (p.freq[k] < f_min_hz || p.freq[k] > f_max_hz) continue;
        if (p.power[k] > best_power) {
            best_power = p.power[k];
            best = k;
        }
    }
    if (best == 0) throw std::invalid_argument("peak_frequency: no bins in range");
    if (best == 0 || best + 1 >= n) return p.freq[best];
    // Parabolic refinement on log power.
    const double eps = 1e-300;
    const double la = std::log(p.power[best - 1] + eps);
    const double lb = std::log(p.power[best] + eps);
    const double lc = std::log(p.power[best + 1] + eps);
    const double denom = la - 2.0 * lb + lc;
    double shift = 0.0;
    if (denom < 0.0) shift = 0.5 * (la - lc) / denom;
    shift = std::clamp(shift, -0.5, 0.5);
    const double df = p.freq[1] - p.freq[0];
    return p.freq[best] + shift * df;
}

double FitResult::value(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return values[i];
    }
    throw std::out_of_range("fit has no parameter named '" + name + "'");
}

double FitResult::sigma(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return sigmas[i];
    }
    throw std::out_of_range("fit has no parameter named '" + name + "'");
}

namespace {

// ---- small dense symmetric solver --------------------------------------

/// Cholesky factorization in place; returns false when not positive definite.
bool cholesky(std::vector<double>& a, int n) {
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double sum = a[i * n + j];
            for (int k = 0; k < i; ++k) sum -= a[i * n + k] * a[j * n + k];
            if (i == j) {
                if (!(sum > 0.0)) return false;
                a[i * n + i] = std::sqrt(sum);
            } else {
                a[j * n + i] = sum / a[i * n + i];
            }
        }
    }
    return true;
}

void cholesky_solve(const std::vector<double>& l, int n, const std::vector<double>& b,
                    std::vector<double>& x) {
    x = b;
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < i; ++k) x[i] -= l[i * n + k] * x[k];
        x[i] /= l[i * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
        for (int k = i + 1; k < n; ++k) x[i] -= l[k * n + i] * x[k];
        x[i] /= l[i * n + i];
    }
}

/// Inverse from the Cholesky factor (for the covariance at the optimum).
std::vector<double> cholesky_inverse(const std::vector<double>& l, int n) {
    std::vector<double> inv(n * n, 0.0);
    std::vector<double> e(n, 0.0), col;
    for (int j = 0; j < n; ++j) {
        std::fill(e.begin(), e.end(), 0.0);
        e[j] = 1.0;
        cholesky_solve(l, n, e, col);
        for (int i = 0; i < n; ++i) inv[i * n + j] = col[i];
    }
    return inv;
}

// ---- damped Gauss-Newton -------------------------------------------------

struct Bounds {
    std::vector<double> lo, hi;  // empty = unconstrained
};

struct LeastSquaresModel {
    // residual r_i = model(t_i) - y_i; jacobian row d model / d params
    virtual void eval(const std::vector<double>& params, std::vector<double>& residuals,
                      std::vector<double>* jacobian) const = 0;
    virtual ~LeastSquaresModel() = default;
};

struct GnOutcome {
    std::vector<double> params;
    std::vector<double> sigmas;
    double rss = 0.0;
    bool converged = false;
    int iterations = 0;
    bool rank_deficient = false;
};

double objective(const std::vector<double>& r) {
    double s = 0.0;
    for (double v : r) s += v * v;
    return s;
}

void clamp_params(std::vector<double>& p, const Bounds& b) {
    if (b.lo.empty()) return;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::clamp(p[i], b.lo[i], b.hi[i]);
}

GnOutcome gauss_newton(const LeastSquaresModel& model, std::vector<double> params,
                       std::size_t n_data, const Bounds& bounds, int max_iter) {
    const int np = static_cast<int>(params.size());
    GnOutcome out;
    clamp_params(params, bounds);

    std::vector<double> r, jac, r_try;
    model.eval(params, r, &jac);
    double obj = objective(r);

    double lambda = 1e-3;
    int iter = 0;
    bool converged = false;
    std::vector<double> h(np * np), g(np), chol, step, trial;
    for (; iter < max_iter && !converged; ++iter) {
        // normal equations
        std::fill(h.begin(), h.end(), 0.0);
        std::fill(g.begin(), g.end(), 0.0);
        for (std::size_t i = 0; i < n_data; ++i) {
            for (int a = 0; a < np; ++a) {
                const double ja = jac[i * np + a];
                g[a] += ja * r[i];
                for (int b = a; b < np; ++b) h[a * np + b] += ja * jac[i * np + b];
            }
        }
        for (int a = 0; a < np; ++a) {
            for (int b = 0; b < a; ++b) h[a * np + b] = h[b * np + a];
        }
        double mean_diag = 0.0;
        for (int a = 0; a < np; ++a) mean_diag += h[a * np + a];
        mean_diag = std::max(mean_diag / np, 1e-300);

        bool accepted = false;
        while (!accepted) {
            chol = h;
            for (int a = 0; a < np; ++a) {
                chol[a * np + a] += lambda * (h[a * np + a] + 1e-12 * mean_diag);
            }
            if (!cholesky(chol, np)) {
                lambda *= 10.0;
                if (lambda > 1e14) {
                    out.rank_deficient = true;
                    break;
                }
                continue;
            }
            cholesky_solve(chol, np, g, step);
            trial = params;
            for (int a = 0; a < np; ++a) trial[a] -= step[a];
            clamp_params(trial, bounds);

            model.eval(trial, r_try, nullptr);
            const double obj_try = objective(r_try);
            if (obj_try < obj) {
                // relative step size, for the convergence decision
                double rel = 0.0;
                for (int a = 0; a < np; ++a) {
                    const double scale = std::abs(params[a]) + 1e-30;
                    rel = std::max(rel, std::abs(trial[a] - params[a]) / scale);
                }
                params = trial;
                obj = obj_try;
                lambda = std::max(lambda / 3.0, 1e-14);
                accepted = true;
                if (rel < 1e-10) converged = true;
            } else {
                lambda *= 10.0;
                if (lambda > 1e14) break;  // no acceptable step remains
            }
        }
        if (!accepted) {
            // a vanishing gradient means we are already at the optimum
            double gnorm = 0.0;
            for (double v : g) gnorm = std::max(gnorm, std::abs(v));
            converged = gnorm <= 1e-12 * (1.0 + obj) || obj <= 1e-28;
            break;
        }
        model.eval(params, r, &jac);
    }

    out.params = params;
    out.rss = obj;
    out.converged = converged;
    out.iterations = iter;

    // covariance from the curvature at the optimum, scaled by residual variance
    out.sigmas.assign(np, std::numeric_limits<double>::quiet_NaN());
    model.eval(params, r, &jac);
    std::fill(h.begin(), h.end(), 0.0);
    for (std::size_t i = 0; i < n_data; ++i) {
        for (int a = 0; a < np; ++a) {
            for (int b = a; b < np; ++b) h[a * np + b] += jac[i * np + a] * jac[i * np + b];
        }
    }
    for (int a = 0; a < np; ++a) {
        for (int b = 0; b < a; ++b) h[a * np + b] = h[b * np + a];
    }
    const int dof = static_cast<int>(n_data) - np;
    chol = h;
    double mean_diag = 0.0;
    for (int a = 0; a < np; ++a) mean_diag += h[a * np + a];
    for (int a = 0; a < np; ++a) chol[a * np + a] += 1e-14 * std::max(mean_diag / np, 1e-300);
    if (dof > 0 && cholesky(chol, np)) {
        const auto inv = cholesky_inverse(chol, np);
        const double s2 = out.rss / dof;
        for (int a = 0; a < np; ++a) {
            const double v = inv[a * np + a] * s2;
            out.sigmas[a] = v > 0.0 ? std::sqrt(v) : 0.0;
        }
    } else if (dof > 0) {
        out.rank_deficient = true;
    }
    return out;
}

// ---- models ----------------------------------------------------------------

struct CosineModel : LeastSquaresModel {
    const std::vector<double>& t;
    const std::vector<double>& y;
    int n_components;
    bool fit_decay;
    bool fit_beta;

    CosineModel(const std::vector<double>& t_, const std::vector<double>& y_, int k, bool decay,
                bool beta)
        : t(t_), y(y_), n_components(k), fit_decay(decay), fit_beta(beta) {}

    // layout: [offset, (decay_T, (beta)), (amp, freq, phase) x K]
    int decay_index() const { return fit_decay ? 1 : -1; }
    int beta_index() const { return fit_decay && fit_beta ? 2 : -1; }
    int comp_index(int k) const { return 1 + (fit_decay ? 1 : 0) + (beta_index() >= 0 ? 1 : 0) + 3 * k; }
    int n_params() const { return comp_index(n_components); }

    void eval(const std::vector<double>& p, std::vector<double>& r,
              std::vector<double>* jac) const override {
        const std::size_t n = t.size();
        const int np = n_params();
        r.resize(n);
        if (jac) jac->assign(n * np, 0.0);
        const double offset = p[0];
        const double decay_t = fit_decay ? p[decay_index()] : 1.0;
        const double beta = beta_index() >= 0 ? p[beta_index()] : 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ti = t[i];
            double env = 1.0;
            double x_pow = 0.0;
            if (fit_decay) {
                const double x = ti / decay_t;
                x_pow = x > 0.0 ? std::pow(x, beta) : 0.0;
                env = std::exp(-x_pow);
            }
            double osc = 0.0;
            for (int k = 0; k < n_components; ++k) {
                const int base = comp_index(k);
                const double arg = two_pi * p[base + 1] * ti + p[base + 2];
                const double c = std::cos(arg);
                osc += p[base] * c;
                if (jac) {
                    const double s = std::sin(arg);
                    (*jac)[i * np + base] = env * c;
                    (*jac)[i * np + base + 1] = -env * p[base] * s * two_pi * ti;
                    (*jac)[i * np + base + 2] = -env * p[base] * s;
                }
            }
            r[i] = offset + env * osc - y[i];
            if (jac) {
                (*jac)[i * np + 0] = 1.0;
                if (fit_decay) {
                    (*jac)[i * np + decay_index()] = env * osc * beta * x_pow / decay_t;
                    if (beta_index() >= 0 && ti > 0.0 && x_pow > 0.0) {
                        (*jac)[i * np + beta_index()] =
                            -env * osc * x_pow * std::log(ti / decay_t);
                    }
                }
            }
        }
    }
};

struct StretchedExpModel : LeastSquaresModel {
    const std::vector<double>& t;
    const std::vector<double>& y;

    StretchedExpModel(const std::vector<double>& t_, const std::vector<double>& y_)
        : t(t_), y(y_) {}

    // layout: [amp, gamma, beta, offset]
    void eval(const std::vector<double>& p, std::vector<double>& r,
              std::vector<double>* jac) const override {
        const std::size_t n = t.size();
        r.resize(n);
        if (jac) jac->assign(n * 4, 0.0);
        const double amp = p[0], gamma = p[1], beta = p[2], offset = p[3];
        for (std::size_t i = 0; i < n; ++i) {
            const double x = t[i] / gamma;
            const double x_pow = x > 0.0 ? std::pow(x, beta) : 0.0;
            const double env = std::exp(-x_pow);
            r[i] = amp * env + offset - y[i];
            if (jac) {
                (*jac)[i * 4 + 0] = env;
                (*jac)[i * 4 + 1] = amp * env * beta * x_pow / gamma;
                (*jac)[i * 4 + 2] = x > 0.0 ? -amp * env * x_pow * std::log(x) : 0.0;
                (*jac)[i * 4 + 3] = 1.0;
            }
        }
    }
};

double vec_mean(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s / std::max<std::size_t>(hi - lo, 1);
}

}  // namespace

FitResult fit_decaying_cosines(const std::vector<double>& t_s, const std::vector<double>& y,
                               const CosineFitOptions& opts) {
    if (t_s.size() != y.size() || t_s.size() < 8) {
        throw std::invalid_argument("fit_decaying_cosines: need >= 8 samples");
    }
    if (opts.n_components < 1 || opts.n_components > 3) {
        throw std::invalid_argument("fit_decaying_cosines: n_components must be 1, 2 or 3");
    }
    CosineModel model(t_s, y, opts.n_components, opts.fit_decay, opts.fit_beta);
    const int np = model.n_params();

    std::vector<double> p0(np, 0.0);
    FitResult result;
    result.model = "decaying_cosines";

    if (!opts.warm_start.empty()) {
        if (static_cast<int>(opts.warm_start.size()) != np) {
            throw std::invalid_argument("fit_decaying_cosines: warm start has wrong size");
        }
        p0 = opts.warm_start;
    } else {
        const double span = t_s.back() - t_s.front();
        p0[0] = vec_mean(y, 0, y.size());
        if (opts.fit_decay) p0[model.decay_index()] = 2.0 * span;
        if (model.beta_index() >= 0) p0[model.beta_index()] = 1.0;

        // initial frequencies: hints, else the largest periodogram peaks
        std::vector<double> freqs = opts.freq_hints_hz;
        if (static_cast<int>(freqs.size()) < opts.n_components) {
            const Periodogram pg = periodogram(t_s, y);
            std::vector<std::size_t> order(pg.freq.size() / 2);
            for (std::size_t k = 0; k < order.size(); ++k) order[k] = k + 1;
            std::sort(order.begin(), order.end(),
                      [&](std::size_t a, std::size_t b) { return pg.power[a] > pg.power[b]; });
            const double df = pg.freq[1] - pg.freq[0];
            for (std::size_t k = 0; k < order.size() &&
                                    static_cast<int>(freqs.size()) < opts.n_components;
                 ++k) {
                const double f = pg.freq[order[k]];
                bool close = false;
                for (double known : freqs) close = close || std::abs(known - f) < 1.5 * df;
                if (!close) {
                    freqs.push_back(peak_frequency(pg, std::max(f - df, 0.5 * df), f + df));
                }
            }
            while (static_cast<int>(freqs.size()) < opts.n_components) {
                freqs.push_back(freqs.empty() ? 1.0 / span : freqs.back() * 2.0);
            }
        }
        // amplitudes and phases from a linear solve at fixed frequencies
        for (int k = 0; k < opts.n_components; ++k) {
            const int base = model.comp_index(k);
            double cc = 0.0, cs = 0.0, yc = 0.0, ys = 0.0, ss = 0.0;
            for (std::size_t i = 0; i < t_s.size(); ++i) {
                const double arg = two_pi * freqs[k] * t_s[i];
                const double c = std::cos(arg), s = std::sin(arg);
                const double dy = y[i] - p0[0];
                cc += c * c;
                ss += s * s;
                cs += c * s;
                yc += dy * c;
                ys += dy * s;
            }
            const double det = cc * ss - cs * cs;
            double a_cos = 0.0, a_sin = 0.0;
            if (std::abs(det) > 1e-30) {
                a_cos = (yc * ss - ys * cs) / det;
                a_sin = (ys * cc - yc * cs) / det;
            }
            p0[base] = std::hypot(a_cos, a_sin);
            p0[base + 1] = freqs[k];
            p0[base + 2] = std::atan2(-a_sin, a_cos);
        }
    }

    Bounds bounds;
    if (opts.fit_decay) {
        bounds.lo.assign(np, -std::numeric_limits<double>::infinity());
        bounds.hi.assign(np, std::numeric_limits<double>::infinity());
        const double span = t_s.back() - t_s.front();
        bounds.lo[model.decay_index()] = 1e-6 * span;
        if (model.beta_index() >= 0) {
            bounds.lo[model.beta_index()] = 0.3 + 1e-9;
            bounds.hi[model.beta_index()] = 4.0 - 1e-9;
        }
    }

    GnOutcome out = gauss_newton(model, p0, t_s.size(), bounds, opts.max_iter);
    if (out.rank_deficient && !out.converged) {
        throw std::runtime_error("fit_decaying_cosines: rank-deficient normal equations");
    }

    result.names.push_back("offset");
    if (opts.fit_decay) result.names.push_back("decay_T");
    if (model.beta_index() >= 0) result.names.push_back("beta");
    for (int k = 0; k < opts.n_components; ++k) {
        const std::string idx = std::to_string(k + 1);
        result.names.push_back("amp_" + idx);
        result.names.push_back("freq_" + idx);
        result.names.push_back("phase_" + idx);
    }
    result.values = out.params;
    result.sigmas = out.sigmas;
    result.converged = out.converged;
    result.iterations = out.iterations;
    result.residual_norm = std::sqrt(out.rss);
    if (!out.converged) {
        result.warnings.push_back("did not converge within the iteration budget");
    }

    // identifiability: a vanishing amplitude leaves its frequency and phase free
    double y_scale = 0.0;
    for (double v : y) y_scale = std::max(y_scale, std::abs(v));
    result.reliable.assign(result.values.size(), out.converged);
    for (int k = 0; k < opts.n_components; ++k) {
        const int base = model.comp_index(k);
        if (std::abs(out.params[base]) <= 1e-9 * std::max(y_scale, 1e-30)) {
            result.reliable[base + 1] = false;
            result.reliable[base + 2] = false;
            result.warnings.push_back("component " + std::to_string(k + 1) +
                                      " amplitude is zero; its frequency is unidentifiable");
        }
    }
    return result;
}

FitResult fit_decaying_cosines(const Trace& trace, const std::string& column,
                               const CosineFitOptions& opts) {
    std::vector<double> t(trace.axis.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = us_to_s(trace.axis[i]);
    return fit_decaying_cosines(t, trace.column(column).values, opts);
}

FitResult fit_stretched_exp(const std::vector<double>& t_s, const std::vector<double>& y,
                            int max_iter) {
    if (t_s.size() != y.size() || t_s.size() < 6) {
        throw std::invalid_argument("fit_stretched_exp: need >= 6 samples");
    }
    FitResult result;
    result.model = "stretched_exp";
    const std::size_t n = t_s.size();
    const double head = vec_mean(y, 0, n / 3);
    const double tail = vec_mean(y, n - n / 3, n);
    if (!(head > tail)) {
        result.warnings.push_back("trace does not decay overall (head mean <= tail mean)");
    }

    std::vector<double> p0(4, 0.0);
    p0[3] = tail;             // offset
    p0[0] = y.front() - tail; // amplitude
    p0[2] = 1.0;              // beta
    // gamma: first crossing of offset + amp/e
    const double target = p0[3] + p0[0] / std::exp(1.0);
    double gamma = t_s.back();
    for (std::size_t i = 1; i < n; ++i) {
        const bool crossed = (y[i - 1] - target) * (y[i] - target) <= 0.0;
        if (crossed) {
            gamma = 0.5 * (t_s[i - 1] + t_s[i]);
            break;
        }
    }
    p0[1] = std::max(gamma, 1e-3 * (t_s.back() - t_s.front()));

    Bounds bounds;
    bounds.lo = {-std::numeric_limits<double>::infinity(), 1e-9 * t_s.back(), 0.3 + 1e-9,
                 -std::numeric_limits<double>::infinity()};
    bounds.hi = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                 4.0 - 1e-9, std::numeric_limits<double>::infinity()};

    StretchedExpModel model(t_s, y);
    GnOutcome out = gauss_newton(model, p0, n, bounds, max_iter);
    if (out.rank_deficient && !out.converged) {
        throw std::runtime_error("fit_stretched_exp: rank-deficient normal equations");
    }
    result.names = {"amp", "gamma", "beta", "offset"};
    result.values = out.params;
    result.sigmas = out.sigmas;
    result.converged = out.converged;
    result.iterations = out.iterations;
    result.residual_norm = std::sqrt(out.rss);
    result.reliable.assign(4, out.converged);
    if (!out.converged) result.warnings.push_back("did not converge within the iteration budget");
    return result;
}

FitResult fit_stretched_exp(const Trace& trace, const std::string& column, int max_iter) {
    std::vector<double> t(trace.axis.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = us_to_s(trace.axis[i]);
    return fit_stretched_exp(t, trace.column(column).values, max_iter);
}

CrbReport crb_report(const std::vector<double>& freq_estimates_hz, double truth_hz,
                     double i_total) {
    if (freq_estimates_hz.size() < 50) {
        throw std::invalid_argument("crb_report: need at least 50 replicas");
    }
    if (!(i_total > 0.0)) throw std::invalid_argument("crb_report: i_total must be positive");
    CrbReport rep;
    rep.n_replicas = static_cast<int>(freq_estimates_hz.size());
    std::vector<double> sq(freq_estimates_hz.size());
    for (std::size_t i = 0; i < sq.size(); ++i) {
        const double d_omega = two_pi * (freq_estimates_hz[i] - truth_hz);
        sq[i] = d_omega * d_omega;
    }
    const double n = static_cast<double>(sq.size());
    rep.mse_omega = std::accumulate(sq.begin(), sq.end(), 0.0) / n;
    double var = 0.0;
    for (double v : sq) var += (v - rep.mse_omega) * (v - rep.mse_omega);
    rep.mse_stat_sigma = std::sqrt(var / (n - 1.0) / n);
    rep.crb_omega = 1.0 / i_total;
    rep.ratio = rep.mse_omega / rep.crb_omega;
    rep.passes = rep.mse_omega + 2.0 * rep.mse_stat_sigma >= rep.crb_omega;
    rep.super_efficient = rep.mse_omega + 2.0 * rep.mse_stat_sigma < rep.crb_omega;
    return rep;
}

CrbReport crb_report(const std::vector<FitResult>& fits, const std::string& freq_param,
                     double truth_hz, double i_total) {
    std::vector<double> est;
    est.reserve(fits.size());
    for (const FitResult& f : fits) est.push_back(f.value(freq_param));
    return crb_report(est, truth_hz, i_total);
}

}  // namespace resolute
