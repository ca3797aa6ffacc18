#include "resolute/math.hpp"

#include <cmath>
#include <stdexcept>

namespace resolute {

namespace {

struct SimpsonState {
    const std::function<double(double)>& f;
    double eps_abs;
    std::size_t intervals_left;
};

double simpson(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(SimpsonState& st, double a, double b, double fa, double fm, double fb,
             double whole, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = st.f(lm);
    const double frm = st.f(rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    if (!std::isfinite(delta)) {
        throw std::runtime_error("quadrature: non-finite integrand value");
    }
    if (depth > 0 && std::abs(delta) <= 15.0 * eps) {
        return left + right + delta / 15.0;
    }
    if (st.intervals_left < 2) {
        throw std::runtime_error("quadrature: interval budget exhausted");
    }
    st.intervals_left -= 2;
    return adapt(st, a, m, fa, flm, fm, left, 0.5 * eps, depth + 1) +
           adapt(st, m, b, fm, frm, fb, right, 0.5 * eps, depth + 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double scale, const QuadratureOptions& opts) {
    if (a == b) return 0.0;
    const double eps_abs = opts.rel_tol * std::max(std::abs(scale), 1e-300);
    SimpsonState st{f, eps_abs, opts.max_intervals};
    const double fa = f(a);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = simpson(fa, fm, fb, b - a);
    const double result = adapt(st, a, b, fa, fm, fb, whole, eps_abs, 0);
    if (!std::isfinite(result)) {
        throw std::runtime_error("quadrature: non-finite result");
    }
    return result;
}

}  // namespace resolute
