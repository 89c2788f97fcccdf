// Dormand-Prince 5(4) integrator with continuous (dense) output.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>

namespace squeeze {

struct OdeOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double initial_step = 0.0;  // 0 selects automatically
    double max_step = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 5'000'000;
};

enum class OdeStatus { success, stopped, step_underflow, too_many_steps, non_finite };

inline const char* to_string(OdeStatus s) {
    switch (s) {
        case OdeStatus::success: return "success";
        case OdeStatus::stopped: return "stopped";
        case OdeStatus::step_underflow: return "step_underflow";
        case OdeStatus::too_many_steps: return "too_many_steps";
        case OdeStatus::non_finite: return "non_finite";
    }
    return "unknown";
}

struct OdeReport {
    OdeStatus status = OdeStatus::success;
    double t_reached = 0.0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_calls = 0;
};

namespace detail {

inline double abs_value(double x) { return std::abs(x); }
inline double abs_value(const std::complex<double>& x) { return std::abs(x); }

template <class Vec>
double error_norm(const Vec& err, const Vec& y0, const Vec& y1, double atol, double rtol) {
    double acc = 0.0;
    const auto n = err.size();
    for (decltype(err.size()) i = 0; i < n; ++i) {
        const double sc = atol + rtol * std::max(abs_value(y0[i]), abs_value(y1[i]));
        const double q = abs_value(err[i]) / sc;
        acc += q * q;
    }
    return n > 0 ? std::sqrt(acc / static_cast<double>(n)) : 0.0;
}

template <class Vec>
bool all_finite(const Vec& v) {
    for (decltype(v.size()) i = 0; i < v.size(); ++i) {
        if (!std::isfinite(abs_value(v[i]))) return false;
    }
    return true;
}

}  // namespace detail

// One accepted step, exposing the interpolant on [t0, t1].
template <class Vec>
struct DenseStep {
    double t0 = 0.0;
    double t1 = 0.0;
    const Vec* y0 = nullptr;
    const Vec* y1 = nullptr;
    Vec r3, r4, r5;  // Hairer contd5 coefficients; r1 = y0, r2 = y1 - y0

    Vec operator()(double t) const {
        const double h = t1 - t0;
        const double th = h > 0.0 ? (t - t0) / h : 0.0;
        const double th1 = 1.0 - th;
        Vec r2 = *y1 - *y0;
        return *y0 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
    }
};

// Integrates dy/dt = f(t, y) from t0 to t1. After every accepted step the
// observer is called with a DenseStep; returning false stops integration.
// f has signature void(double t, const Vec& y, Vec& dydt).
template <class Vec, class Rhs, class Observer>
OdeReport integrate_dopri5(Rhs&& f, Vec& y, double t0, double t1, const OdeOptions& opt,
                           Observer&& observer) {
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                     a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                     d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                     d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

    OdeReport rep;
    rep.t_reached = t0;
    if (!(t1 > t0)) return rep;

    Vec k1 = y, k2 = y, k3 = y, k4 = y, k5 = y, k6 = y, k7 = y, ytmp = y, ynew = y, err = y;
    f(t0, y, k1);
    ++rep.rhs_calls;
    if (!detail::all_finite(k1)) {
        rep.status = OdeStatus::non_finite;
        return rep;
    }

    const double span = t1 - t0;
    double h = opt.initial_step;
    if (h <= 0.0) {
        // Hairer's starting-step heuristic.
        const double d0 = detail::error_norm(y, y, y, opt.abs_tol, opt.rel_tol);
        const double dd1 = detail::error_norm(k1, y, y, opt.abs_tol, opt.rel_tol);
        double h0 = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 * span : 0.01 * d0 / dd1;
        h0 = std::min(h0, span);
        ytmp = y + h0 * k1;
        f(t0 + h0, ytmp, k2);
        ++rep.rhs_calls;
        err = k2 - k1;
        const double dd2 = detail::error_norm(err, y, y, opt.abs_tol, opt.rel_tol) / h0;
        const double m = std::max(dd1, dd2);
        const double h1 = m <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / m, 0.2);
        h = std::min({100.0 * h0, h1, span});
    }
    h = std::min(h, opt.max_step);

    DenseStep<Vec> dense;
    Vec yold = y;
    double t = t0;
    double err_old = 1e-4;
    bool last_rejected = false;

    while (t < t1) {
        if (rep.accepted + rep.rejected >= opt.max_steps) {
            rep.status = OdeStatus::too_many_steps;
            return rep;
        }
        if (h < 1e-14 * std::max(1.0, std::abs(t))) {
            rep.status = OdeStatus::step_underflow;
            return rep;
        }
        bool final_step = false;
        if (t + h >= t1) {
            h = t1 - t;
            final_step = true;
        }

        ytmp = y + h * (a21 * k1);
        f(t + c2 * h, ytmp, k2);
        ytmp = y + h * (a31 * k1 + a32 * k2);
        f(t + c3 * h, ytmp, k3);
        ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        f(t + c4 * h, ytmp, k4);
        ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        f(t + c5 * h, ytmp, k5);
        ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        f(t + h, ytmp, k6);
        ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        f(t + h, ynew, k7);
        rep.rhs_calls += 6;

        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        double en = detail::error_norm(err, y, ynew, opt.abs_tol, opt.rel_tol);
        if (!std::isfinite(en)) en = 1e10;

        if (en <= 1.0) {
            // PI step control (Hairer: beta = 0.04).
            double fac = 0.9 * std::pow(en, -0.2 + 0.04 * 0.75) * std::pow(err_old, 0.04);
            if (en == 0.0) fac = 5.0;
            fac = std::clamp(fac, 0.2, 5.0);
            if (last_rejected) fac = std::min(fac, 1.0);
            err_old = std::max(en, 1e-4);

            dense.t0 = t;
            dense.t1 = final_step ? t1 : t + h;
            yold = y;
            const Vec ydiff = ynew - y;
            dense.r3 = h * k1 - ydiff;
            dense.r4 = ydiff - h * k7 - dense.r3;
            dense.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
            y = ynew;
            dense.y0 = &yold;
            dense.y1 = &y;
            t = dense.t1;
            k1 = k7;
            ++rep.accepted;
            rep.t_reached = t;
            last_rejected = false;

            if (!detail::all_finite(y)) {
                rep.status = OdeStatus::non_finite;
                return rep;
            }
            if (!observer(static_cast<const DenseStep<Vec>&>(dense))) {
                rep.status = OdeStatus::stopped;
                return rep;
            }
            h = std::min(h * fac, opt.max_step);
        } else {
            ++rep.rejected;
            last_rejected = true;
            h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
        }
    }
    return rep;
}

}  // namespace squeeze
