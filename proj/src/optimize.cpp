#include "squeeze/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace squeeze {

LineMinimum golden_section(const std::function<double(double)>& f, double a, double b, double x_tol, int max_iter) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    if (b < a) std::swap(a, b);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > x_tol; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? LineMinimum{c, fc} : LineMinimum{d, fd};
}

void clamp_to_box(std::vector<double>& x, const std::vector<double>& lower, const std::vector<double>& upper) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i < lower.size()) x[i] = std::max(x[i], lower[i]);
        if (i < upper.size()) x[i] = std::min(x[i], upper[i]);
    }
}

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                             const NelderMeadOptions& opt) {
    const std::size_t n = x0.size();
    NelderMeadResult res;
    auto eval = [&](std::vector<double>& x) {
        clamp_to_box(x, opt.lower, opt.upper);
        ++res.evals;
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::max();
    };

    std::vector<std::vector<double>> simplex(n + 1, x0);
    std::vector<double> fv(n + 1);
    fv[0] = eval(simplex[0]);
    for (std::size_t i = 0; i < n; ++i) {
        const double step = i < opt.initial_step.size() ? opt.initial_step[i] : 0.1;
        simplex[i + 1][i] += step;
        // Keep the vertex inside the box by stepping the other way.
        if (i < opt.upper.size() && simplex[i + 1][i] > opt.upper[i]) simplex[i + 1][i] = x0[i] - step;
        fv[i + 1] = eval(simplex[i + 1]);
    }

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    while (res.evals < opt.max_evals) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

        double diam = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            for (std::size_t k = 0; k < n; ++k) diam = std::max(diam, std::abs(simplex[i][k] - simplex[best][k]));
        }
        if (std::abs(fv[worst] - fv[best]) <= opt.f_tol * (std::abs(fv[best]) + 1e-30) || diam <= opt.x_tol) {
            res.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);
        }
        for (std::size_t k = 0; k < n; ++k) xr[k] = centroid[k] + (centroid[k] - simplex[worst][k]);
        const double fr = eval(xr);
        if (fr < fv[best]) {
            for (std::size_t k = 0; k < n; ++k) xe[k] = centroid[k] + 2.0 * (centroid[k] - simplex[worst][k]);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[worst] = xe;
                fv[worst] = fe;
            } else {
                simplex[worst] = xr;
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[second]) {
            simplex[worst] = xr;
            fv[worst] = fr;
            continue;
        }
        const bool outside = fr < fv[worst];
        for (std::size_t k = 0; k < n; ++k) {
            const double target = outside ? xr[k] : simplex[worst][k];
            xc[k] = centroid[k] + 0.5 * (target - centroid[k]);
        }
        const double fc = eval(xc);
        if (fc < std::min(fr, fv[worst])) {
            simplex[worst] = xc;
            fv[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (std::size_t k = 0; k < n; ++k) simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
            fv[i] = eval(simplex[i]);
        }
    }
    const auto it = std::min_element(fv.begin(), fv.end());
    res.x = simplex[static_cast<std::size_t>(it - fv.begin())];
    res.f = *it;
    return res;
}

}  // namespace squeeze
