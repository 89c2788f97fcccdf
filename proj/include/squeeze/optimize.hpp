// Derivative-free minimizers: golden-section line search and Nelder-Mead.
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace squeeze {

struct LineMinimum {
    double x = 0.0;
    double f = 0.0;
};

// Golden-section search on [a, b] for a unimodal f.
LineMinimum golden_section(const std::function<double(double)>& f, double a, double b, double x_tol = 1e-10,
                           int max_iter = 200);

struct NelderMeadOptions {
    std::size_t max_evals = 2000;
    double f_tol = 1e-10;     // spread of simplex values
    double x_tol = 1e-8;      // simplex diameter
    std::vector<double> initial_step{};  // per coordinate; defaults to 0.1
    std::vector<double> lower{};         // optional box; points are projected into it
    std::vector<double> upper{};
};

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    std::size_t evals = 0;
    bool converged = false;
};

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                             const NelderMeadOptions& opt = {});

// Projects x into [lower, upper] coordinate-wise (no-op for empty bounds).
void clamp_to_box(std::vector<double>& x, const std::vector<double>& lower, const std::vector<double>& upper);

}  // namespace squeeze
