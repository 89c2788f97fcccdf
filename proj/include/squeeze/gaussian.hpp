// Single-mode Gaussian description of a spin state near the pole, with
// vacuum covariance diag(1/2, 1/2) and [x, p] = i.
#pragma once

#include <Eigen/Core>
#include <Eigen/LU>
#include <functional>
#include <stdexcept>
#include <vector>

#include "squeeze/moments.hpp"

namespace squeeze {

class GaussianError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GaussianMoments {
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    Eigen::Matrix2d cov = 0.5 * Eigen::Matrix2d::Identity();

    static GaussianMoments vacuum() { return {}; }
};

// Throws GaussianError for non-symmetric, indefinite or uncertainty-violating covariances.
void validate(const GaussianMoments& g);

// x = Jx / sqrt(<Jz>), p = Jy / sqrt(<Jz>). Requires <Jz> > 0.1 N/2.
GaussianMoments to_gaussian(const MomentState& s, long long n_atoms);

// {x, p} -> {s x, p / s}
GaussianMoments ideal_squeeze(const GaussianMoments& g, double s);

GaussianMoments rotate(const GaussianMoments& g, double phi);

double fidelity(const GaussianMoments& a, const GaussianMoments& b);

// Coherent spin state tilted so that its Gaussian mean is r (cos phase, sin phase).
MomentState displaced_css(long long n_atoms, double r, double phase);

struct PhaseOutcome {
    double epsilon = 0.0;
    bool ok = true;
};

struct AverageInfidelity {
    double mean = 0.0;
    std::vector<double> per_phase;
    std::vector<double> phases;
    bool partial = false;  // true when at least one phase reported failure
};

// Runs `runner` at n_phases equally spaced input phases and averages epsilon.
AverageInfidelity average_infidelity(const std::function<PhaseOutcome(double phase)>& runner, int n_phases = 8);

}  // namespace squeeze
