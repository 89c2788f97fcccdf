// Closed-form estimates for the dissipation-limited squeezing regime.
#pragma once

#include "squeeze/model.hpp"

namespace squeeze {

// d(xi^2)/dt = alpha (-2 N xi^2 + N kappa / delta + delta / (2 C kappa))
double xi2_rate(double xi2, double n, double c, double kappa, double delta, double alpha);

// Fixed point of xi2_rate: kappa/(2 delta) + delta/(4 N C kappa).
double xi2_fixed_point(double nc, double kappa, double delta);

// Detuning minimizing the fixed point, sqrt(2 N C) kappa, and the minimum
// value 1/sqrt(2 N C) reached there.
double fixed_point_optimal_delta(double nc, double kappa);
double fixed_point_minimum(double nc);

struct Jx2Inputs {
    double jx2 = 0.0;     // <Jx^2>
    double n = 0.0;       // N
    double alpha = 0.0;   // twisting rate
    double kappa = 0.0;
    double gamma = 1.0;
    double omega = 0.0;   // generic drive
    double g = 0.0;       // generic cavity coupling
    double big_delta = 0.0;  // generic atomic detuning
    double delta = 0.0;      // two-photon detuning
};

// d<Jx^2>/dt = -2 N alpha <Jx^2> + N^2 kappa Omega^2 g^2/(4 Delta^2 delta^2) + Gamma Omega^2 N/(8 Delta^2)
double jx2_rate(const Jx2Inputs& in);

struct ScalingEstimate {
    double delta_s = 0.0;   // optimal two-photon detuning
    double t_s = 0.0;       // squeezing time [1/Gamma]
    double t_s_scaled = 0.0;  // 2 Gamma t_s Omega^2 / Delta^2 = ln(NC)/sqrt(NC)
    double xi2_min = 1.0;
    double alpha = 0.0;
    double nc = 0.0;
};

// omega_over_delta is the generic drive ratio Omega/Delta.
ScalingEstimate scaling_estimate(double n, double c, double kappa, double gamma, double omega_over_delta);

// Generic couplings (geometric means over the two transitions), used to
// express estimates for a concrete parameter set.
struct GenericCouplings {
    double omega = 0.0;
    double g = 0.0;
    double big_delta = 0.0;
};
GenericCouplings generic_couplings(const PhysicalParams& p);

// Time rescaling 2 Gamma Omega1^2 Delta1^2 / (4 Delta1^2 + Gamma^2)^2.
// Throws ModelError if the Omega2/Delta2 form disagrees beyond 1e-9 relative.
double beta_rescale(const PhysicalParams& p);

}  // namespace squeeze
