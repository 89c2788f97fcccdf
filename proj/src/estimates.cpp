#include "squeeze/estimates.hpp"

#include <algorithm>
#include <cmath>

namespace squeeze {

double xi2_rate(double xi2, double n, double c, double kappa, double delta, double alpha) {
    if (delta == 0.0) throw ModelError("xi2_rate: delta must be nonzero");
    if (c <= 0.0 || kappa <= 0.0) throw ModelError("xi2_rate: cooperativity and kappa must be positive");
    return alpha * (-2.0 * n * xi2 + n * kappa / delta + delta / (2.0 * c * kappa));
}

double xi2_fixed_point(double nc, double kappa, double delta) {
    return kappa / (2.0 * delta) + delta / (4.0 * nc * kappa);
}

double fixed_point_optimal_delta(double nc, double kappa) { return std::sqrt(2.0 * nc) * kappa; }

double fixed_point_minimum(double nc) { return 1.0 / std::sqrt(2.0 * nc); }

double jx2_rate(const Jx2Inputs& in) {
    const double w2 = in.omega * in.omega, g2 = in.g * in.g, D2 = in.big_delta * in.big_delta;
    double r = -2.0 * in.n * in.alpha * in.jx2;
    if (in.kappa != 0.0) r += in.n * in.n * in.kappa * w2 * g2 / (4.0 * D2 * in.delta * in.delta);
    if (in.gamma != 0.0) r += in.gamma * w2 * in.n / (8.0 * D2);
    return r;
}

ScalingEstimate scaling_estimate(double n, double c, double kappa, double gamma, double omega_over_delta) {
    if (!(n > 0.0) || !(c > 0.0)) throw ModelError("scaling_estimate: N and C must be positive");
    ScalingEstimate e;
    e.nc = n * c;
    e.delta_s = std::sqrt(e.nc) * kappa;
    const double g2 = c * kappa * gamma;
    e.alpha = omega_over_delta * omega_over_delta * g2 / e.delta_s;
    e.t_s = std::log(std::sqrt(e.nc)) / (e.alpha * n);
    e.t_s_scaled = 2.0 * gamma * omega_over_delta * omega_over_delta * e.t_s;
    e.xi2_min = 1.0 / std::sqrt(e.nc);
    return e;
}

GenericCouplings generic_couplings(const PhysicalParams& p) {
    return {std::sqrt(std::abs(p.omega1) * std::abs(p.omega2)), std::sqrt(std::abs(p.g_a) * std::abs(p.g_b)),
            std::sqrt(std::abs(p.delta1) * std::abs(p.delta2))};
}

double beta_rescale(const PhysicalParams& p) {
    const double G = p.gamma();
    auto form = [G](cplx omega, double d) {
        const double den = 4.0 * d * d + G * G;
        return 2.0 * G * std::norm(omega) * d * d / (den * den);
    };
    const double b1 = form(p.omega1, p.delta1);
    const double b2 = form(p.omega2, p.delta2);
    if (std::abs(b1 - b2) > 1e-9 * std::max(b1, b2)) {
        throw ModelError("beta_rescale: the two transitions give inconsistent time scales");
    }
    return b1;
}

}  // namespace squeeze
