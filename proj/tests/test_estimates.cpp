#include <cmath>
#include <random>

#include "doctest.h"
#include "squeeze/campaign.hpp"
#include "squeeze/estimates.hpp"

using namespace squeeze;

TEST_CASE("estimates: squeezing rate") {
    const double n = 1e4, c = 0.01, kappa = 1.0, alpha = 2e-3;
    const double ds = std::sqrt(n * c) * kappa;
    CHECK(xi2_rate(1.0, n, c, kappa, ds, alpha) == doctest::Approx(alpha * (-2.0 * n + 1.5 * std::sqrt(n / c))));
    // Squeezing at xi^2 = 1 requires sqrt(NC) > 1.
    CHECK(xi2_rate(1.0, n, 0.5 / n, kappa, std::sqrt(0.5), alpha) > 0.0);
    CHECK(xi2_rate(1.0, n, 4.0 / n, kappa, 2.0, alpha) < 0.0);
    CHECK_THROWS_AS(xi2_rate(1.0, n, c, kappa, 0.0, alpha), ModelError);
}

TEST_CASE("estimates: fixed point") {
    for (double nc : {10.0, 1e3, 1e5}) {
        const double d = fixed_point_optimal_delta(nc, 1.0);
        CHECK(xi2_rate(xi2_fixed_point(nc, 1.0, d), 1e6, nc / 1e6, 1.0, d, 1e-3) == doctest::Approx(0.0).scale(1.0));
        CHECK(xi2_fixed_point(nc, 1.0, d) == doctest::Approx(fixed_point_minimum(nc)).epsilon(1e-14));
        CHECK(xi2_fixed_point(nc, 1.0, 1.1 * d) > fixed_point_minimum(nc));
        CHECK(xi2_fixed_point(nc, 1.0, 0.9 * d) > fixed_point_minimum(nc));
    }
}

TEST_CASE("estimates: variance rate") {
    Jx2Inputs in;
    in.jx2 = 250.0;
    in.n = 1000.0;
    in.alpha = 1e-3;
    in.kappa = 0.0;
    in.gamma = 0.0;
    CHECK(jx2_rate(in) == doctest::Approx(-2.0 * in.n * in.alpha * in.jx2));

    // Dividing by N/4 reproduces the xi^2 rate with alpha = Omega^2 g^2/(Delta^2 delta)
    // and C = g^2/(kappa Gamma).
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    for (int i = 0; i < 3; ++i) {
        Jx2Inputs q;
        q.n = 1e4 * u(rng);
        q.kappa = u(rng);
        q.gamma = u(rng);
        q.omega = 3.0 * u(rng);
        q.g = 0.1 * u(rng);
        q.big_delta = 200.0 * u(rng);
        q.delta = 10.0 * u(rng);
        q.alpha = q.omega * q.omega * q.g * q.g / (q.big_delta * q.big_delta * q.delta);
        const double xi2 = 0.3 * u(rng);
        q.jx2 = xi2 * q.n / 4.0;
        const double c = q.g * q.g / (q.kappa * q.gamma);
        CHECK(jx2_rate(q) / (q.n / 4.0) == doctest::Approx(xi2_rate(xi2, q.n, c, q.kappa, q.delta, q.alpha)).epsilon(1e-12));
    }
}

TEST_CASE("estimates: scaling estimate") {
    const ScalingEstimate e = scaling_estimate(1e6, 1e-2, 1.0, 1.0, 1.0 / 50.0);
    CHECK(e.nc == doctest::Approx(1e4));
    CHECK(e.delta_s == doctest::Approx(100.0));
    CHECK(e.xi2_min == doctest::Approx(0.01));
    CHECK(e.alpha > 0.0);
    CHECK(e.t_s > 0.0);
    CHECK(scaling_estimate(100.0, 0.01, 1.0, 1.0, 0.02).xi2_min == doctest::Approx(1.0));
    const ScalingEstimate f = scaling_estimate(1e4, 1e-2, 1.0, 1.0, 1.0 / 50.0);
    CHECK(f.t_s_scaled == doctest::Approx(std::log(100.0) / 10.0).epsilon(1e-12));
    CHECK(f.t_s_scaled == doctest::Approx(0.4605).epsilon(1e-4));
    CHECK_THROWS_AS(scaling_estimate(0.0, 1.0, 1.0, 1.0, 0.02), ModelError);
}

TEST_CASE("estimates: time rescaling") {
    PhysicalParams p;
    p.gamma_a = p.gamma_b = p.gamma_o = 1.0 / 3.0;
    p.delta1 = 100.0;
    p.delta2 = 100.0;
    p.omega1 = 2.0;
    p.omega2 = 2.0;
    CHECK(beta_rescale(p) == doctest::Approx(2.0 * 4.0 * 1e4 / (40001.0 * 40001.0)).epsilon(1e-14));
    CHECK(beta_rescale(p) == doctest::Approx(4.9999e-5).epsilon(1e-4));
    PhysicalParams q = p;
    q.omega1 = q.omega2 = 4.0;
    CHECK(beta_rescale(q) == doctest::Approx(4.0 * beta_rescale(p)).epsilon(1e-14));
    q.omega1 = q.omega2 = 0.0;
    CHECK(beta_rescale(q) == 0.0);
    q = p;
    q.omega2 = 2.1;
    CHECK_THROWS_AS(beta_rescale(q), ModelError);
}

TEST_CASE("estimates: generic couplings") {
    PhysicalParams p;
    p.omega1 = 2.0;
    p.omega2 = {0.0, 8.0};
    p.g_a = 0.25;
    p.g_b = 1.0;
    p.delta1 = 100.0;
    p.delta2 = -25.0;
    const GenericCouplings g = generic_couplings(p);
    CHECK(g.omega == doctest::Approx(4.0));
    CHECK(g.g == doctest::Approx(0.5));
    CHECK(g.big_delta == doctest::Approx(50.0));
    // Preset couplings reproduce the preset cooperativity.
    const Preset pr = make_preset(1e3);
    const PhysicalParams q = preset_params(pr, Scheme::two_axis, 30.0, {0.0, 1.0});
    const GenericCouplings h = generic_couplings(q);
    CHECK(pr.n_atoms * h.g * h.g / (q.kappa * q.gamma()) == doctest::Approx(1e3).epsilon(1e-12));
}
