#include <cmath>
#include <random>

#include "doctest.h"
#include "squeeze/campaign.hpp"
#include "squeeze/model.hpp"

using namespace squeeze;

namespace {

PhysicalParams sample_params() {
    PhysicalParams p;
    p.omega1 = {0.8, 0.1};
    p.omega2 = {-0.3, 0.6};
    p.omega3 = {0.2, -0.4};
    p.omega4 = {0.5, 0.2};
    p.g_a = {0.3, 0.05};
    p.g_b = {0.25, -0.1};
    p.delta1 = 60.0;
    p.delta2 = -45.0;
    p.delta = 2.5;
    p.kappa = 1.3;
    p.n_atoms = 500;
    return p;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("model: no cavity coupling leaves only the free-space terms") {
    PhysicalParams p = sample_params();
    p.g_a = p.g_b = 0.0;
    const EffectiveModel m = build_effective_model(p, 400.0, 100.0);
    for (const LindbladSet* s : {&m.stat, &m.osc}) {
        for (int i = 2; i < 6; ++i) CHECK(std::abs(s->chi[static_cast<std::size_t>(i)]) == 0.0);
        CHECK(std::abs(s->kappa1) == 0.0);
        CHECK(std::abs(s->kappa2) == 0.0);
        CHECK(std::abs(s->chi[0]) > 0.0);
    }
    CHECK(m.kappa_tilde == p.kappa);
    CHECK(std::abs(m.h_plusminus) == 0.0);
    CHECK(std::abs(m.h_plusplus) == 0.0);
}

TEST_CASE("model: modified cavity decay with every atom in a") {
    PhysicalParams p = sample_params();
    p.g_a = 0.4;
    p.delta2 = 30.0;
    const double N = static_cast<double>(p.n_atoms);
    const double expect = p.kappa + 4.0 * N * 0.16 / (4.0 * 900.0 + 1.0);
    CHECK(modified_cavity_decay(p, N, 0.0) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(build_effective_model(p, N, 0.0).kappa_tilde == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("model: modified cavity decay is monotone and bounded below by kappa") {
    PhysicalParams p = sample_params();
    const double k0 = modified_cavity_decay(p, 100.0, 100.0);
    CHECK(k0 >= p.kappa);
    CHECK(modified_cavity_decay(p, 200.0, 100.0) >= k0);
    CHECK(modified_cavity_decay(p, 100.0, 200.0) >= k0);
    PhysicalParams q = p;
    q.g_a *= 1.5;
    CHECK(modified_cavity_decay(q, 100.0, 100.0) >= k0);
    q = p;
    q.g_b *= 1.5;
    CHECK(modified_cavity_decay(q, 100.0, 100.0) >= k0);
}

TEST_CASE("model: parameter validation") {
    PhysicalParams p = sample_params();
    CHECK_NOTHROW(validate(p));
    PhysicalParams q = p;
    q.gamma_a = -0.1;
    CHECK_THROWS_AS(validate(q), ModelError);
    q = p;
    q.delta1 = 0.0;
    CHECK_THROWS_AS(validate(q), ModelError);
    q = p;
    q.n_atoms = 1;
    CHECK_THROWS_AS(validate(q), ModelError);
    CHECK_THROWS_AS(build_effective_model(p, -1.0, 0.0), ModelError);
    CHECK_THROWS_AS(build_effective_model(p, 400.0, 200.0), ModelError);
    q = p;
    q.kappa = 0.0;
    q.g_a = q.g_b = 0.0;
    q.delta = 0.0;
    CHECK_THROWS_AS(build_effective_model(q, 0.0, 0.0), ModelError);
}

TEST_CASE("model: two-axis rate") {
    CHECK(two_axis_rate(0.0, 3.0, 1.0) == 0.0);
    CHECK(two_axis_rate({0.1, 0.0}, 0.0, 1.0) == 0.0);
    CHECK(two_axis_rate({0.1, 0.0}, 10.0, 1.0) == doctest::Approx(16.0 * 0.01 * 10.0 / 401.0).epsilon(1e-14));
    CHECK(two_axis_rate({0.0, 0.1}, 10.0, 1.0) == doctest::Approx(3.9900249e-3).epsilon(1e-6));
    CHECK(two_axis_rate({0.1, 0.0}, -10.0, 1.0) < 0.0);
    CHECK_THROWS_AS(two_axis_rate({0.1, 0.0}, 0.0, 0.0), ModelError);
}

TEST_CASE("model: two-axis tuning") {
    PhysicalParams base = sample_params();
    SUBCASE("zero coupling gives zero drives") {
        const PhysicalParams p = tune_two_axis(base, 0.0);
        for (cplx o : {p.omega1, p.omega2, p.omega3, p.omega4}) CHECK(std::abs(o) == 0.0);
    }
    SUBCASE("real couplings and equal detunings give a quarter-period phase") {
        base.g_a = base.g_b = 0.3;
        base.delta1 = base.delta2 = 80.0;
        const PhysicalParams p = tune_two_axis(base, {0.002, 0.0});
        CHECK(rel(p.omega2 / p.omega1, {0.0, -1.0}) < 1e-14);
        CHECK(p.omega3 == -p.omega1);
        CHECK(p.omega4 == p.omega2);
    }
    SUBCASE("round trip through the tuning residual") {
        const cplx chi{0.0015, -0.0008};
        const PhysicalParams p = tune_two_axis(base, chi);
        CHECK(tuning_residual(p, chi) < 1e-12);
    }
    SUBCASE("drive cap") { CHECK_THROWS_AS(tune_two_axis(base, {1.0, 0.0}), ModelError); }
}

TEST_CASE("model: tuned Hamiltonian is two-axis countertwisting") {
    // With Omega3 = -Omega1 and Omega4 = Omega2 the J+J- term is purely
    // dissipative and H++ = i alpha. The effective Hamiltonian is then
    // (i alpha / 2)(J-^2 - J+^2).
    PhysicalParams base = sample_params();
    const cplx chi{0.002, 0.0007};
    const PhysicalParams p = tune_two_axis(base, chi);
    const EffectiveModel m = build_effective_model(p, 500.0, 0.0);
    const double alpha = two_axis_rate(chi, p.delta, m.kappa_tilde);
    CHECK(std::abs(m.h_plusminus.real()) < 1e-12 * std::abs(m.h_plusminus));
    CHECK(rel(m.h_plusplus, {0.0, alpha}) < 1e-12);
    const auto q = hamiltonian_quadratic_form(m);
    CHECK(rel(q[0][0], {0.0, -alpha / 2.0}) < 1e-12);
    CHECK(std::abs(q[0][1]) < 1e-12 * alpha);
}

TEST_CASE("model: balanced one-axis drives give a rank-one quadratic form") {
    // Omega3 = Omega4 = 0 with equal Raman strengths on both transitions.
    PhysicalParams p = sample_params();
    p.omega3 = p.omega4 = 0.0;
    const double G = p.gamma();
    const double D1 = 2.0 * p.delta1 * p.delta1 + G * G / 2.0, D2 = 2.0 * p.delta2 * p.delta2 + G * G / 2.0;
    const double w1 = std::abs(p.g_b * p.delta1 * p.omega1) / D1;
    p.omega2 = std::polar(w1 * D2 / std::abs(p.g_a * p.delta2), 0.7);
    const EffectiveModel m = build_effective_model(p, 500.0, 0.0);
    const auto q = hamiltonian_quadratic_form(m);
    const cplx det = q[0][0] * q[1][1] - q[0][1] * q[1][0];
    CHECK(std::abs(det) < 1e-12 * std::norm(q[0][1]));
    CHECK(std::abs(q[0][1]) > 0.0);
}

TEST_CASE("model: scaling covariance") {
    const PhysicalParams p = sample_params();
    PhysicalParams q = p;
    const double s = 2.0;
    q.omega1 *= s;
    q.omega2 *= s;
    q.omega3 *= s;
    q.omega4 *= s;
    q.g_a *= s;
    q.g_b *= s;
    q.delta1 *= s;
    q.delta2 *= s;
    q.delta *= s;
    q.kappa *= s;
    q.gamma_a *= s;
    q.gamma_b *= s;
    q.gamma_o *= s;
    const EffectiveModel a = build_effective_model(p, 300.0, 150.0);
    const EffectiveModel b = build_effective_model(q, 300.0, 150.0);
    CHECK(b.kappa_tilde == doctest::Approx(s * a.kappa_tilde).epsilon(1e-13));
    CHECK(rel(b.h_plusminus, s * a.h_plusminus) < 1e-12);
    CHECK(rel(b.h_plusplus, s * a.h_plusplus) < 1e-12);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(rel(b.stat.chi[i], a.stat.chi[i]) < 1e-12);
        CHECK(rel(b.osc.chi[i], a.osc.chi[i]) < 1e-12);
    }
    CHECK(rel(b.stat.kappa1, std::sqrt(s) * a.stat.kappa1) < 1e-12);
    CHECK(rel(b.osc.kappa2, std::sqrt(s) * a.osc.kappa2) < 1e-12);
}

TEST_CASE("model: validity report") {
    SUBCASE("no coupling") {
        PhysicalParams p = sample_params();
        p.g_a = p.g_b = 0.0;
        const ValidityReport r = validity_report(p);
        CHECK(r.cooperativity == 0.0);
        CHECK(r.cavity_shift_ok);
    }
    SUBCASE("operating point of the campaigns") {
        const Preset pr = make_preset(1000.0);
        const PhysicalParams p = preset_params(pr, Scheme::two_axis, 30.0, {0.0, 1.0});
        const ValidityReport r = validity_report(p);
        CHECK(r.collective_cooperativity == doctest::Approx(1000.0).epsilon(1e-12));
        // min(|Delta1|, |Delta2|) = 19 NC here; Delta1 alone gives 20.
        CHECK(std::abs(p.delta1) / (r.collective_cooperativity * p.gamma()) == doctest::Approx(20.0).epsilon(1e-12));
        CHECK(r.cavity_shift_margin == doctest::Approx(19.0).epsilon(1e-12));
        CHECK(r.weak_drive_ok);
        CHECK(r.max_drive_ratio == doctest::Approx(1.0 / 50.0).epsilon(1e-12));
    }
    SUBCASE("strong drive") {
        PhysicalParams p = sample_params();
        p.omega1 = p.delta1 / 16.0;
        const ValidityReport r = validity_report(p);
        CHECK_FALSE(r.weak_drive_ok);
        CHECK(r.weak_drive_margin == doctest::Approx(16.0 / 50.0).epsilon(1e-12));
    }
    SUBCASE("booleans follow the margins") {
        const PhysicalParams p = sample_params();
        for (double th : {1.0, 10.0, 100.0}) {
            const ValidityReport r = validity_report(p, th);
            CHECK(r.cavity_shift_ok == (r.cavity_shift_margin >= th));
            CHECK(r.adiabatic_ok == (r.adiabatic_margin >= th));
            CHECK(r.cavity_shift_margin > 0.0);
            CHECK(r.adiabatic_margin > 0.0);
        }
    }
}
