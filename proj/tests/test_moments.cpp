#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "squeeze/dicke.hpp"
#include "squeeze/figures.hpp"
#include "squeeze/moments.hpp"
#include "squeeze/optimize.hpp"

using namespace squeeze;

namespace {

constexpr cplx I{0.0, 1.0};

// Planar state with the given transverse covariances and means.
MomentState planar(double n, double vxx, double vyy, double vxy, double mx = 0.0, double my = 0.0) {
    MomentState s;
    s.na = n;
    s.nb = 0.0;
    const double jz = n / 2.0;
    // Vxx = (2 Re P2 + A + B)/4 - mx^2, Vyy = (-2 Re P2 + A + B)/4 - my^2, Vxy = Im P2 / 2 - mx my
    const double sxx = vxx + mx * mx, syy = vyy + my * my;
    const double apb = 2.0 * (sxx + syy);
    s.jp2 = {sxx - syy, 2.0 * (vxy + mx * my)};
    s.jpjm = (apb + 2.0 * jz) / 2.0;
    s.jmjp = (apb - 2.0 * jz) / 2.0;
    s.jp = {mx, my};
    return s;
}

double variance_at(const SpinCovariance& c, double th) {
    const double co = std::cos(th), si = std::sin(th);
    return co * co * c.vxx + si * si * c.vyy + 2.0 * si * co * c.vxy;
}

}  // namespace

TEST_CASE("moments: coherent spin state") {
    for (long long n : {2LL, 10LL, 1000LL, 1000000LL}) {
        const MomentState s = initial_css(n);
        CHECK(s.jz() == doctest::Approx(n / 2.0));
        CHECK(s.jpjm == static_cast<double>(n));
        CHECK(s.jmjp == 0.0);
        CHECK(std::abs(squeezing_parameter(s, n) - 1.0) < 1e-12);
        CHECK(min_variance_angle(s) == 0.0);
    }
    const MomentState e = expectations(DickeState::all_a(2));
    const MomentState s = initial_css(2);
    CHECK(std::abs(e.jp - s.jp) < 1e-15);
    CHECK(std::abs(e.jp2 - s.jp2) < 1e-15);
    CHECK(std::abs(e.jpjm - s.jpjm) < 1e-15);
    CHECK(std::abs(e.jmjp - s.jmjp) < 1e-15);
    CHECK(std::abs(e.na - s.na) < 1e-15);
}

TEST_CASE("moments: pack and unpack") {
    MomentState s;
    s.jp = {1.0, -2.0};
    s.jp2 = {3.0, 4.0};
    s.jpjm = 5.0;
    s.jmjp = 6.0;
    s.na = 7.0;
    s.nb = 8.0;
    const MomentVector v = pack(s);
    CHECK(v(0) == 1.0);
    CHECK(v(3) == 4.0);
    CHECK(v(7) == 8.0);
    const MomentState t = unpack(v);
    CHECK(t.jp == s.jp);
    CHECK(t.jp2 == s.jp2);
    CHECK(t.nb == s.nb);
}

TEST_CASE("moments: squeezing parameter of a constructed state") {
    const double n = 1000.0;
    const MomentState s = planar(n, n / 8.0, n / 2.0, 0.0);
    CHECK(squeezing_parameter(s, 1000) == doctest::Approx(0.5).epsilon(1e-12));
    MomentState bad = s;
    bad.na = 0.0;
    bad.nb = n;
    CHECK_THROWS_AS(squeezing_parameter(bad, 1000), MomentError);
}

TEST_CASE("moments: closed-form minimum matches a refined angle scan") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double n = 5000.0;
    constexpr int kGrid = 10000;
    for (int trial = 0; trial < 50; ++trial) {
        const double a = n / 4.0 * std::exp(u(rng)), b = n / 4.0 * std::exp(u(rng));
        const double xy = 0.9 * std::sqrt(a * b) * u(rng);
        const MomentState s = planar(n, a, b, xy, 3.0 * u(rng), 3.0 * u(rng));
        const SpinCovariance c = spin_covariance(s);
        int best = 0;
        double vbest = 1e300;
        for (int k = 0; k < kGrid; ++k) {
            const double v = variance_at(c, std::numbers::pi * k / kGrid);
            if (v < vbest) {
                vbest = v;
                best = k;
            }
        }
        const double h = std::numbers::pi / kGrid;
        const LineMinimum lm =
            golden_section([&](double th) { return variance_at(c, th); }, h * (best - 1), h * (best + 1), 1e-12);
        const double vmin = squeezing_parameter(s, 5000) * s.jz() * s.jz() / n;
        CHECK(vmin <= vbest + 1e-9 * n);
        CHECK(std::abs(vmin - lm.f) < 1e-10 * n);
        // The closed-form angle attains the minimum.
        CHECK(std::abs(variance_at(c, min_variance_angle(s)) - vmin) < 1e-10 * n);
        const double th = min_variance_angle(s);
        CHECK(th > -std::numbers::pi / 2.0);
        CHECK(th <= std::numbers::pi / 2.0);
    }
}

TEST_CASE("moments: rotations about z") {
    const double n = 2000.0;
    const MomentState s = planar(n, n / 10.0, n / 2.0, n / 20.0);
    const double th0 = min_variance_angle(s);
    for (double phi : {0.3, -1.1, 2.0}) {
        const MomentState r = rotate_z(s, phi);
        CHECK(squeezing_parameter(r, 2000) == doctest::Approx(squeezing_parameter(s, 2000)).epsilon(1e-12));
        // J+ -> e^{i phi} J+ turns the state, and its squeezed axis, by +phi.
        const double d = std::remainder(min_variance_angle(r) - th0 - phi, std::numbers::pi);
        CHECK(std::abs(d) < 1e-10);
    }
}

TEST_CASE("moments: zero model and exact Hamiltonian derivative at the pole") {
    const long long N = 1000;
    EffectiveModel zero;
    zero.n_atoms = N;
    const MomentState d0 = rhs(planar(1000.0, 200.0, 300.0, 10.0, 1.0, 2.0), zero);
    CHECK(std::abs(d0.jp) == 0.0);
    CHECK(std::abs(d0.jp2) == 0.0);
    CHECK(d0.jpjm == 0.0);
    CHECK(d0.na == 0.0);

    // The all-a state is a Jz eigenstate, so the closure is exact there.
    const long long n = 12;
    EffectiveModel m;
    m.n_atoms = n;
    m.h_plusminus = {0.013, 0.0};
    m.h_plusplus = {0.02, -0.035};
    const DickeDensity rho = DickeDensity::from_pure(DickeState::all_a(n));
    DickeDensity drho;
    drho.n_atoms = n;
    drho.rho = lindblad_rhs(effective_hamiltonian(m), {}, rho.rho);
    const MomentState exact = expectations(drho);
    const MomentState d = rhs(initial_css(n), m);
    // Exact: i conj(H++) N (N - 1). The closure replaces <J+^2 J-^2> by N^2.
    const double nn = static_cast<double>(n);
    CHECK(std::abs(d.jp2 - I * std::conj(m.h_plusplus) * nn * nn) < 1e-12);
    CHECK(std::abs(d.jp2 - exact.jp2 * nn / (nn - 1.0)) < 1e-12);
    CHECK(std::abs(d.jpjm - exact.jpjm) < 1e-12);
    // expectations() assumes unit trace; compare Jz, which is linear in rho.
    CHECK(std::abs(d.jz() - exact.jz()) < 1e-12);
    CHECK(std::abs(exact.jp2) > 0.1);
}

TEST_CASE("moments: zero model gives a constant trajectory") {
    EffectiveModel zero;
    zero.n_atoms = 100;
    const MomentState s0 = planar(100.0, 30.0, 30.0, 1.0);
    const Trajectory tr = integrate(s0, zero, 5.0);
    CHECK(tr.times.size() == 201);
    CHECK(tr.states.back().jpjm == s0.jpjm);
    CHECK(tr.xi2.back() == doctest::Approx(tr.xi2.front()).epsilon(1e-15));
}

TEST_CASE("moments: ideal two-axis short-time decay") {
    const long long N = 1000;
    const double alpha = 1e-3;
    IntegrateOptions o;
    o.samples = 21;
    o.ode = {1e-11, 1e-13};
    const double t = 0.1 / (N * alpha);
    const Trajectory tr = integrate(initial_css(N), ideal_twist_model(TwistKind::two_axis, alpha, N), t, o);
    for (std::size_t i = 0; i < tr.times.size(); ++i)
        CHECK(tr.xi2[i] == doctest::Approx(std::exp(-2.0 * N * alpha * tr.times[i])).epsilon(0.01));
    // H = (i alpha / 2)(J+^2 - J-^2) twists about the diagonals and squeezes
    // along Jx or Jy. The exact state agrees.
    SampleOptions so;
    so.sample_times = {t};
    const PureRun pr = evolve_pure(DickeState::all_a(N), build_hamiltonian(TwistKind::two_axis, alpha, -std::numbers::pi / 4.0, N), t, so);
    const double exact = min_variance_angle(pr.moments.back());
    CHECK(std::abs(std::remainder(tr.theta_star.back() - exact, std::numbers::pi)) < 1e-6);
    CHECK(std::abs(std::remainder(tr.theta_star.back(), std::numbers::pi / 2.0)) < 1e-6);
}

TEST_CASE("moments: Hamiltonian-only invariants") {
    // Populations are conserved exactly. The closed equations move <J+J-> and
    // <J-J+> together while Jz changes, so the commutator identity only holds
    // to leading order in 1/N.
    for (TwistKind k : {TwistKind::one_axis, TwistKind::two_axis}) {
        double prev = 1e300;
        for (long long N : {1000LL, 4000LL}) {
            const Trajectory tr = integrate(initial_css(N), ideal_twist_model(k, 1.0 / N, N), 2.0);
            for (const MomentState& s : tr.states) CHECK(std::abs(s.na + s.nb - N) < 1e-9 * N);
            const double rel = tr.max_commutator_drift / static_cast<double>(N);
            CHECK(rel < 0.05);
            CHECK(rel < 0.5 * prev);
            prev = rel;
        }
    }
}

TEST_CASE("moments: linearized evolution follows the direct solution at N = 1000") {
    const long long N = 1000;
    const TwistCurves two = twist_curves(TwistKind::two_axis, 1.0 / N, N, 4.5, 181);
    const double dmin2 = *std::min_element(two.direct.begin(), two.direct.end());
    for (std::size_t i = 0; i < two.times.size(); ++i) {
        if (two.direct[i] < 2.0 * dmin2) break;
        CHECK(std::abs(two.linearized[i] / two.direct[i] - 1.0) < 0.05);
    }
}

TEST_CASE("moments: breakdown detection") {
    const long long N = 100;
    CHECK(breakdown_check(initial_css(N), N).empty());
    MomentState s = initial_css(N);
    s.na = 50.1;
    s.nb = 49.9;
    CHECK_FALSE(breakdown_check(s, N).empty());
    s = initial_css(N);
    s.nb = -1.0;
    CHECK_FALSE(breakdown_check(s, N).empty());
}
