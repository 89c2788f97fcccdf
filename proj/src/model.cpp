#include "squeeze/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace squeeze {

namespace {

constexpr cplx I{0.0, 1.0};

double norm2(cplx z) { return std::norm(z); }

}  // namespace

void validate(const PhysicalParams& p) {
    auto fail = [](const std::string& msg) { throw ModelError("invalid parameters: " + msg); };
    if (p.gamma_a < 0.0 || p.gamma_b < 0.0 || p.gamma_o < 0.0) fail("negative decay rate");
    if (!(p.gamma() > 0.0)) fail("total decay rate must be positive");
    if (p.kappa < 0.0) fail("negative cavity decay rate");
    if (p.delta1 == 0.0 || p.delta2 == 0.0) fail("delta1 and delta2 must be nonzero");
    if (p.n_atoms < 2) fail("n_atoms must be at least 2");
    const double vals[] = {p.omega1.real(), p.omega1.imag(), p.omega2.real(), p.omega2.imag(),
                           p.omega3.real(), p.omega3.imag(), p.omega4.real(), p.omega4.imag(),
                           p.g_a.real(),    p.g_a.imag(),    p.g_b.real(),    p.g_b.imag(),
                           p.delta1,        p.delta2,        p.delta,         p.kappa,
                           p.omega_b};
    for (double v : vals) {
        if (!std::isfinite(v)) fail("non-finite value");
    }
}

double modified_cavity_decay(const PhysicalParams& p, double mean_na, double mean_nb) {
    const double G = p.gamma();
    return p.kappa + G * (4.0 * mean_na * norm2(p.g_a) / (4.0 * p.delta2 * p.delta2 + G * G) +
                          4.0 * mean_nb * norm2(p.g_b) / (4.0 * p.delta1 * p.delta1 + G * G));
}

EffectiveModel build_effective_model(const PhysicalParams& p, double mean_na, double mean_nb) {
    validate(p);
    const double N = static_cast<double>(p.n_atoms);
    if (mean_na < 0.0 || mean_nb < 0.0) throw ModelError("mean populations must be nonnegative");
    if (mean_na + mean_nb > N * (1.0 + 1e-9)) throw ModelError("mean populations exceed n_atoms");

    const double G = p.gamma();
    const double kt = modified_cavity_decay(p, mean_na, mean_nb);
    if (p.delta == 0.0 && kt == 0.0) throw ModelError("delta = 0 with vanishing cavity decay");

    const double d1 = p.delta1, d2 = p.delta2;
    const double D1 = 2.0 * d1 * d1 + G * G / 2.0;
    const double D2 = 2.0 * d2 * d2 + G * G / 2.0;
    const cplx dp{p.delta, kt / 2.0};
    const cplx dm{p.delta, -kt / 2.0};
    const cplx o1 = p.omega1, o2 = p.omega2, o3 = p.omega3, o4 = p.omega4;
    const cplx ga = p.g_a, gb = p.g_b;

    EffectiveModel m;
    m.kappa_tilde = kt;
    m.gamma_a = p.gamma_a;
    m.gamma_b = p.gamma_b;
    m.gamma_o = p.gamma_o;
    m.n_atoms = p.n_atoms;

    const cplx A = norm2(gb) * d1 * d1 / (D1 * D1) * (norm2(o3) / dm - norm2(o1) / dp);
    const cplx B = norm2(ga) * d2 * d2 / (D2 * D2) * (norm2(o4) / dm - norm2(o2) / dp);
    const cplx C = ga * std::conj(gb) * d1 * d2 / (D1 * D2) *
                   (o3 * std::conj(o4) / dm - o1 * std::conj(o2) / dp);
    const cplx D = std::conj(ga) * gb * d1 * d2 / (D1 * D2) *
                   (std::conj(o3) * o4 / dm - std::conj(o1) * o2 / dp);
    m.h_plusminus = A + B;
    m.h_plusplus = D + std::conj(C);

    const cplx e1 = 2.0 * d1 - I * G;
    const cplx e2 = 2.0 * d2 - I * G;
    const cplx h1 = d1 - I * G / 2.0;
    const cplx h2 = d2 - I * G / 2.0;

    auto& s = m.stat.chi;
    s[0] = o1 / e1;
    s[1] = o2 / e2;
    s[2] = norm2(ga) * d2 * o2 / (D2 * h2 * dp);
    s[3] = norm2(gb) * d1 * o1 / (D1 * h1 * dp);
    s[4] = ga * std::conj(gb) * d1 * o1 / (D1 * h2 * dp);
    s[5] = std::conj(ga) * gb * d2 * o2 / (D2 * h1 * dp);

    auto& q = m.osc.chi;
    q[0] = o3 / e1;
    q[1] = o4 / e2;
    q[2] = -norm2(ga) * d2 * o4 / (D2 * h2 * dm);
    q[3] = -norm2(gb) * d1 * o3 / (D1 * h1 * dm);
    q[4] = -ga * std::conj(gb) * d1 * o3 / (D1 * h2 * dm);
    q[5] = -std::conj(ga) * gb * d2 * o4 / (D2 * h1 * dm);

    const double sk = std::sqrt(p.kappa);
    m.stat.kappa1 = sk * std::conj(gb) * d1 * o1 / (D1 * dp);
    m.stat.kappa2 = sk * std::conj(ga) * d2 * o2 / (D2 * dp);
    m.osc.kappa1 = -sk * std::conj(gb) * d1 * o3 / (D1 * dm);
    m.osc.kappa2 = -sk * std::conj(ga) * d2 * o4 / (D2 * dm);
    return m;
}

PhysicalParams tune_two_axis(const PhysicalParams& base, cplx chi, double weak_drive_cap) {
    if (base.g_a == 0.0 || base.g_b == 0.0) throw ModelError("tune_two_axis: cavity couplings must be nonzero");
    if (base.delta1 == 0.0 || base.delta2 == 0.0) throw ModelError("tune_two_axis: detunings must be nonzero");
    const double G = base.gamma();
    const double d1 = base.delta1, d2 = base.delta2;
    PhysicalParams p = base;
    p.omega1 = chi * (4.0 * d1 * d1 + G * G) / (2.0 * std::conj(base.g_b) * d1);
    p.omega2 = chi * (4.0 * d2 * d2 + G * G) / (2.0 * I * std::conj(base.g_a) * d2);
    p.omega3 = -p.omega1;
    p.omega4 = p.omega2;
    const double ratio = std::max(std::abs(p.omega1) / std::abs(d1), std::abs(p.omega2) / std::abs(d2));
    if (ratio > weak_drive_cap * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "tune_two_axis: drive ratio " << ratio << " exceeds weak-drive cap " << weak_drive_cap;
        throw ModelError(os.str());
    }
    return p;
}

double tuning_residual(const PhysicalParams& p, cplx chi) {
    const double G = p.gamma();
    const double d1 = p.delta1, d2 = p.delta2;
    const cplx c1 = 2.0 * p.omega1 * std::conj(p.g_b) * d1 / (4.0 * d1 * d1 + G * G);
    const cplx c2 = 2.0 * I * p.omega2 * std::conj(p.g_a) * d2 / (4.0 * d2 * d2 + G * G);
    const double scale = std::abs(chi) > 0.0 ? std::abs(chi) : 1.0;
    double r = std::max(std::abs(c1 - chi), std::abs(c2 - chi));
    r = std::max({r, std::abs(p.omega3 + p.omega1), std::abs(p.omega4 - p.omega2)});
    return r / scale;
}

double two_axis_rate(cplx chi, double delta, double kappa_tilde) {
    const double den = 4.0 * delta * delta + kappa_tilde * kappa_tilde;
    if (den == 0.0) throw ModelError("two_axis_rate: delta and kappa_tilde both zero");
    return 16.0 * std::norm(chi) * delta / den;
}

ValidityReport validity_report(const PhysicalParams& p, double threshold) {
    const double inf = std::numeric_limits<double>::infinity();
    const double G = p.gamma();
    const double N = static_cast<double>(p.n_atoms);
    ValidityReport r;
    r.threshold = threshold;

    const double g2 = std::max(norm2(p.g_a), norm2(p.g_b));
    r.cooperativity = g2 == 0.0 ? 0.0 : (p.kappa > 0.0 ? g2 / (p.kappa * G) : inf);
    r.collective_cooperativity = N * r.cooperativity;
    r.cavity_shift_margin = r.collective_cooperativity == 0.0
                                ? inf
                                : std::min(std::abs(p.delta1), std::abs(p.delta2)) / (r.collective_cooperativity * G);

    auto chi_of = [G](cplx omega, cplx g, double d) {
        return std::abs(2.0 * omega * g * d / (4.0 * d * d + G * G));
    };
    const double chi_max = std::max({chi_of(p.omega1, p.g_b, p.delta1), chi_of(p.omega3, p.g_b, p.delta1),
                                     chi_of(p.omega2, p.g_a, p.delta2), chi_of(p.omega4, p.g_a, p.delta2)});
    const double den = 4.0 * p.delta * p.delta + p.kappa * p.kappa;
    const double load = den > 0.0 ? 8.0 * N * chi_max * chi_max * std::abs(p.delta) / den : 0.0;
    r.adiabatic_margin = load > 0.0 ? 1.0 / load : inf;

    r.max_drive_ratio = std::max({std::abs(p.omega1) / std::abs(p.delta1), std::abs(p.omega3) / std::abs(p.delta1),
                                  std::abs(p.omega2) / std::abs(p.delta2), std::abs(p.omega4) / std::abs(p.delta2)});
    r.weak_drive_margin = r.max_drive_ratio > 0.0 ? (1.0 / 50.0) / r.max_drive_ratio : inf;

    r.cavity_shift_ok = r.cavity_shift_margin >= threshold;
    r.adiabatic_ok = r.adiabatic_margin >= threshold;
    r.weak_drive_ok = r.weak_drive_margin >= 1.0 - 1e-12;
    return r;
}

std::array<std::array<cplx, 2>, 2> hamiltonian_quadratic_form(const EffectiveModel& m) {
    const double hr = m.h_plusminus.real();
    std::array<std::array<cplx, 2>, 2> out{};
    out[0][0] = -0.5 * m.h_plusplus;
    out[1][1] = -0.5 * std::conj(m.h_plusplus);
    out[0][1] = -0.5 * hr;
    out[1][0] = -0.5 * hr;
    return out;
}

}  // namespace squeeze
