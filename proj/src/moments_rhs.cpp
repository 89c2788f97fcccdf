// Linearized equations of motion. The (1,4), (2,5), (3,5) and (4,6)
// emission cross terms are reduced from the jump operators with the same
// mean-field closure as the rest.
//
// The dissipative part is a sum over Lindblad sets: the static set and the
// set oscillating at e^{2i delta t} each contribute with their own
// coefficients, their cross terms being dropped in the rotating-wave sense.
#include <cmath>

#include "squeeze/moments.hpp"

namespace squeeze {

namespace {

struct Vars {
    cplx P, M, P2, M2, P_sq, M_sq;
    double A, B, Na, Nb, Jz, Nt, pp;
};

struct Coeffs {
    cplx c1, c2, c3, c4, c5, c6;
    double a1, a2, a3, a4, a5, a6;  // |chi_i|^2
};

Coeffs coeffs_of(const std::array<cplx, 6>& chi) {
    Coeffs c{chi[0], chi[1], chi[2], chi[3], chi[4], chi[5], 0, 0, 0, 0, 0, 0};
    c.a1 = std::norm(c.c1);
    c.a2 = std::norm(c.c2);
    c.a3 = std::norm(c.c3);
    c.a4 = std::norm(c.c4);
    c.a5 = std::norm(c.c5);
    c.a6 = std::norm(c.c6);
    return c;
}

using std::conj;
inline double Re(cplx z) { return z.real(); }

void add_emission(const Vars& v, const Coeffs& c, double G, double ga, double gb, double go,
                  MomentState& d) {
    const cplx P = v.P, M = v.M, P2 = v.P2, M2 = v.M2, Psq = v.P_sq, Msq = v.M_sq;
    const double A = v.A, B = v.B, Na = v.Na, Nb = v.Nb, Jz = v.Jz, Nt = v.Nt, pp = v.pp;
    const cplx c1 = c.c1, c2 = c.c2, c3 = c.c3, c4 = c.c4, c5 = c.c5, c6 = c.c6;
    const double a1 = c.a1, a2 = c.a2, a3 = c.a3, a4 = c.a4, a5 = c.a5, a6 = c.a6;

    // Cross products conj(chi_i) chi_j for the pairs reduced directly from the
    // jump operators. In the real moments the population factors take the
    // ordering-symmetric value.
    const cplx z14 = conj(c1) * c4, z25 = conj(c2) * c5, z35 = conj(c3) * c5, z46 = conj(c4) * c6;
    const cplx z41 = conj(z14), z53 = conj(z35), z64 = conj(z46);
    // Fourth-order pieces shared by the (3,5) and (4,6) pairs.
    const cplx quart = 5.0 * pp * pp - 4.0 * B * pp - Msq * P2 - M2 * Psq;
    const double curv = Jz * (2.0 * Jz - 1.0);

    // d<J+^2>/dt
    {
        cplx t = (a1 + a2) * P2;
        t += (a3 + a6) * (3.0 * P2 * pp + 3.0 * B * Psq - 5.0 * pp * Psq);
        t += (a4 + a5) * (3.0 * pp * P2 + 3.0 * Psq * A - 5.0 * Psq * pp);
        t += 2.0 * Jz * P2 * (Na * (a3 - a5) + Nb * (a6 - a4));
        t += c1 * conj(c6) * (Nt * B + 2.0 * Jz * A);
        t += (2.0 * c2 * conj(c3) * Jz + conj(c2) * c3 * Nt) * P2;
        t += (z14 * (3.0 - 2.0 * Jz) + z41 * (Nt - 1.0)) * P2;
        t += 2.0 * z25 * (B * (Nb - 1.0) + Jz * (Nt - 1.0));
        t += (z53 + z46) * Psq * (6.0 * P2 - 5.0 * Psq);
        t -= z35 * (2.0 * (Na - 1.0) * (B - curv) + quart);
        t -= z64 * (-2.0 * B * (2.0 * Na - 3.0 * Nb + 1.0) - 2.0 * curv * (Nb + 1.0) + quart);
        d.jp2 += -G * t;
    }

    // Shared by the two pair variances.
    const cplx w35 = z35 * (3.0 * B * Msq - 5.0 * pp * Msq + 3.0 * pp * M2);
    const cplx w46 = z46 * (3.0 * B * Psq - 5.0 * pp * Psq + 3.0 * pp * P2);

    // d<J+J->/dt
    {
        double t = (a1 + a2) * A;
        t += -a2 * Na;
        t += (a5 + a4) * Re(Msq * P2 + Psq * M2 + 4.0 * pp * A - 5.0 * pp * pp);
        t += -2.0 * (a5 * Na + a4 * Nb) * Jz * A - a4 * Na * A - a6 * Na * B;
        t += (a6 + a3) * Re(Msq * P2 + Psq * M2 + pp * (A + 3.0 * B) - 5.0 * pp * pp);
        t += 2.0 * (a3 * Na + a6 * Nb) * Jz * B;
        t += 2.0 * Re(conj(c1) * c6 * P2) * (Na - 1.0);
        t += 2.0 * Re(conj(c2) * c3) * (Na - 1.0) * B;
        t += 2.0 * Re(z14) * (Nb + 1.0) * A;
        t += 2.0 * Re(z25 * M2) * Nb;
        t += 2.0 * Re(w35 + z35 * M2 * (Na - 2.0 * Nb + 2.0));
        t += 2.0 * Re(w46 + z46 * P2 * (Na - 3.0 * Nb + 2.0));
        double u = (a1 + a3 * B + a5 * B) * Na + (a2 + a6 * B + a4 * B) * Nb;
        u += 2.0 * Re(conj(c1) * c6 * P2) + 2.0 * Re(conj(c2) * c3) * B;
        u += 2.0 * Re(z14) * A + 2.0 * Re(z25 * M2);
        u += 2.0 * Re(z35 * M2) * Na + 2.0 * Re(z46 * P2) * Nb;
        d.jpjm += -G * t + ga * u;
    }

    // d<J-J+>/dt
    {
        double t = (a1 + a2) * B;
        t += -a1 * Nb;
        t += (a3 + a6) * Re(Msq * P2 + Psq * M2 + 4.0 * pp * B - 5.0 * pp * pp);
        t += 2.0 * (a3 * Na + a6 * Nb) * Jz * B - a3 * Nb * B - a5 * Nb * A;
        t += (a5 + a4) * Re(Msq * P2 + Psq * M2 + pp * (3.0 * A + B) - 5.0 * pp * pp);
        t += -2.0 * (a5 * Na + a4 * Nb) * Jz * A;
        t += 2.0 * Re(conj(c1) * c6 * P2) * (Na - 1.0);
        t += 2.0 * Re(conj(c2) * c3) * (Na - 1.0) * B;
        t += 2.0 * Re(z14) * Nb * A;
        t += 2.0 * Re(z25 * M2) * (Nb - 1.0);
        t += 2.0 * Re(w35 + z35 * M2 * (2.0 - 2.0 * Nb));
        t += 2.0 * Re(w46 + z46 * P2 * (Na - 2.0 * Nb + 2.0));
        double u = (a1 + a3 * B + a5 * A) * Na + (a2 + a6 * B + a4 * A) * Nb;
        u += 2.0 * Re(conj(c1) * c6 * P2) + 2.0 * Re(conj(c2) * c3) * B;
        u += 2.0 * Re(z14) * A + 2.0 * Re(z25 * M2);
        u += 2.0 * Re(z35 * M2) * Na + 2.0 * Re(z46 * P2) * Nb;
        d.jmjp += -G * t + gb * u;
    }

    // Populations: jumps into a (weight gamma_a) and out of a (gamma_b + gamma_o).
    {
        const double into_a = a2 * Nb + (a3 * B - a5 * A) * Na + 2.0 * a6 * Nb * B + 2.0 * Re(conj(c1) * c6 * P2) +
                              2.0 * Re(conj(c2) * c3) * B + 2.0 * Re(z46 * P2) * Nb;
        const double out_of_a = (a1 + 2.0 * a5 * A) * Na + (a4 * A - a6 * B) * Nb + 2.0 * Re(z14) * A +
                                2.0 * Re(z25 * M2) + 2.0 * Re(z35 * M2) * Na;
        d.na += ga * into_a - (gb + go) * out_of_a;
        d.nb += -(ga + go) * into_a + gb * out_of_a;
    }

    // d<J+>/dt
    {
        cplx t = (a1 + a2) / 2.0 * P;
        t += (a3 + a6) / 2.0 * (M * P2 + 2.0 * P * B - 2.0 * pp * P);
        t += (a3 * Na + a6 * Nb) * Jz * P - (a5 * Na + a4 * Nb) * Jz * P;
        t += (a4 + a5) / 2.0 * (M * P2 + 2.0 * P * A - 2.0 * pp * P);
        t += (conj(c2) * c3 * Nt / 2.0 + c2 * conj(c3) * Jz) * P;
        t += c1 * conj(c6) * Na * M;
        t += (z41 * Nt / 2.0 - z14 * (Jz - 1.0)) * P;
        t += z25 * (Nb - 1.0) * M;
        t += (z53 + z46) * P * (1.5 * P2 - Psq);
        t += z35 * (B * M - Msq * P - Na * M + 0.5 * M2 * P);
        t += z64 * (B * M - Msq * P + (Na - 2.0 * Nb + 2.0) * M + 0.5 * M2 * P);
        d.jp += -G * t;
    }
}

void add_cavity(const Vars& v, cplx k1, cplx k2, MomentState& d) {
    const double n1 = std::norm(k1), n2 = std::norm(k2);
    const cplx k12 = k1 * conj(k2);
    d.jp2 += 2.0 * v.Jz * (-k12 * v.A + k12 * v.B + (n1 - n2) * v.P2);
    const double dA = 2.0 * (n1 * v.A - n2 * v.B) * v.Jz;
    d.jpjm += dA;
    d.jmjp += dA;
    d.na += -n1 * v.A + n2 * v.B;
    d.nb += n1 * v.A - n2 * v.B;
    d.jp += (n1 * (v.Jz - 1.0) - n2 * v.Jz) * v.P + k12 * v.M;
}

}  // namespace

MomentState rhs(const MomentState& s, const EffectiveModel& m) {
    Vars v;
    v.P = s.jp;
    v.M = conj(s.jp);
    v.P2 = s.jp2;
    v.M2 = conj(s.jp2);
    v.P_sq = v.P * v.P;
    v.M_sq = v.M * v.M;
    v.A = s.jpjm;
    v.B = s.jmjp;
    v.Na = s.na;
    v.Nb = s.nb;
    v.Jz = 0.5 * (s.na - s.nb);
    v.Nt = s.na + s.nb;
    v.pp = std::norm(s.jp);

    MomentState d;
    d.jp = {0.0, 0.0};
    d.jp2 = {0.0, 0.0};
    d.jpjm = d.jmjp = d.na = d.nb = 0.0;

    constexpr cplx I{0.0, 1.0};
    const cplx hpp = m.h_plusplus;
    const double hpm = m.h_plusminus.real();
    d.jp2 += 2.0 * v.Jz * (I * conj(hpp) * (v.A + v.B) + 2.0 * I * hpm * v.P2);
    const double imh = (hpp * v.P2).imag();
    d.jpjm += 4.0 * v.Jz * imh;
    d.jmjp += 4.0 * v.Jz * imh;
    d.na += -2.0 * imh;
    d.nb += 2.0 * imh;
    d.jp += 2.0 * I * v.Jz * (hpm * v.P + conj(hpp) * v.M);

    add_cavity(v, m.stat.kappa1, m.stat.kappa2, d);
    add_cavity(v, m.osc.kappa1, m.osc.kappa2, d);

    const double G = m.gamma();
    if (G > 0.0) {
        add_emission(v, coeffs_of(m.stat.chi), G, m.gamma_a, m.gamma_b, m.gamma_o, d);
        add_emission(v, coeffs_of(m.osc.chi), G, m.gamma_a, m.gamma_b, m.gamma_o, d);
    }
    return d;
}

}  // namespace squeeze
