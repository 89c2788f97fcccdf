#include "squeeze/dicke.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "squeeze/optimize.hpp"

namespace squeeze {

namespace {

constexpr cplx I{0.0, 1.0};

int ladder_dim(long long n_atoms) {
    if (n_atoms < 1) throw DickeError("ladder: n_atoms must be positive");
    if (n_atoms > 100000) throw DickeError("ladder: n_atoms too large for the dense ladder");
    return static_cast<int>(n_atoms) + 1;
}

}  // namespace

DickeState DickeState::basis(long long n_atoms, long long k) {
    const int n = ladder_dim(n_atoms);
    if (k < 0 || k >= n) throw DickeError("DickeState::basis: index out of range");
    DickeState s;
    s.n_atoms = n_atoms;
    s.amps = Eigen::VectorXcd::Zero(n);
    s.amps[static_cast<int>(k)] = 1.0;
    return s;
}

DickeDensity DickeDensity::from_pure(const DickeState& psi) {
    return {psi.n_atoms, psi.amps * psi.amps.adjoint()};
}

DickeDensity DickeDensity::maximally_mixed(long long n_atoms) {
    const int n = ladder_dim(n_atoms);
    return {n_atoms, Eigen::MatrixXcd::Identity(n, n) / static_cast<double>(n)};
}

BandedMatrix ladder_jp(long long n_atoms) {
    const int n = ladder_dim(n_atoms);
    const double j = 0.5 * static_cast<double>(n_atoms);
    BandedMatrix m(n, 1, 0);
    // Element (k+1, k) lives on offset -1 at row k+1.
    for (int k = 0; k + 1 < n; ++k) {
        const double mm = k - j;
        m.at_diag(-1, k + 1) = std::sqrt(j * (j + 1.0) - mm * (mm + 1.0));
    }
    return m;
}

BandedMatrix ladder_jm(long long n_atoms) { return ladder_jp(n_atoms).adjoint(); }

BandedMatrix ladder_jz(long long n_atoms) {
    const int n = ladder_dim(n_atoms);
    const double j = 0.5 * static_cast<double>(n_atoms);
    BandedMatrix m(n, 0, 0);
    for (int k = 0; k < n; ++k) m.at_diag(0, k) = k - j;
    return m;
}

BandedMatrix ladder_jx(long long n_atoms) { return collective_operator(n_atoms, 0.5, 0.5); }

BandedMatrix ladder_jy(long long n_atoms) { return collective_operator(n_atoms, -0.5 * I, 0.5 * I); }

BandedMatrix collective_operator(long long n_atoms, cplx c_plus, cplx c_minus, cplx c_x, cplx c_y, cplx c_z) {
    // Jx = (J+ + J-)/2, Jy = (J+ - J-)/(2i)
    const cplx cp = c_plus + 0.5 * c_x - 0.5 * I * c_y;
    const cplx cm = c_minus + 0.5 * c_x + 0.5 * I * c_y;
    const BandedMatrix jp = ladder_jp(n_atoms);
    BandedMatrix r = jp * cp + jp.adjoint() * cm;
    if (c_z != cplx{}) r = r + ladder_jz(n_atoms) * c_z;
    return r;
}

BandedMatrix build_hamiltonian(TwistKind kind, double alpha, double theta, long long n_atoms) {
    const BandedMatrix jt = collective_operator(n_atoms, 0.0, 0.0, std::cos(theta), std::sin(theta));
    if (kind == TwistKind::one_axis) return (jt * jt) * alpha;
    const BandedMatrix jo = collective_operator(n_atoms, 0.0, 0.0, -std::sin(theta), std::cos(theta));
    return (jt * jt - jo * jo) * alpha;
}

BandedMatrix effective_hamiltonian(const EffectiveModel& m) {
    const BandedMatrix jp = ladder_jp(m.n_atoms);
    const BandedMatrix jm = jp.adjoint();
    const BandedMatrix pm = jp * jm;
    const BandedMatrix pp = jp * jp;
    BandedMatrix h = pm * m.h_plusminus + pp * m.h_plusplus;
    h = (h + h.adjoint()) * cplx{-0.5, 0.0};
    return h;
}

std::vector<BandedMatrix> cavity_lindblads(const EffectiveModel& m) {
    std::vector<BandedMatrix> out;
    for (const LindbladSet* s : {&m.stat, &m.osc}) {
        if (s->kappa1 == cplx{} && s->kappa2 == cplx{}) continue;
        out.push_back(collective_operator(m.n_atoms, s->kappa2, s->kappa1));
    }
    return out;
}

std::pair<BandedMatrix, BandedMatrix> appendix_c_pair(double gamma_c, double theta, long long n_atoms) {
    if (gamma_c < 0.0) throw DickeError("appendix_c_pair: gamma_c must be nonnegative");
    const double s = std::sqrt(gamma_c);
    const double c = std::cos(theta), sn = std::sin(theta);
    return {collective_operator(n_atoms, 0.0, 0.0, s * c, s * sn),
            collective_operator(n_atoms, 0.0, 0.0, -s * sn, s * c)};
}

namespace {

MomentState moments_from(long long n_atoms, const std::function<cplx(const BandedMatrix&)>& ev) {
    const BandedMatrix jp = ladder_jp(n_atoms);
    const BandedMatrix jm = jp.adjoint();
    MomentState s;
    s.jp = ev(jp);
    s.jp2 = ev(jp * jp);
    s.jpjm = ev(jp * jm).real();
    s.jmjp = ev(jm * jp).real();
    const double jz = ev(ladder_jz(n_atoms)).real();
    const double N = static_cast<double>(n_atoms);
    s.na = N / 2.0 + jz;
    s.nb = N / 2.0 - jz;
    return s;
}

}  // namespace

MomentState expectations(const DickeState& psi) {
    return moments_from(psi.n_atoms, [&](const BandedMatrix& o) { return o.expectation(psi.amps); });
}

MomentState expectations(const DickeDensity& rho) {
    return moments_from(rho.n_atoms, [&](const BandedMatrix& o) { return o.trace_product(rho.rho); });
}

Eigen::MatrixXcd dissipator(const BandedMatrix& L, const Eigen::MatrixXcd& rho) {
    const BandedMatrix Ld = L.adjoint();
    const BandedMatrix LdL = Ld * L;
    const Eigen::Index n = rho.rows();
    Eigen::MatrixXcd tmp = Eigen::MatrixXcd::Zero(n, n), out = Eigen::MatrixXcd::Zero(n, n);
    L.left_multiply_add(rho, 1.0, tmp);
    Ld.right_multiply_add(tmp, 1.0, out);
    LdL.left_multiply_add(rho, -0.5, out);
    LdL.right_multiply_add(rho, -0.5, out);
    return out;
}

namespace {

// Precomputed Lindblad generator drho = K rho + rho K^dag + sum L rho L^dag,
// K = -iH - 1/2 sum L^dag L.
struct Liouvillian {
    BandedMatrix K, Kd;
    std::vector<BandedMatrix> L, Ld;

    Liouvillian(const BandedMatrix& H, const std::vector<BandedMatrix>& lindblads) {
        K = H * (-I);
        for (const auto& l : lindblads) {
            L.push_back(l);
            Ld.push_back(l.adjoint());
            K = K + (Ld.back() * l) * cplx{-0.5, 0.0};
        }
        Kd = K.adjoint();
    }

    void apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out, Eigen::MatrixXcd& tmp) const {
        out.setZero();
        K.left_multiply_add(rho, 1.0, out);
        Kd.right_multiply_add(rho, 1.0, out);
        for (std::size_t k = 0; k < L.size(); ++k) {
            tmp.setZero();
            L[k].left_multiply_add(rho, 1.0, tmp);
            Ld[k].right_multiply_add(tmp, 1.0, out);
        }
    }
};

}  // namespace

Eigen::MatrixXcd lindblad_rhs(const BandedMatrix& H, const std::vector<BandedMatrix>& lindblads,
                              const Eigen::MatrixXcd& rho) {
    const Liouvillian lv(H, lindblads);
    Eigen::MatrixXcd out(rho.rows(), rho.cols()), tmp(rho.rows(), rho.cols());
    lv.apply(rho, out, tmp);
    return out;
}

PureRun evolve_pure(const DickeState& psi0, const BandedMatrix& H, double t, const SampleOptions& opt) {
    if (psi0.amps.size() != H.dim()) throw DickeError("evolve_pure: dimension mismatch");
    const double norm0 = psi0.amps.norm();
    if (std::abs(norm0 - 1.0) > 1e-10) throw DickeError("evolve_pure: input state is not normalized");
    PureRun run;
    Eigen::VectorXcd y = psi0.amps;
    auto f = [&H](double, const Eigen::VectorXcd& x, Eigen::VectorXcd& dx) { dx = H.apply(x) * (-I); };

    std::size_t next = 0;
    const auto& times = opt.sample_times;
    auto record = [&](double tt, const Eigen::VectorXcd& v) {
        run.times.push_back(tt);
        run.moments.push_back(expectations(DickeState{psi0.n_atoms, v}));
    };
    while (next < times.size() && times[next] <= 0.0) record(times[next++], y);
    auto obs = [&](const DenseStep<Eigen::VectorXcd>& d) {
        const double drift = std::abs(d.y1->norm() - 1.0);
        run.max_norm_drift = std::max(run.max_norm_drift, drift);
        while (next < times.size() && times[next] <= d.t1) {
            const double tt = times[next++];
            record(tt, tt == d.t1 ? *d.y1 : d(tt));
        }
        return true;
    };
    if (t > 0.0) run.ode = integrate_dopri5(f, y, 0.0, t, opt.ode, obs);
    if (run.ode.status != OdeStatus::success) throw DickeError(std::string("evolve_pure: ") + to_string(run.ode.status));
    // The integrator is not norm preserving; renormalize past the guard.
    if (std::abs(y.norm() - 1.0) > 1e-10) y /= y.norm();
    run.final_state = {psi0.n_atoms, y};
    return run;
}

namespace {

double min_hermitian_eigenvalue(const Eigen::MatrixXcd& rho) {
    const Eigen::MatrixXcd h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace

MasterRun evolve_master_collective(const DickeDensity& rho0, const BandedMatrix& H,
                                   const std::vector<BandedMatrix>& lindblads, double t, const SampleOptions& opt) {
    const Eigen::Index n = rho0.rho.rows();
    if (n != H.dim()) throw DickeError("evolve_master_collective: dimension mismatch");
    for (const auto& l : lindblads)
        if (l.dim() != n) throw DickeError("evolve_master_collective: Lindblad dimension mismatch");

    const Liouvillian lv(H, lindblads);
    MasterRun run;
    run.min_eigenvalue = min_hermitian_eigenvalue(rho0.rho);
    Eigen::MatrixXcd work(n, n), tmp(n, n), out(n, n);
    auto f = [&](double, const Eigen::VectorXcd& x, Eigen::VectorXcd& dx) {
        work = Eigen::Map<const Eigen::MatrixXcd>(x.data(), n, n);
        lv.apply(work, out, tmp);
        dx = Eigen::Map<const Eigen::VectorXcd>(out.data(), n * n);
    };
    Eigen::VectorXcd y = Eigen::Map<const Eigen::VectorXcd>(rho0.rho.data(), n * n);

    std::size_t next = 0;
    const auto& times = opt.sample_times;
    auto record = [&](double tt, const Eigen::VectorXcd& v) {
        const Eigen::MatrixXcd r = Eigen::Map<const Eigen::MatrixXcd>(v.data(), n, n);
        run.times.push_back(tt);
        run.moments.push_back(expectations(DickeDensity{rho0.n_atoms, r}));
        run.min_eigenvalue = std::min(run.min_eigenvalue, min_hermitian_eigenvalue(r));
        if (run.min_eigenvalue < -1e-8)
            throw DickeError("evolve_master_collective: positivity violated at t = " + std::to_string(tt));
    };
    while (next < times.size() && times[next] <= 0.0) record(times[next++], y);
    auto obs = [&](const DenseStep<Eigen::VectorXcd>& d) {
        const Eigen::Map<const Eigen::MatrixXcd> r(d.y1->data(), n, n);
        run.max_trace_error = std::max(run.max_trace_error, std::abs(r.trace() - 1.0));
        run.max_hermiticity_error = std::max(run.max_hermiticity_error, (r - r.adjoint()).cwiseAbs().maxCoeff());
        while (next < times.size() && times[next] <= d.t1) {
            const double tt = times[next++];
            record(tt, tt == d.t1 ? *d.y1 : d(tt));
        }
        return true;
    };
    if (t > 0.0) run.ode = integrate_dopri5(f, y, 0.0, t, opt.ode, obs);
    if (run.ode.status != OdeStatus::success)
        throw DickeError(std::string("evolve_master_collective: ") + to_string(run.ode.status));
    run.final_state = {rho0.n_atoms, Eigen::Map<const Eigen::MatrixXcd>(y.data(), n, n)};
    return run;
}

PureMinimum minimize_pure_xi2(const BandedMatrix& H, long long n_atoms, double t_max, const OdeOptions& ode) {
    const DickeState psi0 = DickeState::all_a(n_atoms);
    Eigen::VectorXcd y = psi0.amps;
    auto f = [&H](double, const Eigen::VectorXcd& x, Eigen::VectorXcd& dx) { dx = H.apply(x) * (-I); };
    auto xi2_of = [n_atoms](const Eigen::VectorXcd& v) {
        const MomentState s = expectations(DickeState{n_atoms, v / v.norm()});
        return s.jz() > 0.0 ? squeezing_parameter(s, n_atoms) : 1e300;
    };
    PureMinimum best{1.0, 0.0};
    Eigen::VectorXcd y0c, y1c;
    DenseStep<Eigen::VectorXcd> held;
    bool have = false;
    constexpr int kProbe = 4;
    auto obs = [&](const DenseStep<Eigen::VectorXcd>& d) {
        bool improved = false;
        for (int k = 1; k <= kProbe; ++k) {
            const double t = d.t0 + (d.t1 - d.t0) * k / kProbe;
            const double x = xi2_of(k == kProbe ? *d.y1 : d(t));
            if (x < best.xi2) {
                best = {x, t};
                improved = true;
            }
        }
        if (improved) {
            y0c = *d.y0;
            y1c = *d.y1;
            held = d;
            held.y0 = &y0c;
            held.y1 = &y1c;
            have = true;
        }
        return true;
    };
    const OdeReport rep = integrate_dopri5(f, y, 0.0, t_max, ode, obs);
    if (rep.status != OdeStatus::success) throw DickeError(std::string("minimize_pure_xi2: ") + to_string(rep.status));
    if (have) {
        const double hs = (held.t1 - held.t0) / kProbe;
        const double a = std::max(held.t0, best.t - hs), b = std::min(held.t1, best.t + hs);
        const LineMinimum lm = golden_section([&](double t) { return xi2_of(held(t)); }, a, b, 1e-12 * std::max(1.0, b));
        if (lm.f < best.xi2) best = {lm.f, lm.x};
    }
    return best;
}

}  // namespace squeeze
