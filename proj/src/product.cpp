// Few-atom master equation on the full 2^N ground-state product space.
#include <cmath>

#include "squeeze/dicke.hpp"

namespace squeeze {

namespace {

constexpr cplx I{0.0, 1.0};

int product_dim(long long n_atoms) {
    if (n_atoms < 1 || n_atoms > 5) throw DickeError("product oracle: n_atoms must be in [1, 5]");
    return 1 << n_atoms;
}

// |to><from| on atom k, with to/from in {a = 1, b = 0}.
Eigen::MatrixXcd single(long long n_atoms, int k, int to, int from) {
    const int n = product_dim(n_atoms);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    const int bit = 1 << k;
    for (int s = 0; s < n; ++s) {
        if (((s & bit) != 0) != (from == 1)) continue;
        const int t = to == 1 ? (s | bit) : (s & ~bit);
        m(t, s) = 1.0;
    }
    return m;
}

}  // namespace

Eigen::MatrixXcd product_jp(long long n_atoms) {
    const int n = product_dim(n_atoms);
    Eigen::MatrixXcd jp = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k < n_atoms; ++k) jp += single(n_atoms, k, 1, 0);
    return jp;
}

Eigen::MatrixXcd product_all_a(long long n_atoms) {
    const int n = product_dim(n_atoms);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
    rho(n - 1, n - 1) = 1.0;
    return rho;
}

Eigen::MatrixXcd product_swap(long long n_atoms, int i, int j) {
    const int n = product_dim(n_atoms);
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
    for (int s = 0; s < n; ++s) {
        const int bi = (s >> i) & 1, bj = (s >> j) & 1;
        int t = s & ~((1 << i) | (1 << j));
        t |= (bi << j) | (bj << i);
        p(t, s) = 1.0;
    }
    return p;
}

MomentState product_expectations(const Eigen::MatrixXcd& rho, long long n_atoms) {
    const Eigen::MatrixXcd jp = product_jp(n_atoms);
    const Eigen::MatrixXcd jm = jp.adjoint();
    Eigen::MatrixXcd na = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
    for (int k = 0; k < n_atoms; ++k) na += single(n_atoms, k, 1, 1);
    MomentState s;
    s.jp = (jp * rho).trace();
    s.jp2 = (jp * jp * rho).trace();
    s.jpjm = (jp * jm * rho).trace().real();
    s.jmjp = (jm * jp * rho).trace().real();
    s.na = (na * rho).trace().real();
    s.nb = static_cast<double>(n_atoms) - s.na;
    return s;
}

ProductRun evolve_master_product(const PhysicalParams& params, double t, const SampleOptions& opt) {
    validate(params);
    const long long N = params.n_atoms;
    const int n = product_dim(N);
    if (params.gamma_o != 0.0) throw DickeError("product oracle: gamma_o must be zero");

    const EffectiveModel m = build_effective_model(params, static_cast<double>(N), 0.0);
    const Eigen::MatrixXcd jp = product_jp(N);
    const Eigen::MatrixXcd jm = jp.adjoint();

    Eigen::MatrixXcd H = -0.5 * (m.h_plusminus * jp * jm + m.h_plusplus * jp * jp);
    H = (H + H.adjoint()).eval();

    std::vector<Eigen::MatrixXcd> Ls;
    for (const LindbladSet* set : {&m.stat, &m.osc}) {
        if (set->kappa1 != cplx{} || set->kappa2 != cplx{}) Ls.push_back(set->kappa1 * jm + set->kappa2 * jp);
        const auto& c = set->chi;
        for (int x : {1, 0}) {
            const double gx = x == 1 ? params.gamma_a : params.gamma_b;
            if (gx == 0.0) continue;
            for (int k = 0; k < N; ++k) {
                const Eigen::MatrixXcd xa = single(N, k, x, 1), xb = single(N, k, x, 0);
                Eigen::MatrixXcd L = c[0] * xa + c[1] * xb + c[2] * xa * jp + c[3] * xb * jm + c[4] * xa * jm +
                                     c[5] * xb * jp;
                L *= std::sqrt(gx);
                if (L.cwiseAbs().maxCoeff() > 0.0) Ls.push_back(L);
            }
        }
    }

    Eigen::MatrixXcd K = -I * H;
    for (const auto& L : Ls) K -= 0.5 * L.adjoint() * L;
    const Eigen::MatrixXcd Kd = K.adjoint();

    auto f = [&](double, const Eigen::VectorXcd& x, Eigen::VectorXcd& dx) {
        const Eigen::Map<const Eigen::MatrixXcd> rho(x.data(), n, n);
        Eigen::MatrixXcd out = K * rho + rho * Kd;
        for (const auto& L : Ls) out.noalias() += L * rho * L.adjoint();
        dx = Eigen::Map<const Eigen::VectorXcd>(out.data(), n * n);
    };

    ProductRun run;
    run.n_atoms = N;
    const Eigen::MatrixXcd rho0 = product_all_a(N);
    Eigen::VectorXcd y = Eigen::Map<const Eigen::VectorXcd>(rho0.data(), n * n);
    std::size_t next = 0;
    const auto& times = opt.sample_times;
    auto record = [&](double tt, const Eigen::VectorXcd& v) {
        run.times.push_back(tt);
        run.moments.push_back(product_expectations(Eigen::Map<const Eigen::MatrixXcd>(v.data(), n, n), N));
    };
    while (next < times.size() && times[next] <= 0.0) record(times[next++], y);
    auto obs = [&](const DenseStep<Eigen::VectorXcd>& d) {
        while (next < times.size() && times[next] <= d.t1) {
            const double tt = times[next++];
            record(tt, tt == d.t1 ? *d.y1 : d(tt));
        }
        return true;
    };
    if (t > 0.0) run.ode = integrate_dopri5(f, y, 0.0, t, opt.ode, obs);
    if (run.ode.status != OdeStatus::success)
        throw DickeError(std::string("evolve_master_product: ") + to_string(run.ode.status));
    run.rho = Eigen::Map<const Eigen::MatrixXcd>(y.data(), n, n);
    return run;
}

}  // namespace squeeze
