#include "squeeze/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "squeeze/optimize.hpp"

namespace squeeze {

MomentVector pack(const MomentState& s) {
    MomentVector v;
    v << s.jp.real(), s.jp.imag(), s.jp2.real(), s.jp2.imag(), s.jpjm, s.jmjp, s.na, s.nb;
    return v;
}

MomentState unpack(const MomentVector& v) {
    MomentState s;
    s.jp = {v[0], v[1]};
    s.jp2 = {v[2], v[3]};
    s.jpjm = v[4];
    s.jmjp = v[5];
    s.na = v[6];
    s.nb = v[7];
    return s;
}

MomentState initial_css(long long n_atoms) {
    if (n_atoms < 2) throw MomentError("initial_css: n_atoms must be at least 2");
    MomentState s;
    s.na = static_cast<double>(n_atoms);
    s.nb = 0.0;
    s.jpjm = static_cast<double>(n_atoms);
    s.jmjp = 0.0;
    return s;
}

SpinCovariance spin_covariance(const MomentState& s) {
    SpinCovariance c;
    c.mx = s.jp.real();
    c.my = s.jp.imag();
    const double sum = s.jpjm + s.jmjp;
    c.vxx = (2.0 * s.jp2.real() + sum) / 4.0 - c.mx * c.mx;
    c.vyy = (-2.0 * s.jp2.real() + sum) / 4.0 - c.my * c.my;
    c.vxy = s.jp2.imag() / 2.0 - c.mx * c.my;
    return c;
}

namespace {

double min_variance(const SpinCovariance& c) {
    const double half = 0.5 * (c.vxx - c.vyy);
    return 0.5 * (c.vxx + c.vyy) - std::hypot(half, c.vxy);
}

}  // namespace

double squeezing_parameter(const MomentState& s, long long n_atoms) {
    const double jz = s.jz();
    if (!(jz > 0.0)) throw MomentError("squeezing_parameter: <Jz> must be positive");
    return static_cast<double>(n_atoms) * min_variance(spin_covariance(s)) / (jz * jz);
}

double min_variance_angle(const MomentState& s) {
    const SpinCovariance c = spin_covariance(s);
    const double half = 0.5 * (c.vxx - c.vyy);
    const double amp = std::hypot(half, c.vxy);
    const double scale = std::abs(c.vxx) + std::abs(c.vyy) + 1e-300;
    if (amp <= 1e-14 * scale) return 0.0;
    // V(theta) = mean + half cos 2theta + vxy sin 2theta is minimal where
    // (cos 2theta, sin 2theta) is antiparallel to (half, vxy).
    double theta = 0.5 * std::atan2(-c.vxy, -half);
    if (theta <= -std::numbers::pi / 2) theta += std::numbers::pi;
    if (theta > std::numbers::pi / 2) theta -= std::numbers::pi;
    return theta;
}

MomentState rotate_z(const MomentState& s, double phi) {
    MomentState r = s;
    r.jp = s.jp * std::polar(1.0, phi);
    r.jp2 = s.jp2 * std::polar(1.0, 2.0 * phi);
    return r;
}

std::string breakdown_check(const MomentState& s, long long n_atoms) {
    const double N = static_cast<double>(n_atoms);
    if (s.na < -1e-6 * N || s.nb < -1e-6 * N) return "negative population";
    if (s.jz() < 0.1 * N / 2.0) return "polarization below 10% of N/2";
    const SpinCovariance c = spin_covariance(s);
    const double jz = s.jz();
    // Robertson-Schroedinger bound, exact for any state; the closure can violate it.
    if (c.vxx * c.vyy - c.vxy * c.vxy < (1.0 - 1e-3) * 0.25 * jz * jz) return "uncertainty bound violated";
    // Sphere curvature adds about Vmax^2 / (3 jz^3) to the squeezed variance,
    // which the second-order closure cannot represent.
    const double mean = 0.5 * (c.vxx + c.vyy);
    const double half = std::hypot(0.5 * (c.vxx - c.vyy), c.vxy);
    const double vmax = mean + half, vmin = mean - half;
    if (vmax * vmax / (3.0 * jz * jz * jz) > vmin) return "anti-squeezing exceeds the planar limit";
    return {};
}

ModelProvider make_provider(const PhysicalParams& params, KappaMode mode, const MomentState& state0) {
    const double N = static_cast<double>(params.n_atoms);
    auto clamp_pop = [N](double na, double nb) {
        na = std::clamp(na, 0.0, N);
        nb = std::clamp(nb, 0.0, N - na);
        return std::pair{na, nb};
    };
    const auto [na0, nb0] = clamp_pop(state0.na, state0.nb);
    auto cache = std::make_shared<EffectiveModel>(build_effective_model(params, na0, nb0));
    if (mode == KappaMode::frozen) {
        return [cache](const MomentState&) -> const EffectiveModel& { return *cache; };
    }
    // kappa_tilde is the only population-dependent coefficient, so only the
    // populations need to change between rebuilds.
    return [cache, params, clamp_pop](const MomentState& s) -> const EffectiveModel& {
        const auto [na, nb] = clamp_pop(s.na, s.nb);
        *cache = build_effective_model(params, na, nb);
        return *cache;
    };
}

DriveResult drive(const MomentState& state0, const ModelProvider& model, double t_final, const OdeOptions& ode,
                  bool detect_breakdown, const std::function<bool(const StepContext&)>& step) {
    DriveResult out;
    const long long n_atoms = model(state0).n_atoms;
    const double res0 = state0.commutator_residual();
    auto f = [&model](double, const MomentVector& y, MomentVector& dy) {
        const MomentState s = unpack(y);
        dy = pack(rhs(s, model(s)));
    };
    MomentVector y = pack(state0);
    StepContext ctx;
    auto observer = [&](const DenseStep<MomentVector>& d) {
        ctx.dense = &d;
        ctx.state = unpack(*d.y1);
        out.max_commutator_drift =
            std::max(out.max_commutator_drift, std::abs(ctx.state.commutator_residual() - res0));
        if (detect_breakdown) {
            std::string why = breakdown_check(ctx.state, n_atoms);
            if (!why.empty()) {
                out.breakdown = true;
                out.breakdown_reason = why;
                return false;
            }
        }
        return step(ctx);
    };
    out.ode = integrate_dopri5(f, y, 0.0, t_final, ode, observer);
    if (!out.breakdown && out.ode.status != OdeStatus::success && out.ode.status != OdeStatus::stopped) {
        out.breakdown = true;
        out.breakdown_reason = std::string("integrator: ") + to_string(out.ode.status);
    }
    return out;
}

namespace {

double safe_xi2(const MomentState& s, long long n) {
    return s.jz() > 0.0 ? squeezing_parameter(s, n) : std::numeric_limits<double>::quiet_NaN();
}

Trajectory integrate_impl(const MomentState& state0, const ModelProvider& model, double t_final,
                          const IntegrateOptions& opt) {
    if (!(t_final > 0.0)) throw MomentError("integrate: t_final must be positive");
    if (!(opt.ode.rel_tol > 0.0) || !(opt.ode.abs_tol > 0.0)) throw MomentError("integrate: tolerances must be positive");
    std::vector<double> times = opt.sample_times;
    if (times.empty()) {
        const std::size_t n = std::max<std::size_t>(opt.samples, 2);
        times.resize(n);
        for (std::size_t i = 0; i < n; ++i) times[i] = t_final * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    if (!std::is_sorted(times.begin(), times.end())) throw MomentError("integrate: sample times must be increasing");

    const long long n_atoms = model(state0).n_atoms;
    Trajectory tr;
    auto record = [&](double t, const MomentState& s) {
        tr.times.push_back(t);
        tr.states.push_back(s);
        tr.xi2.push_back(safe_xi2(s, n_atoms));
        tr.theta_star.push_back(min_variance_angle(s));
    };
    std::size_t next = 0;
    while (next < times.size() && times[next] <= 0.0) record(times[next++], state0);

    const DriveResult dr = drive(state0, model, t_final, opt.ode, opt.detect_breakdown, [&](const StepContext& c) {
        while (next < times.size() && times[next] <= c.dense->t1) {
            const double t = times[next++];
            record(t, t == c.dense->t1 ? c.state : unpack((*c.dense)(t)));
        }
        return true;
    });
    tr.breakdown = dr.breakdown;
    tr.breakdown_reason = dr.breakdown_reason;
    tr.ode = dr.ode;
    tr.max_commutator_drift = dr.max_commutator_drift;
    return tr;
}

}  // namespace

Trajectory integrate(const MomentState& state0, const EffectiveModel& model, double t_final,
                     const IntegrateOptions& opt) {
    ModelProvider provider = [&model](const MomentState&) -> const EffectiveModel& { return model; };
    return integrate_impl(state0, provider, t_final, opt);
}

Trajectory integrate(const MomentState& state0, const PhysicalParams& params, double t_final,
                     const IntegrateOptions& opt) {
    return integrate_impl(state0, make_provider(params, opt.kappa_mode, state0), t_final, opt);
}

XiMinimum minimize_xi2(const MomentState& state0, const ModelProvider& model, double t_final, const OdeOptions& ode) {
    const long long n_atoms = model(state0).n_atoms;
    XiMinimum best;
    best.xi2 = safe_xi2(state0, n_atoms);
    best.t = 0.0;
    best.state = state0;

    // Copy of the step holding the best sample, for refinement.
    MomentVector y0c, y1c;
    DenseStep<MomentVector> held;
    bool have_step = false;
    constexpr int kProbe = 4;

    const DriveResult dr = drive(state0, model, t_final, ode, true, [&](const StepContext& c) {
        const auto& d = *c.dense;
        bool improved = false;
        for (int k = 1; k <= kProbe; ++k) {
            const double t = d.t0 + (d.t1 - d.t0) * k / kProbe;
            const MomentState s = k == kProbe ? c.state : unpack(d(t));
            const double x = safe_xi2(s, n_atoms);
            if (x < best.xi2) {
                best.xi2 = x;
                best.t = t;
                best.state = s;
                improved = true;
            }
        }
        if (improved) {
            y0c = *d.y0;
            y1c = *d.y1;
            held = d;
            held.y0 = &y0c;
            held.y1 = &y1c;
            have_step = true;
        }
        return true;
    });
    best.breakdown = dr.breakdown;
    best.status = dr.ode.status;

    if (have_step) {
        const double hs = (held.t1 - held.t0) / kProbe;
        const double a = std::max(held.t0, best.t - hs), b = std::min(held.t1, best.t + hs);
        const LineMinimum lm = golden_section(
            [&](double t) { return safe_xi2(unpack(held(t)), n_atoms); }, a, b, 1e-9 * std::max(1.0, b));
        if (lm.f < best.xi2) {
            best.xi2 = lm.f;
            best.t = lm.x;
            best.state = unpack(held(lm.x));
        }
    }
    return best;
}

}  // namespace squeeze
