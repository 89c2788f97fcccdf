#include "squeeze/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "squeeze/optimize.hpp"

namespace squeeze {

const char* to_string(Scheme s) { return s == Scheme::one_axis ? "one_axis" : "two_axis"; }

Scheme scheme_from_string(const std::string& s) {
    if (s == "one_axis") return Scheme::one_axis;
    if (s == "two_axis") return Scheme::two_axis;
    throw std::invalid_argument("unknown scheme '" + s + "'");
}

Preset make_preset(double nc) {
    if (!(nc > 0.0)) throw ModelError("preset: NC must be positive");
    Preset p;
    p.nc = nc;
    p.n_atoms = static_cast<long long>(std::llround(100.0 * nc));
    return p;
}

PhysicalParams preset_params(const Preset& pr, Scheme scheme, double delta, cplx ratio) {
    PhysicalParams p;
    p.gamma_a = p.gamma_b = p.gamma_o = 1.0 / 3.0;
    p.kappa = pr.kappa;
    p.n_atoms = pr.n_atoms;
    const double c = pr.nc / static_cast<double>(pr.n_atoms);
    const double g = std::sqrt(c * pr.kappa * p.gamma());
    p.g_a = p.g_b = g;
    p.omega_b = pr.omega_b;
    p.delta1 = pr.delta1_per_nc * pr.nc;
    p.delta2 = p.delta1 - pr.omega_b;
    if (p.delta2 == 0.0) throw ModelError("preset: Delta2 vanishes at this NC");
    p.delta = delta;
    const double w = pr.drive_cap / std::max(1.0 / std::abs(p.delta1), std::abs(ratio) / std::abs(p.delta2));
    p.omega1 = w;
    p.omega2 = ratio * w;
    if (scheme == Scheme::two_axis) {
        p.omega3 = -p.omega1;
        p.omega4 = p.omega2;
    }
    return p;
}

double time_unit(const Preset& pr) { return 1.0 / (pr.drive_cap * pr.drive_cap); }

Scenario make_scenario(Scheme scheme, double nc) {
    Scenario sc;
    sc.scheme = scheme;
    sc.preset = make_preset(nc);
    sc.log_t_hi = 1.0;
    sc.log_delta_hi = std::log10(10.0 * std::sqrt(nc));
    return sc;
}

void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
    jobs = std::max(1, std::min(jobs, n));
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    for (int j = 0; j < jobs; ++j) {
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                if (failed) return;
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) err = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

double seeded_uniform(std::uint64_t seed, std::uint64_t index) {
    std::mt19937_64 eng(seed * 0x9E3779B97F4A7C15ULL + index);
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

namespace {

struct SqueezePoint {
    double xi2 = 1.0;
    double t = 0.0;
    bool breakdown = false;
};

double horizon_of(const Scenario& sc, double log_t) { return time_unit(sc.preset) * std::pow(10.0, log_t); }

SqueezePoint squeeze_eval(const Scenario& sc, const std::vector<double>& x) {
    const double delta = sc.preset.kappa * std::pow(10.0, x[1]);
    const PhysicalParams p = preset_params(sc.preset, sc.scheme, delta, {x[2], x[3]});
    const MomentState s0 = initial_css(p.n_atoms);
    const XiMinimum m = minimize_xi2(s0, make_provider(p, sc.kappa_mode, s0), horizon_of(sc, x[0]));
    return {m.xi2, m.t, m.breakdown};
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n == 1 ? 0.5 * (a + b) : a + (b - a) * i / (n - 1);
    return v;
}

double jittered(double v, double spacing, double lo, double hi, const Scenario& sc, std::uint64_t idx) {
    const double u = seeded_uniform(sc.seed, idx) - 0.5;
    return std::clamp(v + sc.jitter * spacing * u, lo, hi);
}

struct Candidate {
    std::vector<double> x;
    double f = 0.0;
};

// Picks the k best candidates in order, keeping ties stable by index.
std::vector<Candidate> top_candidates(std::vector<Candidate> c, int k) {
    std::stable_sort(c.begin(), c.end(), [](const Candidate& a, const Candidate& b) { return a.f < b.f; });
    c.resize(std::min<std::size_t>(c.size(), static_cast<std::size_t>(std::max(k, 1))));
    return c;
}

}  // namespace

OptResult optimize_squeezing(const Scenario& sc) {
    const std::vector<double> lo{sc.log_t_lo, sc.log_delta_lo, sc.ratio_lo, sc.ratio_lo};
    const std::vector<double> hi{sc.log_t_hi, sc.log_delta_hi, sc.ratio_hi, sc.ratio_hi};
    const auto gt = linspace(sc.log_t_lo, sc.log_t_hi, sc.grid_t);
    const auto gd = linspace(sc.log_delta_lo, sc.log_delta_hi, sc.grid_delta);
    const double st = sc.grid_t > 1 ? (sc.log_t_hi - sc.log_t_lo) / (sc.grid_t - 1) : 0.0;
    const double sd = sc.grid_delta > 1 ? (sc.log_delta_hi - sc.log_delta_lo) / (sc.grid_delta - 1) : 0.0;
    const double sr = 0.5;

    std::vector<Candidate> grid;
    std::uint64_t idx = 0;
    for (double a : gt)
        for (double b : gd)
            for (double c : sc.grid_ratio)
                for (double d : sc.grid_ratio) {
                    std::vector<double> x{jittered(a, st, lo[0], hi[0], sc, idx), jittered(b, sd, lo[1], hi[1], sc, idx + 1),
                                          jittered(c, sr, lo[2], hi[2], sc, idx + 2), jittered(d, sr, lo[3], hi[3], sc, idx + 3)};
                    idx += 4;
                    grid.push_back({x, 0.0});
                }
    parallel_for(static_cast<int>(grid.size()), sc.jobs,
                 [&](int i) { grid[static_cast<std::size_t>(i)].f = squeeze_eval(sc, grid[static_cast<std::size_t>(i)].x).xi2; });
    std::size_t evals = grid.size();

    const auto starts = top_candidates(grid, sc.top_k);
    std::vector<NelderMeadResult> runs(starts.size());
    NelderMeadOptions nmo;
    nmo.max_evals = sc.nm_budget;
    nmo.initial_step = {0.3, 0.3, 0.5, 0.5};
    nmo.lower = lo;
    nmo.upper = hi;
    nmo.f_tol = 1e-8;
    nmo.x_tol = 1e-6;
    parallel_for(static_cast<int>(starts.size()), sc.jobs, [&](int i) {
        runs[static_cast<std::size_t>(i)] = nelder_mead([&](const std::vector<double>& x) { return squeeze_eval(sc, x).xi2; },
                                                        starts[static_cast<std::size_t>(i)].x, nmo);
    });

    OptResult best;
    best.objective = std::numeric_limits<double>::infinity();
    std::vector<double> xb;
    bool conv = false;
    for (const auto& r : runs) {
        evals += r.evals;
        if (r.f < best.objective) {
            best.objective = r.f;
            xb = r.x;
            conv = r.converged;
        }
    }
    const SqueezePoint sp = squeeze_eval(sc, xb);
    best.objective = sp.xi2;
    best.t = sp.t > 0.0 ? sp.t : horizon_of(sc, sc.log_t_lo);
    best.breakdown = sp.breakdown;
    best.delta = sc.preset.kappa * std::pow(10.0, xb[1]);
    best.ratio = {xb[2], xb[3]};
    best.evaluations = evals + 1;
    best.converged = conv;
    best.params = preset_params(sc.preset, sc.scheme, best.delta, best.ratio);
    best.validity = validity_report(best.params);
    return best;
}

namespace {

struct OutRotation {
    double phi = 0.0;
    double f = 0.0;
};

// Best output rotation for one state: coarse scan then golden refinement.
OutRotation best_rotation(const GaussianMoments& out, const GaussianMoments& target) {
    constexpr int kScan = 36;
    OutRotation best{0.0, -1.0};
    for (int i = 0; i < kScan; ++i) {
        const double phi = 2.0 * std::numbers::pi * i / kScan;
        const double f = fidelity(rotate(out, phi), target);
        if (f > best.f) best = {phi, f};
    }
    const double h = 2.0 * std::numbers::pi / kScan;
    const LineMinimum lm =
        golden_section([&](double phi) { return -fidelity(rotate(out, phi), target); }, best.phi - h, best.phi + h, 1e-9);
    if (-lm.f > best.f) best = {lm.x, -lm.f};
    best.phi = std::remainder(best.phi, 2.0 * std::numbers::pi);
    return best;
}

}  // namespace

FidelityPoint fidelity_at(const Scenario& sc, const PhysicalParams& params, double s, double r, double phase,
                          double phi_in, double horizon) {
    const long long N = params.n_atoms;
    GaussianMoments input = GaussianMoments::vacuum();
    input.mean = Eigen::Vector2d(r * std::cos(phase), r * std::sin(phase));
    const GaussianMoments tgt = ideal_squeeze(input, s);
    const MomentState s0 = displaced_css(N, r, phase + phi_in);

    FidelityPoint best;
    auto score = [&](const MomentState& st) -> OutRotation {
        if (!(st.jz() > 0.1 * static_cast<double>(N) / 2.0)) return {0.0, 0.0};
        const GaussianMoments g = to_gaussian(st, N);
        if (g.cov.determinant() < 0.25 - 1e-9 || !(g.cov(0, 0) > 0.0)) return {0.0, 0.0};
        return best_rotation(g, tgt);
    };
    double best_f = -1.0;
    {
        const OutRotation o = score(s0);
        best_f = o.f;
        best.t = 0.0;
        best.phi_out = o.phi;
    }

    MomentVector y0c, y1c;
    DenseStep<MomentVector> held;
    bool have = false;
    constexpr int kProbe = 4;
    const DriveResult dr =
        drive(s0, make_provider(params, sc.kappa_mode, s0), horizon, OdeOptions{}, true, [&](const StepContext& c) {
            const auto& d = *c.dense;
            bool improved = false;
            for (int k = 1; k <= kProbe; ++k) {
                const double t = d.t0 + (d.t1 - d.t0) * k / kProbe;
                const OutRotation o = score(k == kProbe ? c.state : unpack(d(t)));
                if (o.f > best_f) {
                    best_f = o.f;
                    best.t = t;
                    best.phi_out = o.phi;
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
        });
    best.breakdown = dr.breakdown;
    if (have) {
        const double hs = (held.t1 - held.t0) / kProbe;
        const double a = std::max(held.t0, best.t - hs), b = std::min(held.t1, best.t + hs);
        const LineMinimum lm =
            golden_section([&](double t) { return -score(unpack(held(t))).f; }, a, b, 1e-9 * std::max(1.0, b));
        if (-lm.f > best_f) {
            best_f = -lm.f;
            best.t = lm.x;
            best.phi_out = score(unpack(held(lm.x))).phi;
        }
    }
    best.epsilon = std::clamp(1.0 - best_f, 0.0, 1.0);
    return best;
}

OptResult optimize_fidelity(const Scenario& sc, double s, double r, double phase, const FidelitySettings& fs) {
    const double horizon = fs.horizon_units * time_unit(sc.preset);
    const std::vector<double> lo{sc.log_delta_lo, sc.ratio_lo, sc.ratio_lo, -4.0 * std::numbers::pi};
    const std::vector<double> hi{sc.log_delta_hi, sc.ratio_hi, sc.ratio_hi, 4.0 * std::numbers::pi};
    auto eval = [&](const std::vector<double>& x) {
        const double delta = sc.preset.kappa * std::pow(10.0, x[0]);
        const PhysicalParams p = preset_params(sc.preset, sc.scheme, delta, {x[1], x[2]});
        return fidelity_at(sc, p, s, r, phase, x[3], horizon);
    };

    const auto gd = linspace(sc.log_delta_lo, sc.log_delta_hi, fs.grid_delta);
    const double sd = fs.grid_delta > 1 ? (sc.log_delta_hi - sc.log_delta_lo) / (fs.grid_delta - 1) : 0.0;
    std::vector<Candidate> grid;
    std::uint64_t idx = 0;
    for (double a : gd)
        for (double b : fs.grid_ratio)
            for (double c : fs.grid_ratio)
                for (int k = 0; k < fs.grid_phi_in; ++k) {
                    const double phi = std::numbers::pi * k / fs.grid_phi_in;
                    grid.push_back({{jittered(a, sd, lo[0], hi[0], sc, idx), jittered(b, 0.5, lo[1], hi[1], sc, idx + 1),
                                     jittered(c, 0.5, lo[2], hi[2], sc, idx + 2), phi},
                                    0.0});
                    idx += 3;
                }
    parallel_for(static_cast<int>(grid.size()), sc.jobs,
                 [&](int i) { grid[static_cast<std::size_t>(i)].f = eval(grid[static_cast<std::size_t>(i)].x).epsilon; });
    std::size_t evals = grid.size();

    const auto starts = top_candidates(grid, fs.top_k);
    std::vector<NelderMeadResult> runs(starts.size());
    NelderMeadOptions nmo;
    nmo.max_evals = fs.nm_budget;
    nmo.initial_step = {0.3, 0.5, 0.5, 0.3};
    nmo.lower = lo;
    nmo.upper = hi;
    nmo.f_tol = 1e-6;
    nmo.x_tol = 1e-5;
    parallel_for(static_cast<int>(starts.size()), sc.jobs, [&](int i) {
        runs[static_cast<std::size_t>(i)] =
            nelder_mead([&](const std::vector<double>& x) { return eval(x).epsilon; }, starts[static_cast<std::size_t>(i)].x, nmo);
    });

    OptResult best;
    best.objective = std::numeric_limits<double>::infinity();
    std::vector<double> xb = starts.front().x;
    for (const auto& rr : runs) {
        evals += rr.evals;
        if (rr.f < best.objective) {
            best.objective = rr.f;
            xb = rr.x;
            best.converged = rr.converged;
        }
    }
    const FidelityPoint fp = eval(xb);
    best.objective = fp.epsilon;
    best.t = fp.t;
    best.phi_out = fp.phi_out;
    best.breakdown = fp.breakdown;
    best.delta = sc.preset.kappa * std::pow(10.0, xb[0]);
    best.ratio = {xb[1], xb[2]};
    best.phi_in = xb[3];
    best.evaluations = evals + 1;
    best.params = preset_params(sc.preset, sc.scheme, best.delta, best.ratio);
    best.validity = validity_report(best.params);
    return best;
}

FidelityAverage average_fidelity_campaign(const Scenario& sc, double s, double r, int n_phases,
                                          const FidelitySettings& fs) {
    FidelityAverage out;
    out.optima.resize(static_cast<std::size_t>(n_phases));
    Scenario inner = sc;
    inner.jobs = 1;
    parallel_for(n_phases, sc.jobs, [&](int k) {
        const double ph = 2.0 * std::numbers::pi * k / n_phases;
        Scenario local = inner;
        local.seed = sc.seed + static_cast<std::uint64_t>(k) * 1000003ULL;
        out.optima[static_cast<std::size_t>(k)] = optimize_fidelity(local, s, r, ph, fs);
    });
    int k = 0;
    out.per_phase = average_infidelity(
        [&](double) {
            const OptResult& o = out.optima[static_cast<std::size_t>(k++)];
            return PhaseOutcome{o.objective, std::isfinite(o.objective)};
        },
        n_phases);

    // Shared parameters: each per-phase optimum evaluated at every phase.
    const double horizon = fs.horizon_units * time_unit(sc.preset);
    std::vector<double> shared(static_cast<std::size_t>(n_phases), 0.0);
    parallel_for(n_phases, sc.jobs, [&](int c) {
        const OptResult& o = out.optima[static_cast<std::size_t>(c)];
        double acc = 0.0;
        for (int j = 0; j < n_phases; ++j) {
            const double ph = 2.0 * std::numbers::pi * j / n_phases;
            acc += fidelity_at(inner, o.params, s, r, ph, o.phi_in, horizon).epsilon;
        }
        shared[static_cast<std::size_t>(c)] = acc / n_phases;
    });
    out.shared_epsilon = *std::min_element(shared.begin(), shared.end());
    return out;
}

}  // namespace squeeze
