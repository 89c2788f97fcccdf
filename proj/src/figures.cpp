#include "squeeze/figures.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "squeeze/estimates.hpp"
#include "squeeze/io.hpp"

namespace squeeze {

using nlohmann::json;

Scale scale_from_string(const std::string& s) {
    if (s == "desk") return Scale::desk;
    if (s == "paper") return Scale::paper;
    throw FigureError("unknown scale '" + s + "'");
}

const char* to_string(Scale s) { return s == Scale::desk ? "desk" : "paper"; }

const std::vector<std::string>& figure_names() {
    static const std::vector<std::string> names{"figx1", "fig2", "fig3", "fig4_lite"};
    return names;
}

bool is_figure_name(const std::string& name) {
    for (const auto& n : figure_names())
        if (n == name) return true;
    return false;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw FigureError("loglog_slope: need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

EffectiveModel ideal_twist_model(TwistKind kind, double alpha, long long n_atoms) {
    EffectiveModel m;
    m.n_atoms = n_atoms;
    if (kind == TwistKind::one_axis) {
        // Jx^2 = (J+^2 + J-^2)/4 + J+J-/2 - Jz/2
        m.h_plusplus = -alpha / 2.0;
        m.h_plusminus = -alpha / 2.0;
    } else {
        // (i alpha / 2)(J+^2 - J-^2)
        m.h_plusplus = cplx{0.0, -alpha};
    }
    return m;
}

TwistCurves twist_curves(TwistKind kind, double alpha, long long n_atoms, double t_final, std::size_t samples) {
    TwistCurves c;
    for (std::size_t i = 0; i < samples; ++i) c.times.push_back(t_final * static_cast<double>(i) / static_cast<double>(samples - 1));
    const EffectiveModel m = ideal_twist_model(kind, alpha, n_atoms);

    IntegrateOptions io;
    io.sample_times = c.times;
    io.detect_breakdown = false;
    io.ode = {1e-10, 1e-12};
    const Trajectory tr = integrate(initial_css(n_atoms), m, t_final, io);
    c.linearized = tr.xi2;

    SampleOptions so;
    so.sample_times = c.times;
    const double theta = kind == TwistKind::one_axis ? 0.0 : -std::numbers::pi / 4.0;
    const PureRun pr = evolve_pure(DickeState::all_a(n_atoms), build_hamiltonian(kind, alpha, theta, n_atoms), t_final, so);
    for (const MomentState& s : pr.moments)
        c.direct.push_back(s.jz() > 0.0 ? squeezing_parameter(s, n_atoms) : std::nan(""));
    return c;
}

OptResult fig2_point(Scheme scheme, double nc, std::uint64_t seed, int jobs) {
    Scenario sc = make_scenario(scheme, nc);
    sc.seed = seed;
    sc.jobs = jobs;
    return optimize_squeezing(sc);
}

double scaled_time(const Preset& preset, double t) { return 2.0 * preset.drive_cap * preset.drive_cap * t; }

Fig3Point fig3_point(Scheme scheme, double nc, double log10_s, double r, std::uint64_t seed, int jobs, int n_phases) {
    Scenario sc = make_scenario(scheme, nc);
    sc.seed = seed;
    sc.jobs = jobs;
    Fig3Point p;
    p.scheme = scheme;
    p.log10_s = log10_s;
    p.r = r;
    p.average = average_fidelity_campaign(sc, std::pow(10.0, log10_s), r, n_phases);
    return p;
}

namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const fs::path& path) {
    std::ofstream os(path);
    if (!os) throw FigureError("cannot write '" + path.string() + "'");
    return os;
}

std::string csv_join(std::initializer_list<double> v) {
    std::string s;
    bool first = true;
    for (double x : v) {
        if (!first) s += ',';
        s += format_double(x);
        first = false;
    }
    return s;
}

json figx1(const FigureOptions& opt, const fs::path& dir) {
    constexpr long long kN = 1000;
    const double alpha = 1.0 / kN;
    const std::size_t samples = opt.scale == Scale::desk ? 201 : 1001;
    std::ofstream os = open_out(dir / "figx1.csv");
    os << "scheme,method,t,xi2\n";
    json curves = json::array();
    for (TwistKind k : {TwistKind::one_axis, TwistKind::two_axis}) {
        const bool one = k == TwistKind::one_axis;
        const char* name = one ? "one_axis" : "two_axis";
        const TwistCurves c = twist_curves(k, alpha, kN, one ? 20.0 : 4.5, samples);
        for (const auto& [method, ys] : {std::pair{"direct", &c.direct}, std::pair{"linearized", &c.linearized}}) {
            double best = INFINITY, tb = 0.0;
            for (std::size_t i = 0; i < c.times.size(); ++i) {
                os << name << ',' << method << ',' << csv_join({c.times[i], (*ys)[i]}) << '\n';
                if ((*ys)[i] < best) {
                    best = (*ys)[i];
                    tb = c.times[i];
                }
            }
            curves.push_back({{"scheme", name}, {"method", method}, {"xi2_min", best}, {"t_min", tb}});
        }
    }
    return {{"n_atoms", kN}, {"alpha", alpha}, {"samples", samples}, {"curves", curves}};
}

json fig2(const FigureOptions& opt, const fs::path& dir) {
    const std::vector<double> ncs = opt.scale == Scale::desk
                                        ? std::vector<double>{1e2, 1e3, 1e4}
                                        : std::vector<double>{1e2, std::pow(10.0, 2.5), 1e3, std::pow(10.0, 3.5), 1e4};
    std::ofstream os = open_out(dir / "fig2.csv");
    os << "scheme,nc,xi2_min,t_opt,delta_opt,ratio_re,ratio_im,evaluations,converged\n";
    json points = json::array(), slopes = json::object();
    for (Scheme sch : {Scheme::one_axis, Scheme::two_axis}) {
        std::vector<double> xs;
        for (double nc : ncs) {
            const OptResult r = fig2_point(sch, nc, opt.seed, opt.jobs);
            const Preset pr = make_preset(nc);
            os << to_string(sch) << ',' << csv_join({nc, r.objective, r.t, r.delta, r.ratio.real(), r.ratio.imag()}) << ','
               << r.evaluations << ',' << (r.converged ? 1 : 0) << '\n';
            xs.push_back(r.objective);
            const ScalingEstimate est = scaling_estimate(static_cast<double>(pr.n_atoms), nc / static_cast<double>(pr.n_atoms),
                                                         pr.kappa, 1.0, pr.drive_cap);
            points.push_back({{"scheme", to_string(sch)},
                              {"nc", nc},
                              {"n_atoms", pr.n_atoms},
                              {"result", to_json(r)},
                              {"gamma_t_scaled", scaled_time(pr, r.t)},
                              {"estimate", {{"delta_s", est.delta_s}, {"t_s_scaled", est.t_s_scaled}, {"xi2_min", est.xi2_min}}}});
        }
        slopes[to_string(sch)] = loglog_slope(ncs, xs);
    }
    return {{"nc", ncs}, {"slopes", slopes}, {"points", points}, {"n_atoms_rule", "n_atoms = 100 NC"}};
}

json fig3(const FigureOptions& opt, const fs::path& dir) {
    constexpr double kNC = 1e3;
    std::vector<double> ls, rs;
    if (opt.scale == Scale::desk) {
        ls = {-0.125, -0.25, -0.375, -0.5, -0.625, -0.75};
        rs = {0.1, 1.0, 2.0, 3.0};
    } else {
        for (int i = 1; i <= 12; ++i) ls.push_back(-0.0625 * i);
        rs = {0.1, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    }
    std::ofstream os = open_out(dir / "fig3.csv");
    os << "scheme,log10_s,r,epsilon,delta_opt,t_opt,ratio_re,ratio_im,phi_in,phi_out\n";
    json rows = json::array();
    for (Scheme sch : {Scheme::one_axis, Scheme::two_axis})
        for (double l : ls)
            for (double r : rs) {
                const Fig3Point p = fig3_point(sch, kNC, l, r, opt.seed, opt.jobs);
                const OptResult& o0 = p.average.optima.front();
                os << to_string(sch) << ','
                   << csv_join({l, r, p.average.per_phase.mean, o0.delta, o0.t, o0.ratio.real(), o0.ratio.imag(), o0.phi_in,
                                o0.phi_out})
                   << '\n';
                rows.push_back({{"scheme", to_string(sch)},
                                {"log10_s", l},
                                {"r", r},
                                {"epsilon_per_phase_mean", p.average.per_phase.mean},
                                {"epsilon_shared", p.average.shared_epsilon},
                                {"per_phase", p.average.per_phase.per_phase},
                                {"partial", p.average.per_phase.partial}});
            }
    return {{"nc", kNC},
            {"n_phases", 8},
            {"aggregation", "optimize per phase, then average; epsilon_shared applies the best single optimum to all phases"},
            {"row_parameters", "optimum at input phase 0"},
            {"rows", rows}};
}

json fig4_lite(const FigureOptions& opt, const fs::path& dir) {
    constexpr double kNC = 1e4, kDelta = 100.0;
    Scenario sc = make_scenario(Scheme::two_axis, kNC);
    sc.seed = opt.seed;
    sc.jobs = opt.jobs;
    sc.log_delta_lo = sc.log_delta_hi = std::log10(kDelta / sc.preset.kappa);
    sc.grid_delta = 1;
    const OptResult r = optimize_squeezing(sc);
    // Both drives at the cap so that the two forms of beta coincide; the
    // optimized phase of Omega2/Omega1 is kept.
    const PhysicalParams base = preset_params(sc.preset, Scheme::two_axis, kDelta, 1.0);
    const cplx ratio = std::polar(std::abs(base.delta2 / base.delta1), std::arg(r.ratio));
    const PhysicalParams p = preset_params(sc.preset, Scheme::two_axis, kDelta, ratio);
    const double beta = beta_rescale(p);
    IntegrateOptions io;
    io.samples = opt.scale == Scale::desk ? 201 : 1001;
    io.detect_breakdown = false;
    const Trajectory tr = integrate(initial_css(p.n_atoms), p, 2.0 * r.t, io);
    std::ofstream os = open_out(dir / "fig4_lite.csv");
    os << "beta_t,xi2\n";
    for (std::size_t i = 0; i < tr.times.size(); ++i) os << csv_join({beta * tr.times[i], tr.xi2[i]}) << '\n';
    return {{"nc", kNC}, {"delta", kDelta}, {"beta", beta}, {"curve", "eliminated cavity model"},
            {"params", to_json(p)},      {"optimum", to_json(r)}};
}

}  // namespace

json run_figure(const std::string& name, const FigureOptions& opt) {
    if (!is_figure_name(name)) throw FigureError("unknown figure '" + name + "'");
    const fs::path dir(opt.out_dir);
    fs::create_directories(dir);
    json m{{"figure", name}, {"scale", to_string(opt.scale)}, {"seed", opt.seed}};
    if (name == "figx1") m["data"] = figx1(opt, dir);
    else if (name == "fig2") m["data"] = fig2(opt, dir);
    else if (name == "fig3") m["data"] = fig3(opt, dir);
    else m["data"] = fig4_lite(opt, dir);
    std::ofstream os = open_out(dir / "manifest.json");
    os << m.dump(2) << '\n';
    return m;
}

}  // namespace squeeze
