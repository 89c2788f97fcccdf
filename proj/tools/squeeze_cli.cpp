// Command-line front end: estimate, simulate, optimize, figure.
//
// Exit codes: 0 success, 1 numerical failure, 2 usage error.
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "squeeze/campaign.hpp"
#include "squeeze/dicke.hpp"
#include "squeeze/estimates.hpp"
#include "squeeze/figures.hpp"
#include "squeeze/io.hpp"

namespace {

using namespace squeeze;
using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string config;
    std::string out;
    std::uint64_t seed = 1;
    int jobs = 1;
    std::string scale = "desk";
};

struct PresetArgs {
    std::string scheme = "two_axis";
    double nc = 1e3;
    double delta = 1.0;
    double ratio_re = 1.0, ratio_im = 0.0;
};

void add_preset_flags(CLI::App* sub, PresetArgs& a) {
    sub->add_option("--scheme", a.scheme, "one_axis or two_axis")->check(CLI::IsMember({"one_axis", "two_axis"}));
    sub->add_option("--nc", a.nc, "collective cooperativity of the preset")->check(CLI::PositiveNumber);
    sub->add_option("--delta", a.delta, "two-photon detuning [Gamma]");
    sub->add_option("--ratio-re", a.ratio_re, "Re Omega2/Omega1");
    sub->add_option("--ratio-im", a.ratio_im, "Im Omega2/Omega1");
}

PhysicalParams params_for(const Common& c, const PresetArgs& a) {
    PhysicalParams p;
    if (!c.config.empty()) {
        p = params_from_json(read_json_file(c.config));
    } else {
        p = preset_params(make_preset(a.nc), scheme_from_string(a.scheme), a.delta, {a.ratio_re, a.ratio_im});
    }
    try {
        validate(p);
    } catch (const ModelError& e) {
        throw UsageError(e.what());
    }
    return p;
}

// Writes to <out>/<file> when --out is set, otherwise to stdout.
template <class F>
void emit(const Common& c, const std::string& file, F&& write) {
    if (c.out.empty()) {
        write(std::cout);
        return;
    }
    std::filesystem::create_directories(c.out);
    std::ofstream os(std::filesystem::path(c.out) / file);
    if (!os) throw UsageError("cannot write into '" + c.out + "'");
    write(os);
}

int run_estimate(const Common& c, const PresetArgs& a) {
    double n, coop, kappa, gamma, ratio;
    if (!c.config.empty()) {
        const PhysicalParams p = params_for(c, a);
        const GenericCouplings g = generic_couplings(p);
        n = static_cast<double>(p.n_atoms);
        kappa = p.kappa;
        gamma = p.gamma();
        coop = g.g * g.g / (kappa * gamma);
        ratio = g.omega / g.big_delta;
    } else {
        const Preset pr = make_preset(a.nc);
        n = static_cast<double>(pr.n_atoms);
        coop = a.nc / n;
        kappa = pr.kappa;
        gamma = 1.0;
        ratio = pr.drive_cap;
    }
    const ScalingEstimate e = scaling_estimate(n, coop, kappa, gamma, ratio);
    const json j{{"delta_s", e.delta_s}, {"t_s", e.t_s},     {"t_s_scaled", e.t_s_scaled},
                 {"xi2_min", e.xi2_min}, {"alpha", e.alpha}, {"nc", e.nc}};
    emit(c, "estimate.json", [&](std::ostream& os) { os << j.dump(2) << '\n'; });
    return 0;
}

struct SimArgs {
    double t_final = 0.0;
    std::size_t samples = 201;
    std::string solver = "moments";
    std::string kappa_mode = "instantaneous";
};

int run_simulate(const Common& c, const PresetArgs& a, const SimArgs& s) {
    const PhysicalParams p = params_for(c, a);
    const double T = s.t_final > 0.0 ? s.t_final : time_unit(make_preset(a.nc));
    if (s.samples < 2) throw UsageError("--samples must be at least 2");
    std::vector<double> ts;
    for (std::size_t i = 0; i < s.samples; ++i) ts.push_back(T * static_cast<double>(i) / static_cast<double>(s.samples - 1));

    if (s.solver == "moments") {
        IntegrateOptions io;
        io.sample_times = ts;
        io.kappa_mode = s.kappa_mode == "frozen" ? KappaMode::frozen : KappaMode::instantaneous;
        const Trajectory tr = integrate(initial_css(p.n_atoms), p, T, io);
        emit(c, "trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, tr); });
        if (tr.breakdown) std::cerr << "linearization breakdown: " << tr.breakdown_reason << '\n';
        return tr.ode.status == OdeStatus::success || tr.ode.status == OdeStatus::stopped ? 0 : 1;
    }
    SampleOptions so;
    so.sample_times = ts;
    std::vector<double> times;
    std::vector<MomentState> moments;
    if (s.solver == "product") {
        if (p.n_atoms > 5) throw UsageError("product solver needs n_atoms <= 5");
        ProductRun r = evolve_master_product(p, T, so);
        times = std::move(r.times);
        moments = std::move(r.moments);
    } else {
        if (p.n_atoms > 4000) throw UsageError("ladder solvers need n_atoms <= 4000");
        const EffectiveModel m = build_effective_model(p, static_cast<double>(p.n_atoms), 0.0);
        const BandedMatrix H = effective_hamiltonian(m);
        if (s.solver == "pure") {
            PureRun r = evolve_pure(DickeState::all_a(p.n_atoms), H, T, so);
            times = std::move(r.times);
            moments = std::move(r.moments);
        } else {
            MasterRun r = evolve_master_collective(DickeDensity::from_pure(DickeState::all_a(p.n_atoms)), H,
                                                   cavity_lindblads(m), T, so);
            times = std::move(r.times);
            moments = std::move(r.moments);
        }
    }
    emit(c, "trajectory.csv", [&](std::ostream& os) { write_exact_csv(os, times, moments, p.n_atoms, s.solver); });
    return 0;
}

struct OptArgs {
    std::string objective = "squeezing";
    double log10_s = -0.5;
    double r = 0.1;
    int n_phases = 8;
};

int run_optimize(const Common& c, const PresetArgs& a, const OptArgs& o) {
    Scenario sc = make_scenario(scheme_from_string(a.scheme), a.nc);
    sc.seed = c.seed;
    sc.jobs = c.jobs;
    json j;
    if (o.objective == "squeezing") {
        j = to_json(optimize_squeezing(sc));
    } else {
        if (o.n_phases < 4) throw UsageError("--phases must be at least 4");
        const FidelityAverage f = average_fidelity_campaign(sc, std::pow(10.0, o.log10_s), o.r, o.n_phases);
        json optima = json::array();
        for (const OptResult& r : f.optima) optima.push_back(to_json(r));
        j = {{"epsilon", f.per_phase.mean},
             {"epsilon_shared", f.shared_epsilon},
             {"per_phase", f.per_phase.per_phase},
             {"partial", f.per_phase.partial},
             {"optima", optima}};
    }
    j["scheme"] = a.scheme;
    j["nc"] = a.nc;
    emit(c, "optimize.json", [&](std::ostream& os) { os << j.dump(2) << '\n'; });
    return 0;
}

int run_figure_cmd(const Common& c, const std::string& name) {
    if (!is_figure_name(name)) throw UsageError("unknown figure '" + name + "'");
    FigureOptions fo;
    fo.out_dir = c.out.empty() ? "." : c.out;
    fo.seed = c.seed;
    fo.jobs = c.jobs;
    fo.scale = scale_from_string(c.scale);
    run_figure(name, fo);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spin squeezing in optical cavities: estimates, simulation and optimization"};
    app.require_subcommand(1);
    app.fallthrough();
    Common c;
    app.add_option("--config", c.config, "JSON parameter file");
    app.add_option("--out", c.out, "output directory");
    app.add_option("--seed", c.seed, "optimizer seed");
    app.add_option("--jobs", c.jobs, "worker threads")->check(CLI::Range(1, 256));
    app.add_option("--scale", c.scale, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));

    PresetArgs pa;
    SimArgs sa;
    OptArgs oa;
    std::string fig;

    CLI::App* est = app.add_subcommand("estimate", "closed-form scaling estimates as JSON");
    est->add_option("--nc", pa.nc, "collective cooperativity")->check(CLI::PositiveNumber);

    CLI::App* sim = app.add_subcommand("simulate", "integrate one parameter set and write a trajectory CSV");
    add_preset_flags(sim, pa);
    sim->add_option("--t-final", sa.t_final, "horizon [1/Gamma]; defaults to one drive time unit");
    sim->add_option("--samples", sa.samples, "number of samples");
    sim->add_option("--solver", sa.solver, "moments, pure, collective or product")
        ->check(CLI::IsMember({"moments", "pure", "collective", "product"}));
    sim->add_option("--kappa-mode", sa.kappa_mode, "cavity linewidth from current or initial populations")->check(CLI::IsMember({"instantaneous", "frozen"}));

    CLI::App* opt = app.add_subcommand("optimize", "optimize squeezing or fidelity on the preset");
    opt->add_option("--scheme", pa.scheme, "one_axis or two_axis")->check(CLI::IsMember({"one_axis", "two_axis"}));
    opt->add_option("--nc", pa.nc, "collective cooperativity of the preset")->check(CLI::PositiveNumber);
    opt->add_option("--objective", oa.objective, "squeezing or fidelity")->check(CLI::IsMember({"squeezing", "fidelity"}));
    opt->add_option("--log10-s", oa.log10_s, "target squeezing for the fidelity objective");
    opt->add_option("--r", oa.r, "input displacement for the fidelity objective")->check(CLI::NonNegativeNumber);
    opt->add_option("--phases", oa.n_phases, "input phases averaged by the fidelity objective");

    CLI::App* figc = app.add_subcommand("figure", "reproduce a figure's data set");
    figc->add_option("name", fig, "figx1, fig2, fig3 or fig4_lite")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*est) return run_estimate(c, pa);
        if (*sim) return run_simulate(c, pa, sa);
        if (*opt) return run_optimize(c, pa, oa);
        return run_figure_cmd(c, fig);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
