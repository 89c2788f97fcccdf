// Optimization campaigns over the laser parameters of the two schemes.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "squeeze/gaussian.hpp"
#include "squeeze/model.hpp"
#include "squeeze/moments.hpp"

namespace squeeze {

enum class Scheme { one_axis, two_axis };

const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

// Fixed operating point shared by all campaigns: Gamma = kappa,
// gamma_a = gamma_b = gamma_o, g_a = g_b, omega_b = 1e3 Gamma,
// Delta1 = 20 Gamma NC, Delta2 = Delta1 - omega_b.
struct Preset {
    double nc = 100.0;
    long long n_atoms = 10000;  // defaults to 100 NC when built via make_preset
    double drive_cap = 1.0 / 50.0;
    double omega_b = 1e3;
    double delta1_per_nc = 20.0;
    double kappa = 1.0;
};

Preset make_preset(double nc);

// Drives Omega1 = w, Omega2 = ratio * w with w scaled so that
// max(|Omega1|/|Delta1|, |Omega2|/|Delta2|) equals the cap. Two-axis adds
// Omega3 = -Omega1 and Omega4 = Omega2; one-axis sets Omega3 = Omega4 = 0.
PhysicalParams preset_params(const Preset& preset, Scheme scheme, double delta, cplx ratio);

// Drive-limited time unit 1/(cap^2 Gamma).
double time_unit(const Preset& preset);

struct Scenario {
    Scheme scheme = Scheme::two_axis;
    Preset preset{};
    std::uint64_t seed = 1;
    int jobs = 1;
    KappaMode kappa_mode = KappaMode::instantaneous;

    // Search box: log10 horizon in time units, log10(delta/kappa), ratio parts.
    double log_t_lo = -3.0, log_t_hi = 0.0;  // make_scenario widens hi to 1
    double log_delta_lo = -2.0, log_delta_hi = 0.0;  // hi defaults to log10(10 sqrt(NC)) via make_scenario
    double ratio_lo = -3.0, ratio_hi = 3.0;

    // Multi-start grid sizes and Nelder-Mead settings.
    int grid_t = 5, grid_delta = 5;
    std::vector<double> grid_ratio{-1.0, 0.0, 1.0};
    int top_k = 3;
    std::size_t nm_budget = 2000;
    double jitter = 0.25;  // fraction of the grid spacing
};

Scenario make_scenario(Scheme scheme, double nc);

struct OptResult {
    double objective = 1.0;
    double t = 0.0;
    double delta = 0.0;
    cplx ratio{0.0, 0.0};
    double phi_in = 0.0;
    double phi_out = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
    bool breakdown = false;
    ValidityReport validity{};
    PhysicalParams params{};
};

// Minimizes min_t xi^2 over (horizon, delta, Omega2/Omega1).
OptResult optimize_squeezing(const Scenario& sc);

// Fidelity objective for one input phase; 1 - F maximized over the
// interaction time and the output rotation.
struct FidelityPoint {
    double epsilon = 1.0;
    double t = 0.0;
    double phi_out = 0.0;
    bool breakdown = false;
};

FidelityPoint fidelity_at(const Scenario& sc, const PhysicalParams& params, double s, double r, double phase,
                          double phi_in, double horizon);

struct FidelitySettings {
    int grid_delta = 5;
    std::vector<double> grid_ratio{-1.0, 0.0, 1.0};
    int grid_phi_in = 4;
    int top_k = 2;
    std::size_t nm_budget = 300;
    double horizon_units = 1.0;  // integration horizon in time units
};

// Optimizes (delta, ratio, phi_in) for a single input phase.
OptResult optimize_fidelity(const Scenario& sc, double s, double r, double phase, const FidelitySettings& fs = {});

struct FidelityAverage {
    AverageInfidelity per_phase;     // optimize for each phase, then average
    double shared_epsilon = 1.0;     // best single parameter set applied to every phase
    std::vector<OptResult> optima;
};

FidelityAverage average_fidelity_campaign(const Scenario& sc, double s, double r, int n_phases = 8,
                                          const FidelitySettings& fs = {});

// Runs fn(i) for i in [0, n) on up to `jobs` threads.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

// Deterministic uniform draw in [0, 1) from a 64-bit seed and stream index.
double seeded_uniform(std::uint64_t seed, std::uint64_t index);

}  // namespace squeeze
