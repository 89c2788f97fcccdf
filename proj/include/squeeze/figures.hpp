// Figure reproduction: each run writes CSV data plus manifest.json into an
// output directory.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "squeeze/campaign.hpp"
#include "squeeze/dicke.hpp"

namespace squeeze {

class FigureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Scale { desk, paper };
Scale scale_from_string(const std::string& s);
const char* to_string(Scale s);

struct FigureOptions {
    std::string out_dir = ".";
    Scale scale = Scale::desk;
    std::uint64_t seed = 1;
    int jobs = 1;
};

const std::vector<std::string>& figure_names();
bool is_figure_name(const std::string& name);

// Throws FigureError for an unknown name. Returns the manifest it wrote.
nlohmann::json run_figure(const std::string& name, const FigureOptions& opt);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Ideal twisting Hamiltonian written as an effective model with every
// dissipative channel off: alpha Jx^2 (one axis) or
// alpha (J_{-pi/4}^2 - J_{pi/4}^2) (two axis). The one-axis form drops a
// uniform rotation -alpha Jz / 2, which leaves xi^2 unchanged.
EffectiveModel ideal_twist_model(TwistKind kind, double alpha, long long n_atoms);

struct TwistCurves {
    std::vector<double> times;
    std::vector<double> direct;      // exact ladder evolution
    std::vector<double> linearized;  // moment equations
};
TwistCurves twist_curves(TwistKind kind, double alpha, long long n_atoms, double t_final, std::size_t samples);

// One fig2 point: optimized xi^2 for a scheme at collective cooperativity nc.
OptResult fig2_point(Scheme scheme, double nc, std::uint64_t seed, int jobs);

// Time scaled by 2 Gamma (Omega/Delta)^2 at the preset drive cap.
double scaled_time(const Preset& preset, double t);

struct Fig3Point {
    Scheme scheme = Scheme::one_axis;
    double log10_s = 0.0;
    double r = 0.0;
    FidelityAverage average;
};
Fig3Point fig3_point(Scheme scheme, double nc, double log10_s, double r, std::uint64_t seed, int jobs,
                     int n_phases = 8);

}  // namespace squeeze
