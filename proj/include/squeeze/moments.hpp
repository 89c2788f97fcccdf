// Linearized second-moment dynamics of the collective spin and the
// squeezing parameter evaluated on them.
#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "squeeze/model.hpp"
#include "squeeze/ode.hpp"

namespace squeeze {

struct MomentState {
    cplx jp{0.0, 0.0};   // <J+>
    cplx jp2{0.0, 0.0};  // <J+^2>
    double jpjm = 0.0;   // <J+ J->
    double jmjp = 0.0;   // <J- J+>
    double na = 0.0;
    double nb = 0.0;

    double jz() const { return 0.5 * (na - nb); }
    cplx jm() const { return std::conj(jp); }
    cplx jm2() const { return std::conj(jp2); }
    double commutator_residual() const { return jpjm - jmjp - 2.0 * jz(); }
};

using MomentVector = Eigen::Matrix<double, 8, 1>;

MomentVector pack(const MomentState& s);
MomentState unpack(const MomentVector& v);

MomentState initial_css(long long n_atoms);

// Right-hand side of the linearized equations, same layout as MomentState.
MomentState rhs(const MomentState& state, const EffectiveModel& model);

class MomentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Covariances of (Jx, Jy) with the symmetrized cross term.
struct SpinCovariance {
    double vxx = 0.0;
    double vyy = 0.0;
    double vxy = 0.0;
    double mx = 0.0;
    double my = 0.0;
};

SpinCovariance spin_covariance(const MomentState& s);

// N * V_min / <Jz>^2; throws MomentError when <Jz> <= 0.
double squeezing_parameter(const MomentState& s, long long n_atoms);

// Angle of the minimum-variance axis in (-pi/2, pi/2].
double min_variance_angle(const MomentState& s);

// Rotates the moments about z: J+ -> e^{i phi} J+.
MomentState rotate_z(const MomentState& s, double phi);

enum class KappaMode { instantaneous, frozen };

struct IntegrateOptions {
    OdeOptions ode{};
    std::size_t samples = 201;            // uniform samples on [0, t_final], including both ends
    std::vector<double> sample_times{};   // overrides `samples` when nonempty
    KappaMode kappa_mode = KappaMode::instantaneous;
    bool detect_breakdown = true;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<MomentState> states;
    std::vector<double> xi2;
    std::vector<double> theta_star;
    bool breakdown = false;
    std::string breakdown_reason;
    OdeReport ode{};
    double max_commutator_drift = 0.0;  // max |residual(t) - residual(0)| over accepted steps
};

// Integrates with kappa_tilde frozen inside the supplied model.
Trajectory integrate(const MomentState& state0, const EffectiveModel& model, double t_final,
                     const IntegrateOptions& opt = {});

// Integrates with the model rebuilt from params; kappa_tilde follows
// opt.kappa_mode.
Trajectory integrate(const MomentState& state0, const PhysicalParams& params, double t_final,
                     const IntegrateOptions& opt = {});

// Low-level driver: calls `step` for every accepted step. Returning false
// from `step` stops the integration. Breakdown checks are applied first.
struct StepContext {
    const DenseStep<MomentVector>* dense = nullptr;
    MomentState state;  // state at dense->t1
};

struct DriveResult {
    OdeReport ode{};
    bool breakdown = false;
    std::string breakdown_reason;
    double max_commutator_drift = 0.0;
};

using ModelProvider = std::function<const EffectiveModel&(const MomentState&)>;

DriveResult drive(const MomentState& state0, const ModelProvider& model, double t_final,
                  const OdeOptions& ode, bool detect_breakdown,
                  const std::function<bool(const StepContext&)>& step);

// Returns a provider that rebuilds the model when needed.
ModelProvider make_provider(const PhysicalParams& params, KappaMode mode, const MomentState& state0);

// Reason string when the linearization has broken down, empty otherwise.
std::string breakdown_check(const MomentState& s, long long n_atoms);

struct XiMinimum {
    double xi2 = 1.0;
    double t = 0.0;
    MomentState state{};
    bool breakdown = false;
    OdeStatus status = OdeStatus::success;
};

// Minimum of xi^2 over [0, t_final], refined on the dense output.
XiMinimum minimize_xi2(const MomentState& state0, const ModelProvider& model, double t_final,
                       const OdeOptions& ode = {});

}  // namespace squeeze
