// Exact reference solvers on the symmetric J = N/2 ladder and on the full
// product space of a few atoms.
//
// Ladder index k = m + N/2, so k = N is the state with every atom in |a>.
#pragma once

#include <Eigen/Core>
#include <functional>
#include <utility>
#include <vector>

#include "squeeze/banded.hpp"
#include "squeeze/model.hpp"
#include "squeeze/moments.hpp"
#include "squeeze/ode.hpp"

namespace squeeze {

class DickeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DickeState {
    long long n_atoms = 0;
    Eigen::VectorXcd amps;

    static DickeState basis(long long n_atoms, long long k);
    static DickeState all_a(long long n_atoms) { return basis(n_atoms, n_atoms); }
};

struct DickeDensity {
    long long n_atoms = 0;
    Eigen::MatrixXcd rho;

    static DickeDensity from_pure(const DickeState& psi);
    static DickeDensity maximally_mixed(long long n_atoms);
};

// Collective operators on the ladder.
BandedMatrix ladder_jp(long long n_atoms);
BandedMatrix ladder_jm(long long n_atoms);
BandedMatrix ladder_jz(long long n_atoms);
BandedMatrix ladder_jx(long long n_atoms);
BandedMatrix ladder_jy(long long n_atoms);

// c_plus J+ + c_minus J- + c_x Jx + c_y Jy + c_z Jz
BandedMatrix collective_operator(long long n_atoms, cplx c_plus, cplx c_minus, cplx c_x = 0.0, cplx c_y = 0.0,
                                 cplx c_z = 0.0);

enum class TwistKind { one_axis, two_axis };

// alpha J_theta^2 (one axis) or alpha (J_theta^2 - J_{theta+pi/2}^2) (two axis).
BandedMatrix build_hamiltonian(TwistKind kind, double alpha, double theta, long long n_atoms);

// Effective Hamiltonian -1/2 (H+- J+J- + H++ J+^2 + h.c.) on the ladder.
BandedMatrix effective_hamiltonian(const EffectiveModel& m);

// Cavity Lindblads kappa1 J- + kappa2 J+ for the static and oscillating sets.
std::vector<BandedMatrix> cavity_lindblads(const EffectiveModel& m);

// sqrt(gamma_c)(Jx cos t + Jy sin t), sqrt(gamma_c)(-Jx sin t + Jy cos t)
std::pair<BandedMatrix, BandedMatrix> appendix_c_pair(double gamma_c, double theta, long long n_atoms);

// Exact <J+>, <J+^2>, <J+J->, <J-J+>, Na, Nb.
MomentState expectations(const DickeState& psi);
MomentState expectations(const DickeDensity& rho);

// L rho L^dag - 1/2 {L^dag L, rho}
Eigen::MatrixXcd dissipator(const BandedMatrix& L, const Eigen::MatrixXcd& rho);

// Full Lindblad generator -i[H, rho] + sum_k D[L_k] rho.
Eigen::MatrixXcd lindblad_rhs(const BandedMatrix& H, const std::vector<BandedMatrix>& lindblads,
                              const Eigen::MatrixXcd& rho);

struct SampleOptions {
    OdeOptions ode{1e-10, 1e-12};
    std::vector<double> sample_times{};  // moments recorded at these times
};

struct PureRun {
    DickeState final_state;
    std::vector<double> times;
    std::vector<MomentState> moments;
    OdeReport ode{};
    double max_norm_drift = 0.0;
};

PureRun evolve_pure(const DickeState& psi0, const BandedMatrix& hamiltonian, double t, const SampleOptions& opt = {});

struct MasterRun {
    DickeDensity final_state;
    std::vector<double> times;
    std::vector<MomentState> moments;
    OdeReport ode{};
    double min_eigenvalue = 0.0;  // smallest eigenvalue over samples
    double max_trace_error = 0.0;
    double max_hermiticity_error = 0.0;
};

// Throws DickeError when positivity is violated beyond 1e-8 at a sample.
MasterRun evolve_master_collective(const DickeDensity& rho0, const BandedMatrix& hamiltonian,
                                   const std::vector<BandedMatrix>& lindblads, double t,
                                   const SampleOptions& opt = {});

// Minimum of xi^2 for pure evolution from all-a, refined on the dense output.
struct PureMinimum {
    double xi2 = 1.0;
    double t = 0.0;
};
PureMinimum minimize_pure_xi2(const BandedMatrix& hamiltonian, long long n_atoms, double t_max,
                              const OdeOptions& ode = {1e-10, 1e-12});

// Product-space oracle for N <= 5 atoms with gamma_o = 0. Each atom carries
// its own effective emission operators; kappa_tilde is frozen at the all-a
// populations.
struct ProductRun {
    long long n_atoms = 0;
    Eigen::MatrixXcd rho;
    std::vector<double> times;
    std::vector<MomentState> moments;
    OdeReport ode{};
};

ProductRun evolve_master_product(const PhysicalParams& params, double t, const SampleOptions& opt = {});

// Collective J+ on the 2^N product space (bit k set = atom k in |a>).
Eigen::MatrixXcd product_jp(long long n_atoms);
MomentState product_expectations(const Eigen::MatrixXcd& rho, long long n_atoms);
// Density matrix of the state with every atom in |a>.
Eigen::MatrixXcd product_all_a(long long n_atoms);
// Permutation matrix exchanging atoms i and j.
Eigen::MatrixXcd product_swap(long long n_atoms, int i, int j);

}  // namespace squeeze
