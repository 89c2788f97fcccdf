// Effective ground-state model of an atomic ensemble coupled to a driven cavity.
//
// All rates are in units of the total excited-state decay Gamma, which is
// taken to be gamma_a + gamma_b + gamma_o. Time is measured in 1/Gamma.
#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace squeeze {

using cplx = std::complex<double>;

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PhysicalParams {
    cplx omega1{0.0, 0.0};
    cplx omega2{0.0, 0.0};
    cplx omega3{0.0, 0.0};
    cplx omega4{0.0, 0.0};
    cplx g_a{0.0, 0.0};
    cplx g_b{0.0, 0.0};
    double delta1 = 0.0;
    double delta2 = 0.0;
    double delta = 0.0;
    double gamma_a = 1.0 / 3.0;
    double gamma_b = 1.0 / 3.0;
    double gamma_o = 1.0 / 3.0;
    double kappa = 1.0;
    long long n_atoms = 2;
    double omega_b = 0.0;

    double gamma() const { return gamma_a + gamma_b + gamma_o; }
    double delta3() const { return delta1 + 2.0 * delta; }
    double delta4() const { return delta2 + 2.0 * delta; }
};

// Throws ModelError when the parameter set is not admissible.
void validate(const PhysicalParams& p);

// Coefficients of one set of Lindblad terms. The static set carries the
// lasers Omega1/Omega2, the oscillating set (phase e^{2i delta t} relative to
// the static one) carries Omega3/Omega4. Cross terms between the two sets
// average out, so each set contributes its own dissipator.
struct LindbladSet {
    std::array<cplx, 6> chi{};  // chi1..chi6
    cplx kappa1{0.0, 0.0};       // coefficient of J-
    cplx kappa2{0.0, 0.0};       // coefficient of J+
};

struct EffectiveModel {
    cplx h_plusminus{0.0, 0.0};
    cplx h_plusplus{0.0, 0.0};
    LindbladSet stat;
    LindbladSet osc;
    double kappa_tilde = 0.0;
    double gamma_a = 0.0;
    double gamma_b = 0.0;
    double gamma_o = 0.0;
    long long n_atoms = 0;

    double gamma() const { return gamma_a + gamma_b + gamma_o; }
    const cplx& chi(int i) const { return stat.chi.at(static_cast<std::size_t>(i - 1)); }
};

double modified_cavity_decay(const PhysicalParams& p, double mean_na, double mean_nb);

EffectiveModel build_effective_model(const PhysicalParams& p, double mean_na, double mean_nb);

// Solves the two-axis tuning condition for the four drives. The weak-drive
// cap bounds max |Omega_i| / |Delta_i|.
PhysicalParams tune_two_axis(const PhysicalParams& base, cplx chi, double weak_drive_cap = 1.0 / 50.0);

// Residual of the tuning condition relative to |chi| (absolute if chi = 0).
double tuning_residual(const PhysicalParams& p, cplx chi);

double two_axis_rate(cplx chi, double delta, double kappa_tilde);

struct ValidityReport {
    double threshold = 10.0;
    double cavity_shift_margin = 0.0;  // min |Delta_{1,2}| / (N C Gamma)
    double adiabatic_margin = 0.0;     // 1 / (8 N |chi|^2 |delta| / (4 delta^2 + kappa^2))
    double weak_drive_margin = 0.0;    // (1/50) / max |Omega| / |Delta|
    double max_drive_ratio = 0.0;      // max |Omega| / |Delta|
    bool cavity_shift_ok = true;
    bool adiabatic_ok = true;
    bool weak_drive_ok = true;
    double cooperativity = 0.0;
    double collective_cooperativity = 0.0;
};

ValidityReport validity_report(const PhysicalParams& p, double threshold = 10.0);

// 2x2 coefficient matrix of the quadratic form in (J+, J-) generated by the
// effective Hamiltonian, with the J-J+ ordering folded into J+J-.
// Rows/columns ordered as (J+, J-): H = sum_ij M_ij A_i A_j.
std::array<std::array<cplx, 2>, 2> hamiltonian_quadratic_form(const EffectiveModel& m);

}  // namespace squeeze
