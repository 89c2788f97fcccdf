#include "squeeze/gaussian.hpp"

#include <cmath>
#include <numbers>

namespace squeeze {

void validate(const GaussianMoments& g) {
    const Eigen::Matrix2d& c = g.cov;
    if (!c.allFinite() || !g.mean.allFinite()) throw GaussianError("gaussian: non-finite moments");
    if (std::abs(c(0, 1) - c(1, 0)) > 1e-12 * (std::abs(c(0, 0)) + std::abs(c(1, 1)))) {
        throw GaussianError("gaussian: covariance not symmetric");
    }
    if (!(c(0, 0) > 0.0) || !(c(1, 1) > 0.0) || !(c.determinant() > 0.0)) {
        throw GaussianError("gaussian: covariance not positive definite");
    }
    if (c.determinant() < 0.25 - 1e-9) throw GaussianError("gaussian: covariance violates the uncertainty relation");
}

GaussianMoments to_gaussian(const MomentState& s, long long n_atoms) {
    const double jz = s.jz();
    if (!(jz > 0.1 * static_cast<double>(n_atoms) / 2.0)) throw GaussianError("to_gaussian: planar limit violated");
    const SpinCovariance c = spin_covariance(s);
    GaussianMoments g;
    const double rt = std::sqrt(jz);
    g.mean << c.mx / rt, c.my / rt;
    g.cov << c.vxx / jz, c.vxy / jz, c.vxy / jz, c.vyy / jz;
    return g;
}

GaussianMoments ideal_squeeze(const GaussianMoments& g, double s) {
    if (!(s > 0.0)) throw GaussianError("ideal_squeeze: s must be positive");
    const Eigen::Matrix2d S = Eigen::Vector2d(s, 1.0 / s).asDiagonal();
    return {S * g.mean, S * g.cov * S.transpose()};
}

GaussianMoments rotate(const GaussianMoments& g, double phi) {
    Eigen::Matrix2d R;
    R << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
    return {R * g.mean, R * g.cov * R.transpose()};
}

double fidelity(const GaussianMoments& a, const GaussianMoments& b) {
    validate(a);
    validate(b);
    const Eigen::Matrix2d sum = a.cov + b.cov;
    const Eigen::Vector2d d = a.mean - b.mean;
    const double delta = sum.determinant();
    const double lambda = std::max(0.0, (4.0 * a.cov.determinant() - 1.0) * (4.0 * b.cov.determinant() - 1.0) / 4.0);
    const double expo = -0.5 * d.dot(sum.inverse() * d);
    const double f = std::exp(expo) / (std::sqrt(delta + lambda) - std::sqrt(lambda));
    return std::clamp(f, 0.0, 1.0);
}

MomentState displaced_css(long long n_atoms, double r, double phase) {
    const double N = static_cast<double>(n_atoms);
    if (n_atoms < 2) throw GaussianError("displaced_css: n_atoms must be at least 2");
    if (r < 0.0) throw GaussianError("displaced_css: r must be nonnegative");
    if (r * r > N / 4.0) throw GaussianError("displaced_css: displacement outside the planar limit");
    // Polar angle chosen so that <Jx>/sqrt(<Jz>) = r: c^2 + (2 r^2 / N) c - 1 = 0.
    const double q = r * r / N;
    const double c = std::sqrt(q * q + 1.0) - q;
    const double s2 = std::max(0.0, 1.0 - c * c);
    const double pair = N * (N - 1.0) / 4.0;
    MomentState st;
    st.jp = std::polar(N / 2.0 * std::sqrt(s2), phase);
    st.jp2 = std::polar(pair * s2, 2.0 * phase);
    const double jz = N / 2.0 * c;
    st.jpjm = N / 2.0 + pair * s2 + jz;
    st.jmjp = N / 2.0 + pair * s2 - jz;
    st.na = N / 2.0 + jz;
    st.nb = N / 2.0 - jz;
    return st;
}

AverageInfidelity average_infidelity(const std::function<PhaseOutcome(double)>& runner, int n_phases) {
    if (n_phases < 4) throw GaussianError("average_infidelity: need at least 4 phases");
    AverageInfidelity out;
    double acc = 0.0;
    for (int k = 0; k < n_phases; ++k) {
        const double ph = 2.0 * std::numbers::pi * k / n_phases;
        const PhaseOutcome o = runner(ph);
        out.phases.push_back(ph);
        out.per_phase.push_back(o.epsilon);
        out.partial = out.partial || !o.ok;
        acc += o.epsilon;
    }
    out.mean = acc / n_phases;
    return out;
}

}  // namespace squeeze
