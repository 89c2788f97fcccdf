#include "squeeze/banded.hpp"

#include <algorithm>
#include <stdexcept>

namespace squeeze {

BandedMatrix::BandedMatrix(int n, int lower, int upper)
    : n_(n), kl_(lower), ku_(upper),
      diags_(static_cast<std::size_t>(lower + upper + 1), std::vector<cplx>(static_cast<std::size_t>(n), cplx{})) {
    if (n < 0 || lower < 0 || upper < 0) throw std::invalid_argument("BandedMatrix: negative size");
}

BandedMatrix BandedMatrix::identity(int n) {
    BandedMatrix m(n, 0, 0);
    for (int i = 0; i < n; ++i) m.at_diag(0, i) = 1.0;
    return m;
}

BandedMatrix::cplx BandedMatrix::operator()(int row, int col) const {
    const int off = col - row;
    if (off < -kl_ || off > ku_ || row < 0 || row >= n_ || col < 0 || col >= n_) return {};
    return at_diag(off, row);
}

BandedMatrix BandedMatrix::adjoint() const {
    BandedMatrix r(n_, ku_, kl_);
    for (int off = -kl_; off <= ku_; ++off) {
        for (int i = std::max(0, -off); i < std::min(n_, n_ - off); ++i) r.at_diag(-off, i + off) = std::conj(at_diag(off, i));
    }
    return r;
}

Eigen::MatrixXcd BandedMatrix::dense() const {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(n_, n_);
    for (int off = -kl_; off <= ku_; ++off) {
        for (int i = std::max(0, -off); i < std::min(n_, n_ - off); ++i) d(i, i + off) = at_diag(off, i);
    }
    return d;
}

Eigen::VectorXcd BandedMatrix::apply(const Eigen::VectorXcd& x) const {
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(n_);
    for (int off = -kl_; off <= ku_; ++off) {
        const auto& d = diags_[static_cast<std::size_t>(off + kl_)];
        for (int i = std::max(0, -off); i < std::min(n_, n_ - off); ++i) y[i] += d[static_cast<std::size_t>(i)] * x[i + off];
    }
    return y;
}

void BandedMatrix::left_multiply_add(const Eigen::MatrixXcd& X, cplx alpha, Eigen::MatrixXcd& out) const {
    const int m = static_cast<int>(X.cols());
    for (int off = -kl_; off <= ku_; ++off) {
        const auto& d = diags_[static_cast<std::size_t>(off + kl_)];
        const int i0 = std::max(0, -off), i1 = std::min(n_, n_ - off);
        for (int j = 0; j < m; ++j) {
            const cplx* xc = X.col(j).data();
            cplx* oc = out.col(j).data();
            for (int i = i0; i < i1; ++i) oc[i] += alpha * d[static_cast<std::size_t>(i)] * xc[i + off];
        }
    }
}

void BandedMatrix::right_multiply_add(const Eigen::MatrixXcd& X, cplx alpha, Eigen::MatrixXcd& out) const {
    // (X B)(:, j) = sum_off X(:, j - off) B(j - off, j)
    for (int off = -kl_; off <= ku_; ++off) {
        const auto& d = diags_[static_cast<std::size_t>(off + kl_)];
        for (int r = std::max(0, -off); r < std::min(n_, n_ - off); ++r) {
            const cplx b = alpha * d[static_cast<std::size_t>(r)];
            if (b == cplx{}) continue;
            out.col(r + off) += b * X.col(r);
        }
    }
}

BandedMatrix::cplx BandedMatrix::trace_product(const Eigen::MatrixXcd& rho) const {
    cplx acc{};
    for (int off = -kl_; off <= ku_; ++off) {
        for (int i = std::max(0, -off); i < std::min(n_, n_ - off); ++i) acc += at_diag(off, i) * rho(i + off, i);
    }
    return acc;
}

BandedMatrix::cplx BandedMatrix::expectation(const Eigen::VectorXcd& psi) const {
    return psi.dot(apply(psi));  // Eigen's dot conjugates the first argument
}

BandedMatrix BandedMatrix::operator*(const BandedMatrix& o) const {
    if (n_ != o.n_) throw std::invalid_argument("BandedMatrix: dimension mismatch");
    BandedMatrix r(n_, std::min(kl_ + o.kl_, std::max(0, n_ - 1)), std::min(ku_ + o.ku_, std::max(0, n_ - 1)));
    for (int a = -kl_; a <= ku_; ++a) {
        for (int b = -o.kl_; b <= o.ku_; ++b) {
            const int off = a + b;
            if (off < -r.kl_ || off > r.ku_) continue;
            for (int i = std::max(0, -a); i < std::min(n_, n_ - a); ++i) {
                const int k = i + a;
                if (k + b < 0 || k + b >= n_) continue;
                r.at_diag(off, i) += at_diag(a, i) * o.at_diag(b, k);
            }
        }
    }
    return r;
}

BandedMatrix BandedMatrix::operator+(const BandedMatrix& o) const {
    if (n_ != o.n_) throw std::invalid_argument("BandedMatrix: dimension mismatch");
    BandedMatrix r(n_, std::max(kl_, o.kl_), std::max(ku_, o.ku_));
    for (int off = -kl_; off <= ku_; ++off)
        for (int i = 0; i < n_; ++i) r.at_diag(off, i) += at_diag(off, i);
    for (int off = -o.kl_; off <= o.ku_; ++off)
        for (int i = 0; i < n_; ++i) r.at_diag(off, i) += o.at_diag(off, i);
    return r;
}

BandedMatrix BandedMatrix::operator-(const BandedMatrix& o) const { return *this + o * cplx{-1.0, 0.0}; }

BandedMatrix BandedMatrix::operator*(cplx s) const {
    BandedMatrix r = *this;
    for (auto& d : r.diags_)
        for (auto& v : d) v *= s;
    return r;
}

double BandedMatrix::max_abs_diff(const BandedMatrix& o) const {
    if (n_ != o.n_) throw std::invalid_argument("BandedMatrix: dimension mismatch");
    const int kl = std::max(kl_, o.kl_), ku = std::max(ku_, o.ku_);
    double m = 0.0;
    for (int off = -kl; off <= ku; ++off) {
        for (int i = std::max(0, -off); i < std::min(n_, n_ - off); ++i)
            m = std::max(m, std::abs((*this)(i, i + off) - o(i, i + off)));
    }
    return m;
}

}  // namespace squeeze
