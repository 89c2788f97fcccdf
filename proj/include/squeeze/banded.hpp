// Square complex band matrix, stored by diagonals.
#pragma once

#include <Eigen/Core>
#include <complex>
#include <vector>

namespace squeeze {

class BandedMatrix {
public:
    using cplx = std::complex<double>;

    BandedMatrix() = default;
    // Zero matrix of dimension n holding diagonals -lower..upper.
    BandedMatrix(int n, int lower, int upper);

    static BandedMatrix identity(int n);

    int dim() const { return n_; }
    int lower() const { return kl_; }
    int upper() const { return ku_; }

    // Element (i, i + offset); offset in [-lower, upper].
    cplx& at_diag(int offset, int i) { return diags_[static_cast<std::size_t>(offset + kl_)][static_cast<std::size_t>(i)]; }
    const cplx& at_diag(int offset, int i) const {
        return diags_[static_cast<std::size_t>(offset + kl_)][static_cast<std::size_t>(i)];
    }
    // Element (row, col); zero outside the band.
    cplx operator()(int row, int col) const;

    // Number of valid entries on a diagonal.
    int diag_length(int offset) const { return n_ - (offset < 0 ? -offset : offset); }
    // Row index of the first entry on a diagonal.
    static int diag_row0(int offset) { return offset < 0 ? -offset : 0; }

    BandedMatrix adjoint() const;
    Eigen::MatrixXcd dense() const;

    Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;
    // out += alpha * (this * X)
    void left_multiply_add(const Eigen::MatrixXcd& X, cplx alpha, Eigen::MatrixXcd& out) const;
    // out += alpha * (X * this)
    void right_multiply_add(const Eigen::MatrixXcd& X, cplx alpha, Eigen::MatrixXcd& out) const;

    // tr(this * rho)
    cplx trace_product(const Eigen::MatrixXcd& rho) const;
    // <psi| this |psi>
    cplx expectation(const Eigen::VectorXcd& psi) const;

    BandedMatrix operator*(const BandedMatrix& o) const;
    BandedMatrix operator+(const BandedMatrix& o) const;
    BandedMatrix operator-(const BandedMatrix& o) const;
    BandedMatrix operator*(cplx s) const;
    friend BandedMatrix operator*(cplx s, const BandedMatrix& m) { return m * s; }

    double max_abs_diff(const BandedMatrix& o) const;

private:
    int n_ = 0, kl_ = 0, ku_ = 0;
    // diags_[offset + kl_][i] holds element (i, i + offset); entries outside
    // the matrix are kept at zero.
    std::vector<std::vector<cplx>> diags_;
};

}  // namespace squeeze
