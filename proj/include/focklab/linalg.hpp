#pragma once

#include <complex>
#include <vector>

namespace focklab::linalg {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n) {}

    int n() const { return n_; }
    Complex& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const Complex& at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

private:
    int n_ = 0;
    std::vector<Complex> a_;
};

/// A^H A, using column sparsity (banded columns make this O(n * band^2)).
Matrix gram(const Matrix& a);

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations,
/// ascending. Throws Error("EigenFailure") if the off-diagonal norm has not
/// converged after the sweep budget.
std::vector<double> hermitian_eigenvalues(Matrix a, int max_sweeps = 60);

/// Singular values by one-sided Jacobi on the columns, descending.
std::vector<double> singular_values(Matrix a, int max_sweeps = 60);

} // namespace focklab::linalg
