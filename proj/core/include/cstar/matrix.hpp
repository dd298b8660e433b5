#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cstar {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major. Small sizes only (n <= ~64); everything
/// is stored by value and operations return fresh matrices.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}
    /// Validating constructor: checks the length and that every entry is
    /// finite. Intended for data arriving from outside the library.
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const Complex> diag);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    const std::vector<Complex>& entries() const { return entries_; }

    ComplexMatrix adjoint() const;
    Complex trace() const;
    double frobenius_norm() const;
    /// True when every entry is exactly zero.
    bool is_zero() const;

    std::vector<Complex> column(std::size_t j) const;
    void set_column(std::size_t j, std::span<const Complex> v);

    friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator*(Complex s, const ComplexMatrix& a);
    friend ComplexMatrix operator*(double s, const ComplexMatrix& a);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

/// (M + M*)/2. Exactly Hermitian entrywise.
ComplexMatrix hermitian_part(const ComplexMatrix& m);

/// A* A, computed so the result is Hermitian to the last bit.
ComplexMatrix gram(const ComplexMatrix& a);

/// Inner product, antilinear in the first argument.
Complex vdot(std::span<const Complex> x, std::span<const Complex> y);

double vec_norm(std::span<const Complex> x);

std::vector<Complex> mat_vec(const ComplexMatrix& a, std::span<const Complex> x);

/// Rank-one u v*.
ComplexMatrix outer(std::span<const Complex> u, std::span<const Complex> v);

} // namespace cstar
