#pragma once

// Dense complex linear algebra at the small dimensions used by contextuality
// scenarios (d <= 64). Matrices are row-major; the Kronecker product places
// the left factor on the coarse block index, so qubit 1 is the leftmost
// tensor factor.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace bks {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxDim = 64;
inline constexpr double kConstructionTol = 1e-12;
inline constexpr double kDefaultTolerance = 1e-9;

bool is_finite(Complex z);

/// Unit-norm pure state. Construction enforces finiteness and unit norm.
class StateVector {
public:
    explicit StateVector(std::vector<Complex> entries);

    std::size_t dim() const noexcept { return entries_.size(); }
    const Complex& operator[](std::size_t i) const { return entries_[i]; }
    std::span<const Complex> entries() const noexcept { return entries_; }

    friend bool operator==(const StateVector&, const StateVector&) = default;

private:
    std::vector<Complex> entries_;
};

class ComplexMatrix {
public:
    ComplexMatrix() = default;
    /// Zero matrix of the given dimension.
    explicit ComplexMatrix(std::size_t dim);
    /// Row-major entries; entries.size() must equal dim*dim.
    ComplexMatrix(std::size_t dim, std::vector<Complex> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(std::span<const Complex> diag);

    std::size_t dim() const noexcept { return dim_; }
    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }
    std::span<const Complex> entries() const noexcept { return data_; }

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(Complex s);

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(Complex s, ComplexMatrix m);

/// Scales raw to unit norm. Throws ZeroVector when the norm is below 1e-12.
StateVector normalize(std::span<const Complex> raw);

/// Rank-one projector |v><v|.
ComplexMatrix projector(const StateVector& v);

ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix adjoint(const ComplexMatrix& a);
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
Complex trace(const ComplexMatrix& a);

double frobenius_norm(const ComplexMatrix& a);
/// Frobenius distance between two same-size matrices.
double distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// ||AB - BA||_F
double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b);

/// <psi|M|psi>
Complex expectation(const StateVector& psi, const ComplexMatrix& m);

/// <u|v>, conjugate-linear in the first argument.
Complex inner(const StateVector& u, const StateVector& v);

bool is_hermitian(const ComplexMatrix& a, double tol);

}  // namespace bks
