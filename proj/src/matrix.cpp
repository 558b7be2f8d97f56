#include "bks/matrix.hpp"

#include <cmath>
#include <string>

#include "bks/error.hpp"

namespace bks {

namespace {

void require_dim(std::size_t dim) {
    if (dim == 0) {
        throw Error(ErrorCode::DimensionMismatch, "dimension must be positive");
    }
    if (dim > kMaxDim) {
        throw Error(ErrorCode::TooLarge,
                    "dimension " + std::to_string(dim) + " exceeds " + std::to_string(kMaxDim));
    }
}

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.dim() != b.dim()) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(op) + ": " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
    }
}

}  // namespace

bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

StateVector::StateVector(std::vector<Complex> entries) : entries_(std::move(entries)) {
    require_dim(entries_.size());
    double norm2 = 0.0;
    for (const auto& z : entries_) {
        if (!is_finite(z)) throw Error(ErrorCode::NonFinite, "state vector has a non-finite entry");
        norm2 += std::norm(z);
    }
    if (std::abs(std::sqrt(norm2) - 1.0) > kConstructionTol) {
        throw Error(ErrorCode::InternalConsistency, "state vector is not normalized");
    }
}

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) { require_dim(dim); }

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), data_(std::move(entries)) {
    require_dim(dim);
    if (data_.size() != dim * dim) {
        throw Error(ErrorCode::DimensionMismatch,
                    "matrix of dimension " + std::to_string(dim) + " needs " + std::to_string(dim * dim) +
                        " entries, got " + std::to_string(data_.size()));
    }
    for (const auto& z : data_) {
        if (!is_finite(z)) throw Error(ErrorCode::NonFinite, "matrix has a non-finite entry");
    }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    dim_ = rows.size();
    require_dim(dim_);
    data_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
        if (row.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "matrix literal is not square");
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
    ComplexMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    require_same_dim(*this, rhs, "add");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    require_same_dim(*this, rhs, "subtract");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (auto& z : data_) z *= s;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
ComplexMatrix operator*(Complex s, ComplexMatrix m) { return m *= s; }

StateVector normalize(std::span<const Complex> raw) {
    require_dim(raw.size());
    double norm2 = 0.0;
    for (const auto& z : raw) {
        if (!is_finite(z)) throw Error(ErrorCode::NonFinite, "vector has a non-finite entry");
        norm2 += std::norm(z);
    }
    const double norm = std::sqrt(norm2);
    if (norm < kConstructionTol) throw Error(ErrorCode::ZeroVector, "cannot normalize the zero vector");
    std::vector<Complex> out(raw.begin(), raw.end());
    for (auto& z : out) z /= norm;
    return StateVector(std::move(out));
}

ComplexMatrix projector(const StateVector& v) {
    const std::size_t d = v.dim();
    ComplexMatrix m(d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) m(r, c) = v[r] * std::conj(v[c]);
    }
    return m;
}

ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "mat_mul");
    const std::size_t d = a.dim();
    ComplexMatrix out(d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t k = 0; k < d; ++k) {
            const Complex ark = a(r, k);
            if (ark == Complex{}) continue;
            for (std::size_t c = 0; c < d; ++c) out(r, c) += ark * b(k, c);
        }
    }
    return out;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
    const std::size_t d = a.dim();
    ComplexMatrix out(d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) out(c, r) = std::conj(a(r, c));
    }
    return out;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t da = a.dim();
    const std::size_t db = b.dim();
    ComplexMatrix out(da * db);
    for (std::size_t ra = 0; ra < da; ++ra) {
        for (std::size_t ca = 0; ca < da; ++ca) {
            const Complex s = a(ra, ca);
            for (std::size_t rb = 0; rb < db; ++rb) {
                for (std::size_t cb = 0; cb < db; ++cb) out(ra * db + rb, ca * db + cb) = s * b(rb, cb);
            }
        }
    }
    return out;
}

Complex trace(const ComplexMatrix& a) {
    Complex t{};
    for (std::size_t i = 0; i < a.dim(); ++i) t += a(i, i);
    return t;
}

double frobenius_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (const auto& z : a.entries()) s += std::norm(z);
    return std::sqrt(s);
}

double distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "distance");
    double s = 0.0;
    for (std::size_t i = 0; i < a.entries().size(); ++i) s += std::norm(a.entries()[i] - b.entries()[i]);
    return std::sqrt(s);
}

double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "commutator_norm");
    return distance(mat_mul(a, b), mat_mul(b, a));
}

Complex expectation(const StateVector& psi, const ComplexMatrix& m) {
    if (psi.dim() != m.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "expectation: state dimension " + std::to_string(psi.dim()) +
                                                      " vs operator dimension " + std::to_string(m.dim()));
    }
    Complex acc{};
    for (std::size_t r = 0; r < m.dim(); ++r) {
        Complex row{};
        for (std::size_t c = 0; c < m.dim(); ++c) row += m(r, c) * psi[c];
        acc += std::conj(psi[r]) * row;
    }
    return acc;
}

Complex inner(const StateVector& u, const StateVector& v) {
    if (u.dim() != v.dim()) throw Error(ErrorCode::DimensionMismatch, "inner product dimension mismatch");
    Complex acc{};
    for (std::size_t i = 0; i < u.dim(); ++i) acc += std::conj(u[i]) * v[i];
    return acc;
}

bool is_hermitian(const ComplexMatrix& a, double tol) { return distance(a, adjoint(a)) <= tol; }

}  // namespace bks
