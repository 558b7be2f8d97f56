#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bks/error.hpp"
#include "bks/matrix.hpp"
#include "test_support.hpp"

namespace {

using bks::Complex;
using bks::ComplexMatrix;
using bks::StateVector;

StateVector unit(std::vector<Complex> raw) { return bks::normalize(raw); }

void expect_code(bks::ErrorCode code, auto&& fn) {
    try {
        fn();
        FAIL() << "expected " << bks::to_string(code);
    } catch (const bks::Error& e) {
        EXPECT_EQ(e.code(), code);
    }
}

TEST(Normalize, ScalesToUnitNorm) {
    const auto v = unit({1, 1, 1});
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(v[i] - 1.0 / std::sqrt(3.0)), 0.0, 1e-15);
    EXPECT_EQ(unit({0, 0, 1}), StateVector({0, 0, 1}));
    EXPECT_EQ(unit({2, 0, 0}), StateVector({1, 0, 0}));
}

TEST(Normalize, RejectsZeroAndNonFinite) {
    expect_code(bks::ErrorCode::ZeroVector, [] { unit({0, 0, 0}); });
    expect_code(bks::ErrorCode::ZeroVector, [] { unit({1e-13, 0}); });
    expect_code(bks::ErrorCode::NonFinite, [] { unit({NAN, 1}); });
    expect_code(bks::ErrorCode::NonFinite, [] { StateVector({INFINITY}); });
}

TEST(StateVector, RequiresUnitNorm) {
    expect_code(bks::ErrorCode::InternalConsistency, [] { StateVector({1, 1}); });
}

TEST(Projector, BasisAndHandComputedEntries) {
    const auto p3 = bks::projector(unit({0, 0, 1}));
    EXPECT_EQ(p3, ComplexMatrix({{0, 0, 0}, {0, 0, 0}, {0, 0, 1}}));

    const auto p = bks::projector(unit({1, 1, 0}));
    const ComplexMatrix expected{{0.5, 0.5, 0}, {0.5, 0.5, 0}, {0, 0, 0}};
    EXPECT_LE(bks::distance(p, expected), 1e-15);

    const auto p1 = bks::projector(unit({1, -1, 1}));
    EXPECT_NEAR(std::abs(bks::trace(p1) - 1.0), 0.0, 1e-15);
    EXPECT_LE(bks::distance(bks::mat_mul(p1, p1), p1), 1e-15);
}

TEST(Projector, HermitianIdempotentForRandomVectors) {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 200; ++t) {
        const std::size_t dim = 1 + rng() % 8;
        const auto p = bks::projector(bks::testing::random_state(rng, dim));
        EXPECT_LE(bks::distance(p, bks::adjoint(p)), 1e-12);
        EXPECT_LE(bks::distance(bks::mat_mul(p, p), p), 1e-12);
        EXPECT_NEAR(bks::trace(p).real(), 1.0, 1e-12);
    }
}

TEST(Tensor, PauliXOnFirstQubit) {
    const ComplexMatrix sx{{0, 1}, {1, 0}};
    const auto t = bks::tensor(sx, ComplexMatrix::identity(2));
    // X on qubit 1 flips the high bit of the row index.
    ComplexMatrix expected(4);
    for (std::size_t r = 0; r < 4; ++r) expected(r, r ^ 2u) = 1.0;
    EXPECT_EQ(t, expected);
}

TEST(Tensor, TraceIsMultiplicative) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 100; ++t) {
        const auto a = bks::testing::random_matrix(rng, 1 + rng() % 4);
        const auto b = bks::testing::random_matrix(rng, 1 + rng() % 4);
        const auto ab = bks::tensor(a, b);
        EXPECT_EQ(ab.dim(), a.dim() * b.dim());
        EXPECT_LE(std::abs(bks::trace(ab) - bks::trace(a) * bks::trace(b)), 1e-10);
    }
}

TEST(Tensor, RejectsOversizedProduct) {
    expect_code(bks::ErrorCode::TooLarge,
                [] { bks::tensor(ComplexMatrix::identity(16), ComplexMatrix::identity(8)); });
}

TEST(MatMul, DimensionMismatch) {
    expect_code(bks::ErrorCode::DimensionMismatch,
                [] { bks::mat_mul(ComplexMatrix::identity(2), ComplexMatrix::identity(3)); });
    expect_code(bks::ErrorCode::DimensionMismatch,
                [] { bks::commutator_norm(ComplexMatrix::identity(2), ComplexMatrix::identity(3)); });
    expect_code(bks::ErrorCode::DimensionMismatch,
                [] { bks::expectation(StateVector({1, 0}), ComplexMatrix::identity(3)); });
}

TEST(MatMul, HardyOrthogonalProjectorsMultiplyToZero) {
    const auto p1 = bks::projector(unit({1, -1, 1}));
    const auto p2 = bks::projector(unit({1, 1, 0}));
    EXPECT_LE(bks::frobenius_norm(bks::mat_mul(p1, p2)), 1e-15);
}

TEST(Commutator, HardyPairs) {
    const auto v1 = unit({1, -1, 1});
    const auto v3 = unit({0, 0, 1});
    const auto p1 = bks::projector(v1);
    const auto p2 = bks::projector(unit({1, 1, 0}));
    const auto p3 = bks::projector(v3);
    EXPECT_LE(bks::commutator_norm(p1, p2), 1e-12);
    // Rank-one projectors: ||[P,Q]||_F = sqrt(2) |c| sqrt(1 - |c|^2), c = <u|v>.
    const double c = std::abs(bks::inner(v1, v3));
    EXPECT_NEAR(c, 1.0 / std::sqrt(3.0), 1e-12);
    const double oracle = std::sqrt(2.0) * c * std::sqrt(1.0 - c * c);
    EXPECT_NEAR(bks::commutator_norm(p1, p3), oracle, 1e-12);
    EXPECT_GT(bks::commutator_norm(p1, p3), 0.1);
    EXPECT_EQ(bks::commutator_norm(p1, p1), 0.0);
}

TEST(Commutator, SymmetricAndZeroOnDiagonals) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int t = 0; t < 100; ++t) {
        const std::size_t dim = 1 + rng() % 6;
        const auto a = bks::testing::random_matrix(rng, dim);
        const auto b = bks::testing::random_matrix(rng, dim);
        EXPECT_NEAR(bks::commutator_norm(a, b), bks::commutator_norm(b, a), 1e-12);
        std::vector<Complex> d1(dim), d2(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            d1[i] = {g(rng), g(rng)};
            d2[i] = {g(rng), g(rng)};
        }
        EXPECT_EQ(bks::commutator_norm(ComplexMatrix::diagonal(d1), ComplexMatrix::diagonal(d2)), 0.0);
    }
}

TEST(Expectation, HardyValues) {
    const auto psi = unit({1, 1, 1});
    EXPECT_NEAR(bks::expectation(psi, bks::projector(unit({1, 1, 0}))).real(), 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(bks::expectation(psi, bks::projector(unit({1, -1, 1}))).real(), 1.0 / 9.0, 1e-12);
    EXPECT_NEAR(bks::expectation(psi, ComplexMatrix::identity(3)).real(), 1.0, 1e-12);
}

TEST(Expectation, WithinSpectrumOfRandomHermitian) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ev(-3.0, 3.0);
    for (int t = 0; t < 200; ++t) {
        const std::size_t dim = 1 + rng() % 8;
        const auto basis = bks::testing::random_basis(rng, dim);
        std::vector<double> spec(dim);
        for (auto& s : spec) s = ev(rng);
        const auto h = bks::testing::spectral(basis, spec);
        EXPECT_TRUE(bks::is_hermitian(h, 1e-12));
        const auto psi = bks::testing::random_state(rng, dim);
        const auto e = bks::expectation(psi, h);
        EXPECT_NEAR(e.imag(), 0.0, 1e-12);
        const auto [lo, hi] = std::minmax_element(spec.begin(), spec.end());
        EXPECT_GE(e.real(), *lo - 1e-12);
        EXPECT_LE(e.real(), *hi + 1e-12);
        const double pe = bks::expectation(psi, bks::projector(basis[0])).real();
        EXPECT_GE(pe, -1e-12);
        EXPECT_LE(pe, 1.0 + 1e-12);
    }
}

TEST(ComplexMatrix, RejectsBadShapes) {
    expect_code(bks::ErrorCode::DimensionMismatch, [] { ComplexMatrix(2, std::vector<Complex>(3)); });
    expect_code(bks::ErrorCode::NonFinite, [] { ComplexMatrix(1, std::vector<Complex>{Complex(NAN, 0)}); });
}

}  // namespace
