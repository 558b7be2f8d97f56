#pragma once

// Exact n-qubit Pauli words. The phase lives in the cyclic group {1, i, -1, -i}
// so operator identities such as XXX*YYX*YXY*XYY = -III are decided
// symbolically rather than up to floating-point tolerance.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bks/matrix.hpp"

namespace bks {

enum class PauliLetter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/// Power of i: 0 -> +1, 1 -> +i, 2 -> -1, 3 -> -i.
class Phase {
public:
    constexpr Phase() = default;
    constexpr explicit Phase(int power) : power_(static_cast<std::uint8_t>(((power % 4) + 4) % 4)) {}

    static constexpr Phase plus_one() { return Phase(0); }
    static constexpr Phase minus_one() { return Phase(2); }

    constexpr int power() const noexcept { return power_; }
    constexpr bool is_real() const noexcept { return power_ % 2 == 0; }
    /// +1 or -1; only meaningful when is_real().
    constexpr int sign() const noexcept { return power_ == 0 ? 1 : -1; }
    Complex value() const;

    constexpr Phase operator*(Phase rhs) const { return Phase(power_ + rhs.power_); }
    friend constexpr bool operator==(Phase, Phase) = default;

private:
    std::uint8_t power_ = 0;
};

inline constexpr std::size_t kMaxPauliQubits = 6;

class PauliString {
public:
    PauliString() = default;
    PauliString(Phase phase, std::vector<PauliLetter> letters);

    /// Identity word on n qubits.
    static PauliString identity(std::size_t n);

    /// Parses "XXX", "-YYX", "+IZ", "iXY", "-iZ". Throws InvalidObservable.
    static PauliString parse(std::string_view text);

    std::size_t size() const noexcept { return letters_.size(); }
    Phase phase() const noexcept { return phase_; }
    const std::vector<PauliLetter>& letters() const noexcept { return letters_; }
    PauliLetter operator[](std::size_t q) const { return letters_[q]; }

    bool is_identity_word() const;
    bool is_hermitian() const { return phase_.is_real(); }

    /// Canonical text: sign prefix only when the phase is not +1.
    std::string str() const;

    friend bool operator==(const PauliString&, const PauliString&) = default;

private:
    Phase phase_;
    std::vector<PauliLetter> letters_;
};

PauliString pauli_product(const PauliString& p, const PauliString& q);
bool pauli_commutes(const PauliString& p, const PauliString& q);
/// 2^n x 2^n matrix, qubit 1 leftmost. Throws TooLarge beyond six qubits.
ComplexMatrix to_matrix(const PauliString& p);

char to_char(PauliLetter l);
ComplexMatrix single_qubit_matrix(PauliLetter l);

}  // namespace bks
