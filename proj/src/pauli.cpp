#include "bks/pauli.hpp"

#include <cctype>

#include "bks/error.hpp"

namespace bks {

namespace {

// Single-site product table: a*b = i^phase[a][b] * letter[a][b].
constexpr PauliLetter kProductLetter[4][4] = {
    {PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z},
    {PauliLetter::X, PauliLetter::I, PauliLetter::Z, PauliLetter::Y},
    {PauliLetter::Y, PauliLetter::Z, PauliLetter::I, PauliLetter::X},
    {PauliLetter::Z, PauliLetter::Y, PauliLetter::X, PauliLetter::I},
};
// XY = iZ, YZ = iX, ZX = iY and the reversed orders pick up -i.
constexpr int kProductPhase[4][4] = {
    {0, 0, 0, 0},
    {0, 0, 1, 3},
    {0, 3, 0, 1},
    {0, 1, 3, 0},
};

void require_same_size(const PauliString& p, const PauliString& q) {
    if (p.size() != q.size()) {
        throw Error(ErrorCode::SizeMismatch,
                    "Pauli strings of " + std::to_string(p.size()) + " and " + std::to_string(q.size()) + " qubits");
    }
}

}  // namespace

Complex Phase::value() const {
    switch (power_) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

PauliString::PauliString(Phase phase, std::vector<PauliLetter> letters)
    : phase_(phase), letters_(std::move(letters)) {}

PauliString PauliString::identity(std::size_t n) { return PauliString(Phase{}, std::vector<PauliLetter>(n)); }

PauliString PauliString::parse(std::string_view text) {
    int power = 0;
    std::size_t pos = 0;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        if (text[pos] == '-') power += 2;
        ++pos;
    }
    if (pos < text.size() && text[pos] == 'i') {
        power += 1;
        ++pos;
    }
    std::vector<PauliLetter> letters;
    for (; pos < text.size(); ++pos) {
        switch (std::toupper(static_cast<unsigned char>(text[pos]))) {
            case 'I': letters.push_back(PauliLetter::I); break;
            case 'X': letters.push_back(PauliLetter::X); break;
            case 'Y': letters.push_back(PauliLetter::Y); break;
            case 'Z': letters.push_back(PauliLetter::Z); break;
            default:
                throw Error(ErrorCode::InvalidObservable,
                            "invalid Pauli letter '" + std::string(1, text[pos]) + "' in \"" + std::string(text) + "\"");
        }
    }
    if (letters.empty()) throw Error(ErrorCode::InvalidObservable, "empty Pauli word");
    return PauliString(Phase(power), std::move(letters));
}

bool PauliString::is_identity_word() const {
    for (auto l : letters_) {
        if (l != PauliLetter::I) return false;
    }
    return true;
}

std::string PauliString::str() const {
    std::string out;
    switch (phase_.power()) {
        case 1: out = "i"; break;
        case 2: out = "-"; break;
        case 3: out = "-i"; break;
        default: break;
    }
    for (auto l : letters_) out.push_back(to_char(l));
    return out;
}

PauliString pauli_product(const PauliString& p, const PauliString& q) {
    require_same_size(p, q);
    int power = p.phase().power() + q.phase().power();
    std::vector<PauliLetter> letters(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
        const auto a = static_cast<int>(p[k]);
        const auto b = static_cast<int>(q[k]);
        letters[k] = kProductLetter[a][b];
        power += kProductPhase[a][b];
    }
    return PauliString(Phase(power), std::move(letters));
}

bool pauli_commutes(const PauliString& p, const PauliString& q) {
    require_same_size(p, q);
    std::size_t anticommuting = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] != PauliLetter::I && q[k] != PauliLetter::I && p[k] != q[k]) ++anticommuting;
    }
    return anticommuting % 2 == 0;
}

char to_char(PauliLetter l) { return "IXYZ"[static_cast<int>(l)]; }

ComplexMatrix single_qubit_matrix(PauliLetter l) {
    const Complex i{0.0, 1.0};
    switch (l) {
        case PauliLetter::X: return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}};
        case PauliLetter::Y: return ComplexMatrix{{0.0, -i}, {i, 0.0}};
        case PauliLetter::Z: return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}};
        default: return ComplexMatrix::identity(2);
    }
}

ComplexMatrix to_matrix(const PauliString& p) {
    if (p.size() == 0) throw Error(ErrorCode::SizeMismatch, "empty Pauli string");
    if (p.size() > kMaxPauliQubits) {
        throw Error(ErrorCode::TooLarge, "Pauli string on " + std::to_string(p.size()) + " qubits exceeds " +
                                             std::to_string(kMaxPauliQubits));
    }
    ComplexMatrix m = single_qubit_matrix(p[0]);
    for (std::size_t k = 1; k < p.size(); ++k) m = tensor(m, single_qubit_matrix(p[k]));
    return p.phase().value() * std::move(m);
}

}  // namespace bks
