#pragma once

// Line-oriented scenario language (.ksl). One declaration per line, '#'
// starts a comment:
//
//   scenario "hardy" dim 3
//   tolerance 1e-9
//   state psi = [1, 1, 1]
//   proj P1 = [1, -1, 1]
//   pauli B = XXX              # or: pauli B = x1*x2*x3
//   obs X1 = [1, 0, 0, -1]     # Hermitian involution, row-major
//   context (P1, P2)
//   partition P(P1=0,P2=1) + P(P2=0,P3=1) = 1
//   product (A, C, F, I) = 1
//   query P(P1=1,P5=0)
//   query product (B, C, D, E)
//   functional chsh = X1*Y1 + X1*Y2 + X2*Y1 - X2*Y2
//
// Numbers accept 1, -1, 1/2, sqrt(3), 1/sqrt(2), cos(0.785), pi and the
// imaginary unit i, combined with + - * / and parentheses.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bks/scenario.hpp"

namespace bks {

enum class Severity { Error, Warning };

struct ParseDiagnostic {
    Severity severity = Severity::Error;
    std::string message;
    std::size_t line = 1;
    std::size_t column = 1;

    std::string str() const;
};

struct ParseResult {
    std::optional<Scenario> scenario;
    std::vector<ParseDiagnostic> diagnostics;

    bool ok() const noexcept { return scenario.has_value(); }
};

/// Never throws; every problem comes back as a diagnostic.
ParseResult parse_scenario(std::string_view source);

/// Canonical text; parse_scenario(serialize(s)) reproduces s exactly.
std::string serialize(const Scenario& s);

}  // namespace bks
