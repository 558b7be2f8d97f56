#pragma once

#include <cstddef>

#include "bks/scenario.hpp"

namespace bks {

/// In-plane measurement directions for the two CHSH parties, in radians.
struct AngleSet {
    double a = 0.0;
    double a_prime = 0.0;
    double b = 0.0;
    double b_prime = 0.0;

    /// Each angle reduced to [0, 2pi).
    AngleSet canonical() const;
};

/// <X1Y1> + <X1Y2> + <X2Y1> - <X2Y2> on the singlet, through the quantum
/// engine's correlation on full 4x4 operators.
double chsh_value(const AngleSet& angles);

struct OptimizerOptions {
    double grid_deg = 2.0;
    double min_step = 1e-8;
    /// Pin a' = a, which makes X1 and X2 compatible.
    bool tie_a_prime_to_a = false;
};

struct OptimizationResult {
    AngleSet angles;
    double value = 0.0;  // signed CHSH value at angles
    std::size_t grid_evaluations = 0;
    std::size_t refinement_evaluations = 0;
};

/// Maximizes |S|: grid scan with a fixed at 0 (the singlet is invariant under
/// a common rotation), then coordinate descent until the step drops below
/// min_step. Ties go to the first grid cell in scan order.
OptimizationResult maximize(const OptimizerOptions& options = {});

}  // namespace bks
