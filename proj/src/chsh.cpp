#include "bks/chsh.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "bks/error.hpp"

namespace bks {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const StateVector& singlet() {
    static const StateVector psi = normalize(std::vector<Complex>{0.0, 1.0, -1.0, 0.0});
    return psi;
}

Observable alice(double theta) {
    return Observable::matrix("X", tensor(spin_in_plane(theta), ComplexMatrix::identity(2)));
}
Observable bob(double theta) {
    return Observable::matrix("Y", tensor(ComplexMatrix::identity(2), spin_in_plane(theta)));
}

double wrap(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0) r += kTwoPi;
    return r >= kTwoPi ? 0.0 : r;
}

}  // namespace

AngleSet AngleSet::canonical() const { return {wrap(a), wrap(a_prime), wrap(b), wrap(b_prime)}; }

double chsh_value(const AngleSet& s) {
    const auto& psi = singlet();
    const Observable x1 = alice(s.a), x2 = alice(s.a_prime), y1 = bob(s.b), y2 = bob(s.b_prime);
    return correlation(psi, x1, y1) + correlation(psi, x1, y2) + correlation(psi, x2, y1) - correlation(psi, x2, y2);
}

OptimizationResult maximize(const OptimizerOptions& options) {
    if (!(options.grid_deg > 0.0) || options.grid_deg > 180.0) {
        throw Error(ErrorCode::InvalidEvent, "grid step must lie in (0, 180] degrees");
    }
    const auto cells = static_cast<std::size_t>(std::ceil(360.0 / options.grid_deg));
    const double step = kTwoPi / static_cast<double>(cells);

    // Correlation table corr[i][j] = <X(i) Y(j)>; every grid evaluation of S
    // is a sum of four entries.
    const auto& psi = singlet();
    std::vector<Observable> xs, ys;
    for (std::size_t i = 0; i < cells; ++i) {
        xs.push_back(alice(step * static_cast<double>(i)));
        ys.push_back(bob(step * static_cast<double>(i)));
    }
    std::vector<double> corr(cells * cells);
    for (std::size_t i = 0; i < cells; ++i) {
        for (std::size_t j = 0; j < cells; ++j) corr[i * cells + j] = correlation(psi, xs[i], ys[j]);
    }

    OptimizationResult best;
    double best_mag = -1.0;
    const std::size_t a_primes = options.tie_a_prime_to_a ? 1 : cells;
    for (std::size_t i = 0; i < a_primes; ++i) {
        for (std::size_t j = 0; j < cells; ++j) {
            for (std::size_t k = 0; k < cells; ++k) {
                const double s = corr[j] + corr[k] + corr[i * cells + j] - corr[i * cells + k];
                ++best.grid_evaluations;
                if (std::abs(s) > best_mag) {
                    best_mag = std::abs(s);
                    best.value = s;
                    best.angles = {0.0, step * static_cast<double>(i), step * static_cast<double>(j),
                                   step * static_cast<double>(k)};
                }
            }
        }
    }

    // Coordinate descent on |S| over the free angles.
    AngleSet cur = best.angles;
    double cur_val = chsh_value(cur);
    ++best.refinement_evaluations;
    double h = step;
    for (std::size_t guard = 0; h >= options.min_step && guard < 1000000; ++guard) {
        bool improved = false;
        for (int coord = 0; coord < 3; ++coord) {
            if (coord == 0 && options.tie_a_prime_to_a) continue;
            for (double dir : {1.0, -1.0}) {
                AngleSet trial = cur;
                double& x = coord == 0 ? trial.a_prime : coord == 1 ? trial.b : trial.b_prime;
                x += dir * h;
                const double v = chsh_value(trial);
                ++best.refinement_evaluations;
                if (std::abs(v) > std::abs(cur_val)) {
                    cur = trial;
                    cur_val = v;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) h /= 2.0;
    }
    best.angles = cur.canonical();
    best.value = cur_val;
    if (std::abs(best.value) > 2.0 * std::numbers::sqrt2 + 1e-9) {
        throw Error(ErrorCode::InternalConsistency, "CHSH value above the Tsirelson ceiling");
    }
    return best;
}

}  // namespace bks
