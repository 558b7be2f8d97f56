#pragma once

// Random generators shared by the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bks/matrix.hpp"
#include "bks/pauli.hpp"
#include "bks/quantum.hpp"
#include "bks/scenario.hpp"

namespace bks::testing {

inline std::vector<Complex> random_raw(std::mt19937_64& rng, std::size_t dim) {
    std::normal_distribution<double> g;
    std::vector<Complex> v(dim);
    for (auto& z : v) z = {g(rng), g(rng)};
    return v;
}

inline StateVector random_state(std::mt19937_64& rng, std::size_t dim) { return normalize(random_raw(rng, dim)); }

inline ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t dim) {
    std::normal_distribution<double> g;
    ComplexMatrix m(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) m(r, c) = {g(rng), g(rng)};
    }
    return m;
}

/// Columns form an orthonormal basis (Gram-Schmidt on a Gaussian matrix).
inline std::vector<StateVector> random_basis(std::mt19937_64& rng, std::size_t dim) {
    std::vector<std::vector<Complex>> cols;
    while (cols.size() < dim) {
        auto v = random_raw(rng, dim);
        for (const auto& u : cols) {
            Complex proj{};
            for (std::size_t i = 0; i < dim; ++i) proj += std::conj(u[i]) * v[i];
            for (std::size_t i = 0; i < dim; ++i) v[i] -= proj * u[i];
        }
        double n = 0.0;
        for (const auto& z : v) n += std::norm(z);
        n = std::sqrt(n);
        if (n < 1e-6) continue;
        for (auto& z : v) z /= n;
        cols.push_back(std::move(v));
    }
    std::vector<StateVector> out;
    for (auto& c : cols) out.push_back(normalize(c));
    return out;
}

/// sum_k lambda_k |u_k><u_k|
inline ComplexMatrix spectral(const std::vector<StateVector>& basis, const std::vector<double>& eigenvalues) {
    ComplexMatrix m(basis.front().dim());
    for (std::size_t k = 0; k < basis.size(); ++k) m += Complex(eigenvalues[k]) * projector(basis[k]);
    return m;
}

inline PauliString random_pauli(std::mt19937_64& rng, std::size_t n, bool any_phase = true) {
    std::uniform_int_distribution<int> letter(0, 3), phase(0, 3);
    std::vector<PauliLetter> letters(n);
    for (auto& l : letters) l = static_cast<PauliLetter>(letter(rng));
    return PauliString(Phase(any_phase ? phase(rng) : 0), std::move(letters));
}

/// Random scenario in which every observable commutes with every other: a
/// shared random eigenbasis, rank-one projectors onto basis vectors and +-1
/// involutions with random spectra, a state with some amplitudes zeroed in
/// that basis, and constraints/queries read off the exact joint
/// distribution so the premises hold quantumly.
inline Scenario random_commuting_scenario(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> dim_dist(2, 8);
    const std::size_t dim = dim_dist(rng);
    const auto basis = random_basis(rng, dim);
    Scenario sc("commuting", dim);

    std::vector<Complex> amps(dim);
    std::normal_distribution<double> g;
    std::bernoulli_distribution zero(0.35);
    bool any = false;
    for (auto& a : amps) {
        a = zero(rng) ? Complex{} : Complex{g(rng), g(rng)};
        any = any || a != Complex{};
    }
    if (!any) amps[0] = 1.0;
    std::vector<Complex> raw(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        for (std::size_t i = 0; i < dim; ++i) raw[i] += amps[k] * basis[k][i];
    }
    sc.set_state("psi", raw);

    std::uniform_int_distribution<std::size_t> count_dist(2, 5);
    const std::size_t count = count_dist(rng);
    std::uniform_int_distribution<std::size_t> pick(0, dim - 1);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t k = 0; k < count; ++k) {
        const std::string id = "O" + std::to_string(k + 1);
        if (coin(rng)) {
            const auto& v = basis[pick(rng)];
            sc.add_observable(Observable::projector(id, {v.entries().begin(), v.entries().end()}));
        } else {
            std::vector<double> spec(dim);
            for (auto& s : spec) s = coin(rng) ? 1.0 : -1.0;
            sc.add_observable(Observable::matrix(id, spectral(basis, spec)));
        }
    }
    std::vector<ObservableId> ids;
    for (const auto& o : sc.observables()) ids.push_back(o.id());
    sc.add_context(ids);

    std::vector<const Observable*> obs;
    for (const auto& o : sc.observables()) obs.push_back(&o);
    const auto dist = commuting_classical_model(sc.state(), obs);

    // Partition over all positive-probability outcome pairs of two observables.
    for (int rep = 0; rep < 2; ++rep) {
        std::uniform_int_distribution<std::size_t> oi(0, count - 1);
        const std::size_t i = oi(rng);
        std::size_t j = oi(rng);
        if (j == i) j = (i + 1) % count;
        PartitionUnity pu;
        for (int x : sc.observables()[i].outcomes()) {
            for (int y : sc.observables()[j].outcomes()) {
                Event e({{ids[i], x}, {ids[j], y}});
                if (dist.marginal(e) > 1e-7) pu.events.push_back(std::move(e));
            }
        }
        if (!pu.events.empty()) sc.add_constraint(std::move(pu));
    }
    // Product constraint over +-1 observables whose product is fixed on the
    // distribution's support.
    std::vector<std::size_t> pm;
    for (std::size_t k = 0; k < count; ++k) {
        if (sc.observables()[k].is_plus_minus()) pm.push_back(k);
    }
    if (pm.size() >= 2) {
        std::vector<ObservableId> pids{ids[pm[0]], ids[pm[1]]};
        std::optional<int> fixed;
        bool constant = true;
        for (std::size_t t = 0; t < dist.tuples.size(); ++t) {
            if (dist.probabilities[t] <= 1e-7) continue;
            const int prod = dist.tuples[t][pm[0]] * dist.tuples[t][pm[1]];
            if (fixed && *fixed != prod) constant = false;
            fixed = prod;
        }
        if (constant && fixed) sc.add_constraint(ProductEquals{pids, *fixed});
    }
    // Every pair event as a query.
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = i + 1; j < count; ++j) {
            for (int x : sc.observables()[i].outcomes()) {
                for (int y : sc.observables()[j].outcomes()) sc.add_query(Event({{ids[i], x}, {ids[j], y}}));
            }
        }
    }
    return sc;
}

/// Largest |S| on the singlet over a 0.5 degree grid with a = 0, from the
/// closed form <sigma_a (x) sigma_b> = -cos(a - b) and a cosine table.
inline double chsh_grid_oracle() {
    constexpr int n = 720;
    std::vector<double> c(n);
    for (int k = 0; k < n; ++k) c[static_cast<std::size_t>(k)] = std::cos(k * std::numbers::pi / 360.0);
    auto cs = [&](int d) { return c[static_cast<std::size_t>(((d % n) + n) % n)]; };
    double best = 0.0;
    for (int ap = 0; ap < n; ++ap) {
        for (int b = 0; b < n; ++b) {
            const double fixed = -cs(-b) - cs(ap - b);
            for (int bp = 0; bp < n; ++bp) best = std::max(best, std::abs(fixed - cs(-bp) + cs(ap - bp)));
        }
    }
    return best;
}

}  // namespace bks::testing
