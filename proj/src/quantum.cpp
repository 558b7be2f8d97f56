#include "bks/quantum.hpp"

#include <algorithm>
#include <cmath>

#include "bks/error.hpp"

namespace bks {

namespace {

constexpr double kObservableTol = 1e-10;
constexpr double kProbabilitySlack = 1e-8;

}  // namespace

Observable::Observable(ObservableId id, std::variant<ProjectorSpec, PauliString, ComplexMatrix> spec,
                       ComplexMatrix op)
    : id_(std::move(id)), spec_(std::move(spec)), op_(std::move(op)) {}

Observable Observable::projector(ObservableId id, std::vector<Complex> raw) {
    StateVector v = normalize(raw);
    ComplexMatrix op = bks::projector(v);
    return Observable(std::move(id), ProjectorSpec{std::move(raw), std::move(v)}, std::move(op));
}

Observable Observable::pauli(ObservableId id, PauliString word) {
    if (!word.is_hermitian()) {
        throw Error(ErrorCode::InvalidObservable,
                    "Pauli observable '" + id + "' needs phase +1 or -1, got " + word.str());
    }
    ComplexMatrix op = to_matrix(word);
    return Observable(std::move(id), std::move(word), std::move(op));
}

Observable Observable::matrix(ObservableId id, ComplexMatrix m) {
    if (!is_hermitian(m, kObservableTol)) {
        throw Error(ErrorCode::InvalidObservable, "observable '" + id + "' is not Hermitian");
    }
    if (distance(mat_mul(m, m), ComplexMatrix::identity(m.dim())) > kObservableTol) {
        throw Error(ErrorCode::InvalidObservable, "observable '" + id + "' does not square to the identity");
    }
    ComplexMatrix op = m;
    return Observable(std::move(id), std::move(m), std::move(op));
}

ObservableKind Observable::kind() const noexcept {
    switch (spec_.index()) {
        case 0: return ObservableKind::Projector;
        case 1: return ObservableKind::Pauli;
        default: return ObservableKind::Matrix;
    }
}

std::array<int, 2> Observable::outcomes() const noexcept {
    if (kind() == ObservableKind::Projector) return {0, 1};
    return {-1, 1};
}

bool Observable::has_outcome(int value) const noexcept {
    const auto o = outcomes();
    return value == o[0] || value == o[1];
}

void ObservableRegistry::add(Observable obs) {
    if (index_.count(obs.id())) {
        throw Error(ErrorCode::InvalidObservable, "duplicate observable '" + obs.id() + "'");
    }
    if (dim_ == 0) dim_ = obs.dim();
    if (obs.dim() != dim_) {
        throw Error(ErrorCode::DimensionMismatch, "observable '" + obs.id() + "' has dimension " +
                                                      std::to_string(obs.dim()) + ", expected " +
                                                      std::to_string(dim_));
    }
    index_.emplace(obs.id(), items_.size());
    items_.push_back(std::move(obs));
}

const Observable& ObservableRegistry::at(const ObservableId& id) const { return items_[index_of(id)]; }

std::size_t ObservableRegistry::index_of(const ObservableId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw Error(ErrorCode::UnknownObservable, "unknown observable '" + id + "'");
    return it->second;
}

Context Context::make(const ObservableRegistry& reg, std::vector<ObservableId> members, double tol) {
    if (members.empty()) throw Error(ErrorCode::InvalidContext, "context must have at least one member");
    for (std::size_t i = 0; i < members.size(); ++i) {
        reg.index_of(members[i]);
        for (std::size_t j = 0; j < i; ++j) {
            if (members[i] == members[j]) {
                throw Error(ErrorCode::InvalidContext, "observable '" + members[i] + "' listed twice in context");
            }
        }
    }
    const auto bad = incompatible_pairs(reg, members, tol);
    if (!bad.empty()) {
        throw Error(ErrorCode::InvalidContext, "context not mutually compatible: " + bad.front().first + " and " +
                                                   bad.front().second + " do not commute");
    }
    return Context(std::move(members));
}

std::string Context::str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (i) s += ",";
        s += members_[i];
    }
    return s + ")";
}

ComplexMatrix outcome_projector(const Observable& obs, int outcome) {
    if (!obs.has_outcome(outcome)) {
        throw Error(ErrorCode::BadOutcome,
                    "outcome " + std::to_string(outcome) + " is not a possible result of '" + obs.id() + "'");
    }
    const auto id = ComplexMatrix::identity(obs.dim());
    if (obs.kind() == ObservableKind::Projector) return outcome == 1 ? obs.op() : id - obs.op();
    ComplexMatrix m = outcome == 1 ? id + obs.op() : id - obs.op();
    m *= 0.5;
    return m;
}

bool compatible(const Observable& a, const Observable& b, double tol) {
    if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "compatibility of different dimensions");
    if (const auto* pa = a.pauli_string()) {
        if (const auto* pb = b.pauli_string()) return pauli_commutes(*pa, *pb);
    }
    return commutator_norm(a.op(), b.op()) <= tol;
}

std::vector<std::pair<ObservableId, ObservableId>> incompatible_pairs(const ObservableRegistry& reg,
                                                                       std::span<const ObservableId> ids, double tol) {
    std::vector<std::pair<ObservableId, ObservableId>> out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            if (!compatible(reg.at(ids[i]), reg.at(ids[j]), tol)) out.emplace_back(ids[i], ids[j]);
        }
    }
    return out;
}

bool mutually_compatible(const ObservableRegistry& reg, std::span<const ObservableId> ids, double tol) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            if (!compatible(reg.at(ids[i]), reg.at(ids[j]), tol)) return false;
        }
    }
    return true;
}

void validate_event(const ObservableRegistry& reg, const Event& event) {
    for (const auto& e : event.entries()) {
        const auto& obs = reg.at(e.id);
        if (!obs.has_outcome(e.value)) {
            throw Error(ErrorCode::BadOutcome,
                        "outcome " + std::to_string(e.value) + " is not a possible result of '" + e.id + "'");
        }
    }
}

double clamp_probability(double raw) {
    if (!(raw >= -kProbabilitySlack && raw <= 1.0 + kProbabilitySlack)) {
        throw Error(ErrorCode::InternalConsistency, "probability " + std::to_string(raw) + " outside [0, 1]");
    }
    return std::clamp(raw, 0.0, 1.0);
}

double joint_probability(const StateVector& psi, const Event& event, const ObservableRegistry& reg, double tol) {
    validate_event(reg, event);
    if (psi.dim() != reg.dim()) throw Error(ErrorCode::DimensionMismatch, "state and observables differ in dimension");
    const auto ids = event.ids();
    const auto bad = incompatible_pairs(reg, ids, tol);
    if (!bad.empty()) {
        throw Error(ErrorCode::IncompatibleEvent, "no joint statistics for " + event.str() + ": " + bad.front().first +
                                                      " and " + bad.front().second + " do not commute");
    }
    ComplexMatrix prod = outcome_projector(reg.at(event.entries()[0].id), event.entries()[0].value);
    for (std::size_t k = 1; k < event.size(); ++k) {
        prod = mat_mul(prod, outcome_projector(reg.at(event.entries()[k].id), event.entries()[k].value));
    }
    return clamp_probability(expectation(psi, prod).real());
}

double correlation(const StateVector& psi, const Observable& a, const Observable& b, double tol) {
    if (!a.is_plus_minus() || !b.is_plus_minus()) {
        throw Error(ErrorCode::NotDichotomic, "correlation needs +-1 valued observables");
    }
    if (!compatible(a, b, tol)) {
        throw Error(ErrorCode::IncompatibleEvent, "no joint statistics for " + a.id() + " and " + b.id());
    }
    const double value = expectation(psi, mat_mul(a.op(), b.op())).real();
    if (std::abs(value) > 1.0 + kProbabilitySlack) {
        throw Error(ErrorCode::InternalConsistency, "correlation " + std::to_string(value) + " outside [-1, 1]");
    }
    return std::clamp(value, -1.0, 1.0);
}

std::optional<Complex> product_identity_scalar(std::span<const Observable* const> obs, double tol) {
    if (obs.empty()) return std::nullopt;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        for (std::size_t j = i + 1; j < obs.size(); ++j) {
            if (!compatible(*obs[i], *obs[j], tol)) {
                throw Error(ErrorCode::IncompatibleEvent,
                            "product of noncommuting observables " + obs[i]->id() + " and " + obs[j]->id());
            }
        }
    }
    bool all_pauli = true;
    for (const auto* o : obs) all_pauli = all_pauli && o->pauli_string() != nullptr;
    if (all_pauli) {
        PauliString prod = *obs[0]->pauli_string();
        for (std::size_t k = 1; k < obs.size(); ++k) prod = pauli_product(prod, *obs[k]->pauli_string());
        if (!prod.is_identity_word()) return std::nullopt;
        return prod.phase().value();
    }
    ComplexMatrix prod = obs[0]->op();
    for (std::size_t k = 1; k < obs.size(); ++k) prod = mat_mul(prod, obs[k]->op());
    const Complex c = trace(prod) / static_cast<double>(prod.dim());
    if (distance(prod, c * ComplexMatrix::identity(prod.dim())) > 1e-10) return std::nullopt;
    return c;
}

double JointDistribution::marginal(const Event& event) const {
    std::vector<std::pair<std::size_t, int>> wanted;
    for (const auto& e : event.entries()) {
        std::size_t k = 0;
        while (k < ids.size() && ids[k] != e.id) ++k;
        if (k == ids.size()) throw Error(ErrorCode::UnknownObservable, "'" + e.id + "' not in the distribution");
        wanted.emplace_back(k, e.value);
    }
    double mass = 0.0;
    for (std::size_t t = 0; t < tuples.size(); ++t) {
        bool match = true;
        for (const auto& [k, v] : wanted) match = match && tuples[t][k] == v;
        if (match) mass += probabilities[t];
    }
    return mass;
}

JointDistribution commuting_classical_model(const StateVector& psi, std::span<const Observable* const> obs,
                                            double tol) {
    if (obs.empty()) throw Error(ErrorCode::InvalidEvent, "commuting model needs at least one observable");
    if (obs.size() >= 21) throw Error(ErrorCode::TooLarge, "too many observables for a joint distribution");
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (obs[i]->dim() != psi.dim()) throw Error(ErrorCode::DimensionMismatch, "observable dimension mismatch");
        for (std::size_t j = i + 1; j < obs.size(); ++j) {
            if (!compatible(*obs[i], *obs[j], tol)) {
                throw Error(ErrorCode::IncompatibleEvent,
                            obs[i]->id() + " and " + obs[j]->id() + " do not commute; no joint distribution");
            }
        }
    }
    JointDistribution dist;
    for (const auto* o : obs) dist.ids.push_back(o->id());

    // Depth-first over outcome tuples, projecting the state one observable at a
    // time; for commuting projectors |E_k...E_1 psi|^2 = <psi|E_1...E_k|psi>.
    const std::size_t n = obs.size();
    std::vector<std::array<ComplexMatrix, 2>> projectors;
    for (const auto* o : obs) projectors.push_back({outcome_projector(*o, o->outcomes()[0]),
                                                    outcome_projector(*o, o->outcomes()[1])});
    std::vector<int> tuple(n);
    std::vector<std::vector<Complex>> stack(n + 1);
    stack[0].assign(psi.entries().begin(), psi.entries().end());
    const std::size_t d = psi.dim();
    auto recurse = [&](auto&& self, std::size_t k) -> void {
        if (k == n) {
            double p = 0.0;
            for (const auto& z : stack[n]) p += std::norm(z);
            dist.tuples.push_back(tuple);
            dist.probabilities.push_back(clamp_probability(p));
            return;
        }
        for (int which = 0; which < 2; ++which) {
            const auto& m = projectors[k][which];
            auto& next = stack[k + 1];
            next.assign(d, Complex{});
            for (std::size_t r = 0; r < d; ++r) {
                for (std::size_t c = 0; c < d; ++c) next[r] += m(r, c) * stack[k][c];
            }
            tuple[k] = obs[k]->outcomes()[which];
            self(self, k + 1);
        }
    };
    recurse(recurse, 0);
    return dist;
}

}  // namespace bks
