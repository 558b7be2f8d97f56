#pragma once

// Quantum statistics for labeled dichotomic observables. Joint statistics are
// defined only for mutually compatible (commuting) observables; any query that
// touches a noncommuting pair is refused with IncompatibleEvent.

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bks/event.hpp"
#include "bks/matrix.hpp"
#include "bks/pauli.hpp"

namespace bks {

enum class ObservableKind { Projector, Pauli, Matrix };

/// Rank-one projector |v><v| with outcomes {0, 1}. The raw (unnormalized)
/// vector is kept for faithful serialization.
struct ProjectorSpec {
    std::vector<Complex> raw;
    StateVector vector;
};

class Observable {
public:
    static Observable projector(ObservableId id, std::vector<Complex> raw);
    /// Phase must be +1 or -1.
    static Observable pauli(ObservableId id, PauliString word);
    /// Hermitian involution (O^2 = I) within 1e-10.
    static Observable matrix(ObservableId id, ComplexMatrix m);

    const ObservableId& id() const noexcept { return id_; }
    ObservableKind kind() const noexcept;
    std::size_t dim() const noexcept { return op_.dim(); }

    /// P for projectors, O for involutions.
    const ComplexMatrix& op() const noexcept { return op_; }

    /// Ascending outcome set: {0,1} for projectors, {-1,+1} otherwise.
    std::array<int, 2> outcomes() const noexcept;
    bool has_outcome(int value) const noexcept;
    bool is_plus_minus() const noexcept { return kind() != ObservableKind::Projector; }

    const ProjectorSpec* projector_spec() const noexcept { return std::get_if<ProjectorSpec>(&spec_); }
    const PauliString* pauli_string() const noexcept { return std::get_if<PauliString>(&spec_); }

private:
    Observable(ObservableId id, std::variant<ProjectorSpec, PauliString, ComplexMatrix> spec, ComplexMatrix op);

    ObservableId id_;
    std::variant<ProjectorSpec, PauliString, ComplexMatrix> spec_;
    ComplexMatrix op_;
};

/// Insertion-ordered table of observables sharing one Hilbert dimension.
class ObservableRegistry {
public:
    ObservableRegistry() = default;
    explicit ObservableRegistry(std::size_t dim) : dim_(dim) {}

    /// Throws InvalidObservable on a duplicate id, DimensionMismatch on a
    /// dimension different from the registry's.
    void add(Observable obs);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return items_.size(); }
    bool contains(const ObservableId& id) const { return index_.count(id) != 0; }
    const Observable& at(const ObservableId& id) const;
    std::size_t index_of(const ObservableId& id) const;
    const Observable& operator[](std::size_t i) const { return items_[i]; }
    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }

private:
    std::size_t dim_ = 0;
    std::vector<Observable> items_;
    std::map<ObservableId, std::size_t> index_;
};

/// Mutually compatible set of observables, checked on construction.
class Context {
public:
    static Context make(const ObservableRegistry& reg, std::vector<ObservableId> members, double tol);

    const std::vector<ObservableId>& members() const noexcept { return members_; }
    std::string str() const;

    friend bool operator==(const Context&, const Context&) = default;

private:
    explicit Context(std::vector<ObservableId> members) : members_(std::move(members)) {}
    std::vector<ObservableId> members_;
};

ComplexMatrix outcome_projector(const Observable& obs, int outcome);

/// Symbolic for two Pauli observables, numeric commutator norm otherwise.
bool compatible(const Observable& a, const Observable& b, double tol);

/// Pairs (in list order) that fail the compatibility test.
std::vector<std::pair<ObservableId, ObservableId>> incompatible_pairs(const ObservableRegistry& reg,
                                                                       std::span<const ObservableId> ids, double tol);
bool mutually_compatible(const ObservableRegistry& reg, std::span<const ObservableId> ids, double tol);

/// Checks ids and outcomes of an event against the registry.
void validate_event(const ObservableRegistry& reg, const Event& event);

/// <psi| prod_k E_k |psi> over the event's outcome projectors. Throws
/// IncompatibleEvent when any pair of the event's observables fails to commute.
double joint_probability(const StateVector& psi, const Event& event, const ObservableRegistry& reg,
                         double tol = kDefaultTolerance);

/// <psi|AB|psi> for compatible +-1 valued observables.
double correlation(const StateVector& psi, const Observable& a, const Observable& b,
                   double tol = kDefaultTolerance);

/// c when the operator product equals c * identity, nullopt otherwise. Exact for
/// all-Pauli lists.
std::optional<Complex> product_identity_scalar(std::span<const Observable* const> obs,
                                               double tol = kDefaultTolerance);

/// Distribution over total outcome tuples of a commuting set, in
/// lexicographic order (list order, then ascending outcome).
struct JointDistribution {
    std::vector<ObservableId> ids;
    std::vector<std::vector<int>> tuples;
    std::vector<double> probabilities;

    /// Total mass of tuples consistent with the event.
    double marginal(const Event& event) const;
};

inline constexpr std::size_t kMaxOutcomeTuples = std::size_t{1} << 20;

JointDistribution commuting_classical_model(const StateVector& psi, std::span<const Observable* const> obs,
                                            double tol = kDefaultTolerance);

/// Checks a raw probability and clamps it into [0, 1]. Values outside
/// [-1e-8, 1 + 1e-8] raise InternalConsistency.
double clamp_probability(double raw);

}  // namespace bks
