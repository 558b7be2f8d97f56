#pragma once

// Noncontextual hidden-variable side: deterministic value assignments, the
// two constraint shapes (partition of unity over disjoint events, product
// parity), impossibility queries, and vertex bounds of linear functionals.
//
// Every enumeration is lexicographic: variables in declaration order, the
// first variable varying slowest, outcomes ascending.

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "bks/event.hpp"

namespace bks {

/// Classical random variable standing in for an observable.
struct Variable {
    ObservableId id;
    std::vector<int> outcomes;  // ascending, nonempty
};

struct Assignment {
    std::vector<int> values;  // one per variable, same order

    friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct PartitionUnity {
    std::vector<Event> events;
    friend bool operator==(const PartitionUnity&, const PartitionUnity&) = default;
};

struct ProductEquals {
    std::vector<ObservableId> ids;
    int target = 1;
    friend bool operator==(const ProductEquals&, const ProductEquals&) = default;
};

using Constraint = std::variant<PartitionUnity, ProductEquals>;

std::string describe(const Constraint& c);

inline constexpr std::size_t kMaxAssignments = std::size_t{1} << 20;
inline constexpr std::size_t kMaxEvents = std::size_t{1} << 20;

/// All total assignments. Throws TooLarge above 2^20.
std::vector<Assignment> enumerate_assignments(std::span<const Variable> variables);

/// Structural checks: known ids, legal outcomes, +-1 variables for products,
/// pairwise-disjoint partition events (OverlappingPartition otherwise).
void validate_constraint(std::span<const Variable> variables, const Constraint& c);

bool satisfies(std::span<const Variable> variables, const Assignment& a, const Event& e);
bool satisfies(std::span<const Variable> variables, const Assignment& a, const Constraint& c);

class ClassicalModel {
public:
    ClassicalModel(std::vector<Variable> variables, std::vector<Assignment> support, std::size_t total);

    const std::vector<Variable>& variables() const noexcept { return variables_; }
    const std::vector<Assignment>& support() const noexcept { return support_; }
    std::size_t total_assignments() const noexcept { return total_; }
    bool unsatisfiable() const noexcept { return support_.empty(); }
    std::size_t index_of(const ObservableId& id) const;

private:
    std::vector<Variable> variables_;
    std::vector<Assignment> support_;
    std::size_t total_;
};

/// Support = assignments satisfying every constraint. An empty support is a
/// finding, not an error.
ClassicalModel build_model(std::span<const Variable> variables, std::vector<Assignment> assignments,
                           std::span<const Constraint> constraints);

bool event_possible(const ClassicalModel& model, const Event& event);

/// Events over exactly k variables with no satisfying support assignment.
std::vector<Event> forbidden_events(const ClassicalModel& model, std::size_t k);

/// Forbidden events at arity k, leaving out those whose variables all sit
/// inside the scope of a single constraint event (those are restatements of a
/// constraint rather than consequences drawn across constraints).
std::vector<Event> derived_forbidden_events(const ClassicalModel& model, std::size_t k,
                                            std::span<const Constraint> constraints);

/// Forbidden events of arity <= max_k none of whose proper sub-events is
/// forbidden, ordered by arity then lexicographically.
std::vector<Event> minimal_forbidden_events(const ClassicalModel& model, std::size_t max_k);

/// The product of values over ids when it is constant on the support.
std::optional<int> implied_product(const ClassicalModel& model, std::span<const ObservableId> ids);

struct Term {
    ObservableId a;
    ObservableId b;
    double coefficient = 1.0;

    friend bool operator==(const Term&, const Term&) = default;
};

/// Exact (min, max) of sum coeff * v(a) * v(b) over the given vertices.
std::pair<double, double> functional_bounds(std::span<const Variable> variables,
                                            std::span<const Assignment> assignments, std::span<const Term> terms);

/// Roles of the four CHSH variables.
struct ChshRoles {
    ObservableId x1, x2, y1, y2;
};

/// Vertex check of 1[X1=X2=Y2] <= 1[X1=Y1] + 1[X1=Y2] + 1[X2=Y1]; by
/// linearity it then holds for every distribution over the vertices.
bool check_derived_inequality(std::span<const Variable> variables, std::span<const Assignment> assignments,
                              const ChshRoles& roles);

}  // namespace bks
