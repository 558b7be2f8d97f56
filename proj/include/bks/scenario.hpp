#pragma once

// A scenario bundles a state, labeled observables, measurement contexts,
// classical constraints, and the queries to answer. analyze() runs both the
// quantum and the noncontextual side and classifies every disagreement.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bks/event.hpp"
#include "bks/lhv.hpp"
#include "bks/matrix.hpp"
#include "bks/quantum.hpp"

namespace bks {

/// "Is the product of these observables' values fixed?"
struct ProductQuery {
    std::vector<ObservableId> ids;
    friend bool operator==(const ProductQuery&, const ProductQuery&) = default;
};

/// Linear functional sum coeff * <A B> over pairs of +-1 observables.
struct Functional {
    std::string name;
    std::vector<Term> terms;
    friend bool operator==(const Functional&, const Functional&) = default;
};

class Scenario {
public:
    /// Starts with the uniform superposition as state.
    Scenario(std::string name, std::size_t dim, double tolerance = kDefaultTolerance);

    void set_state(std::string id, std::vector<Complex> raw);
    void add_observable(Observable obs);
    /// Throws InvalidContext unless the members pairwise commute.
    void add_context(std::vector<ObservableId> members);
    void add_constraint(Constraint c);
    void add_query(Event e);
    void add_product_query(ProductQuery q);
    void add_functional(Functional f);
    void set_tolerance(double tol);

    const std::string& name() const noexcept { return name_; }
    std::size_t dim() const noexcept { return dim_; }
    double tolerance() const noexcept { return tolerance_; }
    const std::string& state_id() const noexcept { return state_id_; }
    const std::vector<Complex>& raw_state() const noexcept { return raw_state_; }
    const StateVector& state() const noexcept { return state_; }
    const ObservableRegistry& observables() const noexcept { return observables_; }
    const std::vector<Context>& contexts() const noexcept { return contexts_; }
    const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
    const std::vector<Event>& queries() const noexcept { return queries_; }
    const std::vector<ProductQuery>& product_queries() const noexcept { return product_queries_; }
    const std::vector<Functional>& functionals() const noexcept { return functionals_; }

    /// Classical stand-ins for the observables, in declaration order.
    std::vector<Variable> variables() const;

private:
    std::string name_;
    std::size_t dim_;
    double tolerance_;
    std::string state_id_ = "psi";
    std::vector<Complex> raw_state_;
    StateVector state_;
    ObservableRegistry observables_;
    std::vector<Context> contexts_;
    std::vector<Constraint> constraints_;
    std::vector<Event> queries_;
    std::vector<ProductQuery> product_queries_;
    std::vector<Functional> functionals_;
};

Scenario builtin_hardy();
Scenario builtin_mermin();
Scenario builtin_chsh(double a, double a_prime, double b, double b_prime);
/// CHSH at the angles (0, pi/2, pi/4, 7pi/4), where |S| = 2 sqrt 2.
Scenario builtin_chsh();

/// Spin direction cos(theta) Z + sin(theta) X.
ComplexMatrix spin_in_plane(double theta);

enum class CheckStatus { Verified, Violated, ClassicalOnly };
std::string_view to_string(CheckStatus s);

struct ConstraintCheck {
    std::string text;
    CheckStatus status = CheckStatus::ClassicalOnly;
    /// Sum of event probabilities, or the operator-product scalar.
    std::optional<double> value;
    /// Per partition event; nullopt marks an incompatible event.
    std::vector<std::optional<double>> event_probabilities;
};

struct QueryVerdict {
    Event event;
    bool classically_possible = true;
    /// nullopt: the event's observables do not commute, so quantum
    /// mechanics assigns it no probability.
    std::optional<double> quantum_probability;
    std::vector<std::pair<ObservableId, ObservableId>> incompatible_pairs;
};

enum class ProductStatus { Scalar, NotScalar, Incompatible };
std::string_view to_string(ProductStatus s);

struct ProductVerdict {
    std::vector<ObservableId> ids;
    std::optional<int> classical;
    ProductStatus quantum_status = ProductStatus::Incompatible;
    /// Scalar for Scalar, state expectation for NotScalar.
    std::optional<double> quantum_value;
};

struct FunctionalVerdict {
    std::string name;
    double classical_min = 0.0;
    double classical_max = 0.0;
    std::optional<double> quantum_value;
    bool exceeds_classical = false;
};

struct Contradiction {
    enum class Kind { Event, Product };
    Kind kind = Kind::Event;
    std::string query;
    double classical = 0.0;
    double quantum = 0.0;
};

struct Witness {
    Event event;
    std::vector<std::pair<ObservableId, ObservableId>> incompatible_pairs;
};

struct AnalysisOptions {
    std::size_t witness_arity = 6;
};

struct AnalysisReport {
    std::string scenario;
    std::size_t dim = 0;
    double tolerance = kDefaultTolerance;
    std::size_t witness_arity = 0;
    std::vector<ConstraintCheck> constraint_checks;
    /// Every quantum-testable constraint holds for the state.
    bool premises_hold = true;
    std::size_t classical_total = 0;
    std::size_t classical_support_size = 0;
    std::vector<QueryVerdict> query_verdicts;
    std::vector<ProductVerdict> product_verdicts;
    std::vector<FunctionalVerdict> functional_verdicts;
    std::vector<Contradiction> contradictions;
    std::vector<Witness> witnesses;
    bool all_commuting = false;
    /// Constraint checks and contradictions depend only on operator identities.
    bool state_independent = false;
    /// Largest marginal mismatch of the commuting joint model (all_commuting only).
    std::optional<double> commuting_model_deviation;
};

AnalysisReport analyze(const Scenario& scenario, const AnalysisOptions& options = {});

}  // namespace bks
