#include "bks/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "bks/error.hpp"

namespace bks {

namespace {

Event ev(std::initializer_list<Outcome> entries) { return Event(std::vector<Outcome>(entries)); }

std::string join_ids(const std::vector<ObservableId>& ids) {
    std::string s = "(";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) s += ",";
        s += ids[i];
    }
    return s + ")";
}

void require_plus_minus(const ObservableRegistry& reg, const ObservableId& id, const char* where) {
    if (!reg.at(id).is_plus_minus()) {
        throw Error(ErrorCode::NotDichotomic, std::string(where) + " over '" + id + "' which is not +-1 valued");
    }
}

}  // namespace

Scenario::Scenario(std::string name, std::size_t dim, double tolerance)
    : name_(std::move(name)),
      dim_(dim),
      tolerance_(tolerance),
      raw_state_(dim, Complex{1.0, 0.0}),
      state_(normalize(raw_state_)),
      observables_(dim) {
    set_tolerance(tolerance);
}

void Scenario::set_tolerance(double tol) {
    if (!(tol > 0.0) || !std::isfinite(tol)) throw Error(ErrorCode::NonFinite, "tolerance must be positive");
    tolerance_ = tol;
}

void Scenario::set_state(std::string id, std::vector<Complex> raw) {
    if (raw.size() != dim_) {
        throw Error(ErrorCode::DimensionMismatch, "state '" + id + "' has " + std::to_string(raw.size()) +
                                                      " entries, scenario dimension is " + std::to_string(dim_));
    }
    state_ = normalize(raw);
    raw_state_ = std::move(raw);
    state_id_ = std::move(id);
}

void Scenario::add_observable(Observable obs) {
    if (obs.id() == state_id_) throw Error(ErrorCode::InvalidObservable, "'" + obs.id() + "' already names the state");
    observables_.add(std::move(obs));
}

void Scenario::add_context(std::vector<ObservableId> members) {
    contexts_.push_back(Context::make(observables_, std::move(members), tolerance_));
}

void Scenario::add_constraint(Constraint c) {
    validate_constraint(variables(), c);
    constraints_.push_back(std::move(c));
}

void Scenario::add_query(Event e) {
    validate_event(observables_, e);
    queries_.push_back(std::move(e));
}

void Scenario::add_product_query(ProductQuery q) {
    if (q.ids.empty()) throw Error(ErrorCode::InvalidEvent, "product query needs at least one observable");
    std::set<ObservableId> seen;
    for (const auto& id : q.ids) {
        require_plus_minus(observables_, id, "product query");
        if (!seen.insert(id).second) throw Error(ErrorCode::InvalidEvent, "'" + id + "' repeated in product query");
    }
    product_queries_.push_back(std::move(q));
}

void Scenario::add_functional(Functional f) {
    if (f.terms.empty()) throw Error(ErrorCode::InvalidEvent, "functional '" + f.name + "' has no terms");
    for (const auto& t : f.terms) {
        require_plus_minus(observables_, t.a, "functional term");
        require_plus_minus(observables_, t.b, "functional term");
        if (!std::isfinite(t.coefficient)) throw Error(ErrorCode::NonFinite, "non-finite functional coefficient");
    }
    functionals_.push_back(std::move(f));
}

std::vector<Variable> Scenario::variables() const {
    std::vector<Variable> out;
    for (const auto& o : observables_) {
        const auto oc = o.outcomes();
        out.push_back({o.id(), {oc[0], oc[1]}});
    }
    return out;
}

ComplexMatrix spin_in_plane(double theta) {
    return ComplexMatrix{{std::cos(theta), std::sin(theta)}, {std::sin(theta), -std::cos(theta)}};
}

Scenario builtin_hardy() {
    const double s = 1.0;
    Scenario sc("hardy", 3);
    sc.set_state("psi", {s, s, s});
    sc.add_observable(Observable::projector("P1", {1.0, -1.0, 1.0}));
    sc.add_observable(Observable::projector("P2", {1.0, 1.0, 0.0}));
    sc.add_observable(Observable::projector("P3", {0.0, 0.0, 1.0}));
    sc.add_observable(Observable::projector("P4", {1.0, 0.0, 0.0}));
    sc.add_observable(Observable::projector("P5", {0.0, 1.0, 1.0}));
    sc.add_context({"P1", "P2"});
    sc.add_context({"P2", "P3"});
    sc.add_context({"P3", "P4"});
    sc.add_context({"P4", "P5"});
    sc.add_context({"P5", "P1"});
    sc.add_constraint(PartitionUnity{{ev({{"P1", 0}, {"P2", 1}}), ev({{"P2", 0}, {"P3", 1}})}});
    sc.add_constraint(PartitionUnity{{ev({{"P3", 0}, {"P4", 1}}), ev({{"P4", 0}, {"P5", 1}})}});
    sc.add_query(ev({{"P1", 1}, {"P5", 0}}));
    sc.add_query(ev({{"P1", 1}, {"P3", 0}}));
    sc.add_query(ev({{"P1", 1}, {"P4", 1}}));
    sc.add_query(ev({{"P2", 0}, {"P4", 1}}));
    sc.add_query(ev({{"P2", 0}, {"P5", 0}}));
    sc.add_query(ev({{"P3", 1}, {"P5", 0}}));
    return sc;
}

Scenario builtin_mermin() {
    // Star points alpha..kappa; the five lines are
    //   alpha gamma zeta iota, alpha delta eta kappa, beta zeta theta kappa,
    //   epsilon eta theta iota, and the horizontal beta gamma delta epsilon.
    Scenario sc("mermin", 8);
    const std::pair<const char*, const char*> points[] = {
        {"alpha", "YII"}, {"beta", "XXX"}, {"gamma", "YYX"}, {"delta", "YXY"}, {"epsilon", "XYY"},
        {"zeta", "IIX"},  {"eta", "IIY"},  {"theta", "XII"}, {"iota", "IYI"},  {"kappa", "IXI"},
    };
    for (const auto& [id, word] : points) sc.add_observable(Observable::pauli(id, PauliString::parse(word)));
    const std::vector<std::vector<ObservableId>> lines = {
        {"alpha", "gamma", "zeta", "iota"},
        {"alpha", "delta", "eta", "kappa"},
        {"beta", "zeta", "theta", "kappa"},
        {"epsilon", "eta", "theta", "iota"},
    };
    const std::vector<ObservableId> horizontal = {"beta", "gamma", "delta", "epsilon"};
    for (const auto& line : lines) sc.add_context(line);
    sc.add_context(horizontal);
    for (const auto& line : lines) sc.add_constraint(ProductEquals{line, 1});

    // The label mapping is not spelled out in text, so re-derive every line
    // identity before handing the scenario out.
    const auto line_product = [&](const std::vector<ObservableId>& ids) {
        std::vector<const Observable*> obs;
        for (const auto& id : ids) obs.push_back(&sc.observables().at(id));
        return product_identity_scalar(obs, sc.tolerance());
    };
    for (const auto& line : lines) {
        if (line_product(line) != Complex{1.0, 0.0}) {
            throw Error(ErrorCode::InternalConsistency, "Mermin line " + join_ids(line) + " is not +identity");
        }
    }
    if (line_product(horizontal) != Complex{-1.0, 0.0}) {
        throw Error(ErrorCode::InternalConsistency, "Mermin horizontal line is not -identity");
    }

    sc.add_product_query(ProductQuery{horizontal});
    sc.add_query(ev({{"gamma", 1}, {"delta", 1}, {"zeta", 1}, {"eta", 1}, {"iota", -1}, {"kappa", 1}}));
    return sc;
}

Scenario builtin_chsh(double a, double a_prime, double b, double b_prime) {
    Scenario sc("chsh", 4);
    sc.set_state("singlet", {0.0, 1.0, -1.0, 0.0});
    const auto id2 = ComplexMatrix::identity(2);
    sc.add_observable(Observable::matrix("X1", tensor(spin_in_plane(a), id2)));
    sc.add_observable(Observable::matrix("X2", tensor(spin_in_plane(a_prime), id2)));
    sc.add_observable(Observable::matrix("Y1", tensor(id2, spin_in_plane(b))));
    sc.add_observable(Observable::matrix("Y2", tensor(id2, spin_in_plane(b_prime))));
    sc.add_context({"X1", "Y1"});
    sc.add_context({"X1", "Y2"});
    sc.add_context({"X2", "Y1"});
    sc.add_context({"X2", "Y2"});
    sc.add_functional(Functional{"chsh", {{"X1", "Y1", 1.0}, {"X1", "Y2", 1.0}, {"X2", "Y1", 1.0}, {"X2", "Y2", -1.0}}});
    // Left-hand event of P(X1=X2=Y2) <= P(X1=Y1) + P(X1=Y2) + P(X2=Y1).
    sc.add_query(ev({{"X1", 1}, {"X2", 1}, {"Y2", 1}}));
    sc.add_query(ev({{"X1", -1}, {"X2", -1}, {"Y2", -1}}));
    sc.add_query(ev({{"X1", 1}, {"Y1", 1}}));
    return sc;
}

Scenario builtin_chsh() {
    constexpr double pi = std::numbers::pi;
    return builtin_chsh(0.0, pi / 2, pi / 4, 7 * pi / 4);
}

std::string_view to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Verified: return "VERIFIED";
        case CheckStatus::Violated: return "VIOLATED";
        default: return "CLASSICAL-ONLY";
    }
}

std::string_view to_string(ProductStatus s) {
    switch (s) {
        case ProductStatus::Scalar: return "SCALAR";
        case ProductStatus::NotScalar: return "NOT-SCALAR";
        default: return "INCOMPATIBLE";
    }
}

namespace {

std::vector<const Observable*> lookup(const ObservableRegistry& reg, const std::vector<ObservableId>& ids) {
    std::vector<const Observable*> out;
    for (const auto& id : ids) out.push_back(&reg.at(id));
    return out;
}

ConstraintCheck check_constraint(const Scenario& sc, const Constraint& c) {
    const auto& reg = sc.observables();
    const double tol = sc.tolerance();
    ConstraintCheck out;
    out.text = describe(c);
    if (const auto* pu = std::get_if<PartitionUnity>(&c)) {
        bool testable = true;
        double sum = 0.0;
        for (const auto& e : pu->events) {
            const auto ids = e.ids();
            if (!mutually_compatible(reg, ids, tol)) {
                testable = false;
                out.event_probabilities.emplace_back(std::nullopt);
                continue;
            }
            const double p = joint_probability(sc.state(), e, reg, tol);
            out.event_probabilities.emplace_back(p);
            sum += p;
        }
        if (testable) {
            out.value = sum;
            out.status = std::abs(sum - 1.0) <= tol ? CheckStatus::Verified : CheckStatus::Violated;
        }
        return out;
    }
    const auto& pe = std::get<ProductEquals>(c);
    if (!mutually_compatible(reg, pe.ids, tol)) return out;
    const auto obs = lookup(reg, pe.ids);
    if (auto scalar = product_identity_scalar(obs, tol)) {
        out.value = scalar->real();
        out.status = std::abs(*scalar - Complex(pe.target, 0.0)) <= tol ? CheckStatus::Verified : CheckStatus::Violated;
    } else {
        ComplexMatrix prod = obs[0]->op();
        for (std::size_t k = 1; k < obs.size(); ++k) prod = mat_mul(prod, obs[k]->op());
        out.value = expectation(sc.state(), prod).real();
        out.status = CheckStatus::Violated;
    }
    return out;
}

}  // namespace

AnalysisReport analyze(const Scenario& sc, const AnalysisOptions& options) {
    const auto& reg = sc.observables();
    const double tol = sc.tolerance();
    AnalysisReport rep;
    rep.scenario = sc.name();
    rep.dim = sc.dim();
    rep.tolerance = tol;
    rep.witness_arity = options.witness_arity;

    // Quantum check of every constraint that can be tested.
    for (const auto& c : sc.constraints()) {
        rep.constraint_checks.push_back(check_constraint(sc, c));
        if (rep.constraint_checks.back().status == CheckStatus::Violated) rep.premises_hold = false;
    }

    // Classical model.
    const auto vars = sc.variables();
    const auto model = build_model(vars, enumerate_assignments(vars), sc.constraints());
    rep.classical_total = model.total_assignments();
    rep.classical_support_size = model.support().size();

    // Query verdicts.
    for (const auto& q : sc.queries()) {
        QueryVerdict v;
        v.event = q;
        v.classically_possible = event_possible(model, q);
        const auto ids = q.ids();
        v.incompatible_pairs = incompatible_pairs(reg, ids, tol);
        if (v.incompatible_pairs.empty()) v.quantum_probability = joint_probability(sc.state(), q, reg, tol);
        rep.query_verdicts.push_back(std::move(v));
    }
    for (const auto& q : sc.product_queries()) {
        ProductVerdict v;
        v.ids = q.ids;
        v.classical = implied_product(model, q.ids);
        if (mutually_compatible(reg, q.ids, tol)) {
            const auto obs = lookup(reg, q.ids);
            if (auto scalar = product_identity_scalar(obs, tol)) {
                v.quantum_status = ProductStatus::Scalar;
                v.quantum_value = scalar->real();
            } else {
                ComplexMatrix prod = obs[0]->op();
                for (std::size_t k = 1; k < obs.size(); ++k) prod = mat_mul(prod, obs[k]->op());
                v.quantum_status = ProductStatus::NotScalar;
                v.quantum_value = expectation(sc.state(), prod).real();
            }
        }
        rep.product_verdicts.push_back(std::move(v));
    }
    const auto vertices = enumerate_assignments(vars);
    for (const auto& f : sc.functionals()) {
        FunctionalVerdict v;
        v.name = f.name;
        std::tie(v.classical_min, v.classical_max) = functional_bounds(vars, vertices, f.terms);
        double total = 0.0;
        bool testable = true;
        for (const auto& t : f.terms) {
            const auto& a = reg.at(t.a);
            const auto& b = reg.at(t.b);
            if (!compatible(a, b, tol)) {
                testable = false;
                break;
            }
            total += t.coefficient * correlation(sc.state(), a, b, tol);
        }
        if (testable) {
            v.quantum_value = total;
            v.exceeds_classical = total < v.classical_min - tol || total > v.classical_max + tol;
        }
        rep.functional_verdicts.push_back(std::move(v));
    }

    // Contradictions: classical consequence of premises that hold
    // quantumly, refuted by a quantum-testable statement.
    if (rep.premises_hold) {
        for (const auto& v : rep.query_verdicts) {
            if (!v.classically_possible && v.quantum_probability && *v.quantum_probability > tol) {
                rep.contradictions.push_back({Contradiction::Kind::Event, v.event.str(), 0.0, *v.quantum_probability});
            }
        }
        for (const auto& v : rep.product_verdicts) {
            if (v.classical && v.quantum_status == ProductStatus::Scalar &&
                std::abs(*v.quantum_value - *v.classical) > tol) {
                rep.contradictions.push_back(
                    {Contradiction::Kind::Product, "product" + join_ids(v.ids), double(*v.classical), *v.quantum_value});
            }
        }
    }

    // Witnesses: minimal classically forbidden events over noncommuting sets
    for (auto& e : minimal_forbidden_events(model, options.witness_arity)) {
        const auto ids = e.ids();
        auto bad = incompatible_pairs(reg, ids, tol);
        if (!bad.empty()) rep.witnesses.push_back({std::move(e), std::move(bad)});
    }

    // Without noncommuting objects the joint quantum statistics are a
    // classical distribution over the common spectral basis.
    std::vector<ObservableId> all_ids;
    for (const auto& o : reg) all_ids.push_back(o.id());
    rep.all_commuting = mutually_compatible(reg, all_ids, tol);
    if (rep.all_commuting && reg.size() > 0) {
        const auto dist = commuting_classical_model(sc.state(), lookup(reg, all_ids), tol);
        double worst = 0.0;
        for (const auto& v : rep.query_verdicts) {
            worst = std::max(worst, std::abs(dist.marginal(v.event) - *v.quantum_probability));
        }
        for (const auto& ctx : sc.contexts()) {
            const auto ctx_vars = [&] {
                std::vector<Variable> cv;
                for (const auto& id : ctx.members()) cv.push_back(vars[reg.index_of(id)]);
                return cv;
            }();
            for (const auto& a : enumerate_assignments(ctx_vars)) {
                std::vector<Outcome> entries;
                for (std::size_t i = 0; i < ctx_vars.size(); ++i) entries.push_back({ctx_vars[i].id, a.values[i]});
                const Event e(std::move(entries));
                worst = std::max(worst, std::abs(dist.marginal(e) - joint_probability(sc.state(), e, reg, tol)));
            }
        }
        rep.commuting_model_deviation = worst;
        if (worst > 1e-9) {
            throw Error(ErrorCode::InternalConsistency, "commuting joint model disagrees with quantum marginals");
        }
        if (!rep.contradictions.empty()) {
            throw Error(ErrorCode::InternalConsistency, "contradiction reported for an all-commuting scenario");
        }
    }

    const bool products_only = std::all_of(sc.constraints().begin(), sc.constraints().end(),
                                           [](const Constraint& c) { return std::holds_alternative<ProductEquals>(c); });
    rep.state_independent = products_only && !rep.contradictions.empty() &&
                            std::all_of(rep.contradictions.begin(), rep.contradictions.end(), [](const auto& c) {
                                return c.kind == Contradiction::Kind::Product;
                            });
    return rep;
}

}  // namespace bks
