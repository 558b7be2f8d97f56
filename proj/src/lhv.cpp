#include "bks/lhv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <unordered_map>

#include "bks/error.hpp"

namespace bks {

namespace {

std::size_t find_variable(std::span<const Variable> vars, const ObservableId& id) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].id == id) return i;
    }
    throw Error(ErrorCode::UnknownObservable, "unknown observable '" + id + "'");
}

std::size_t outcome_index(const Variable& v, int value) {
    auto it = std::find(v.outcomes.begin(), v.outcomes.end(), value);
    if (it == v.outcomes.end()) {
        throw Error(ErrorCode::BadOutcome,
                    "outcome " + std::to_string(value) + " is not a possible result of '" + v.id + "'");
    }
    return static_cast<std::size_t>(it - v.outcomes.begin());
}

bool is_plus_minus(const Variable& v) { return v.outcomes == std::vector<int>{-1, 1}; }

// Two events over unconstrained total assignments share a satisfying
// assignment exactly when they agree on every variable they both mention.
bool events_overlap(const Event& a, const Event& b) {
    for (const auto& e : a.entries()) {
        if (auto v = b.value_of(e.id); v && *v != e.value) return false;
    }
    return true;
}

// Advances a sorted k-subset of {0..n-1} to its lexicographic successor.
bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
    const std::size_t k = c.size();
    for (std::size_t i = k; i-- > 0;) {
        if (c[i] < n - k + i) {
            ++c[i];
            for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

double binomial(std::size_t n, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

// Which outcome combinations of a variable subset occur on the support, as a
// mixed-radix table with the first subset member most significant.
class ProjectionTable {
public:
    explicit ProjectionTable(const ClassicalModel& model) : model_(model) {
        if (model.variables().size() > 64) throw Error(ErrorCode::TooLarge, "more than 64 variables");
        for (const auto& a : model.support()) {
            std::vector<std::uint8_t> row(a.values.size());
            for (std::size_t i = 0; i < row.size(); ++i) {
                row[i] = static_cast<std::uint8_t>(outcome_index(model.variables()[i], a.values[i]));
            }
            support_.push_back(std::move(row));
        }
    }

    std::size_t combinations(const std::vector<std::size_t>& subset) const {
        std::size_t n = 1;
        for (auto i : subset) n *= model_.variables()[i].outcomes.size();
        return n;
    }

    std::size_t code(const std::vector<std::size_t>& subset, const std::vector<std::uint8_t>& row) const {
        std::size_t c = 0;
        for (auto i : subset) c = c * model_.variables()[i].outcomes.size() + row[i];
        return c;
    }

    const std::vector<char>& occurring(const std::vector<std::size_t>& subset) {
        std::uint64_t key = 0;
        for (auto i : subset) key |= std::uint64_t{1} << i;
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        std::vector<char> seen(combinations(subset), 0);
        for (const auto& row : support_) seen[code(subset, row)] = 1;
        return cache_.emplace(key, std::move(seen)).first->second;
    }

    Event decode(const std::vector<std::size_t>& subset, std::size_t c) const {
        std::vector<Outcome> entries(subset.size());
        for (std::size_t j = subset.size(); j-- > 0;) {
            const auto& v = model_.variables()[subset[j]];
            entries[j] = {v.id, v.outcomes[c % v.outcomes.size()]};
            c /= v.outcomes.size();
        }
        return Event(std::move(entries));
    }

private:
    const ClassicalModel& model_;
    std::vector<std::vector<std::uint8_t>> support_;
    std::unordered_map<std::uint64_t, std::vector<char>> cache_;
};

void check_event_budget(const ClassicalModel& model, std::size_t k) {
    const std::size_t n = model.variables().size();
    if (k == 0 || k > n) {
        throw Error(ErrorCode::InvalidEvent,
                    "event arity " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
    }
    std::size_t widest = 1;
    for (const auto& v : model.variables()) widest = std::max(widest, v.outcomes.size());
    const double count = binomial(n, k) * std::pow(static_cast<double>(widest), static_cast<double>(k));
    if (count > static_cast<double>(kMaxEvents)) {
        throw Error(ErrorCode::TooLarge, "arity-" + std::to_string(k) + " event count exceeds 2^20");
    }
}

}  // namespace

std::string describe(const Constraint& c) {
    if (const auto* pu = std::get_if<PartitionUnity>(&c)) {
        std::string s;
        for (std::size_t i = 0; i < pu->events.size(); ++i) {
            if (i) s += " + ";
            s += pu->events[i].str();
        }
        return s + " = 1";
    }
    const auto& pe = std::get<ProductEquals>(c);
    std::string s = "product(";
    for (std::size_t i = 0; i < pe.ids.size(); ++i) {
        if (i) s += ",";
        s += pe.ids[i];
    }
    return s + ") = " + (pe.target > 0 ? "1" : "-1");
}

std::vector<Assignment> enumerate_assignments(std::span<const Variable> variables) {
    std::size_t total = 1;
    for (const auto& v : variables) {
        if (v.outcomes.empty()) throw Error(ErrorCode::BadOutcome, "variable '" + v.id + "' has no outcomes");
        if (total > kMaxAssignments / v.outcomes.size()) {
            throw Error(ErrorCode::TooLarge, "assignment count exceeds 2^20");
        }
        total *= v.outcomes.size();
    }
    std::vector<Assignment> out;
    out.reserve(total);
    std::vector<std::size_t> digits(variables.size(), 0);
    for (std::size_t n = 0; n < total; ++n) {
        Assignment a;
        a.values.reserve(variables.size());
        for (std::size_t i = 0; i < variables.size(); ++i) a.values.push_back(variables[i].outcomes[digits[i]]);
        out.push_back(std::move(a));
        for (std::size_t i = variables.size(); i-- > 0;) {
            if (++digits[i] < variables[i].outcomes.size()) break;
            digits[i] = 0;
        }
    }
    return out;
}

void validate_constraint(std::span<const Variable> variables, const Constraint& c) {
    if (const auto* pu = std::get_if<PartitionUnity>(&c)) {
        if (pu->events.empty()) throw Error(ErrorCode::InvalidEvent, "partition needs at least one event");
        for (const auto& e : pu->events) {
            for (const auto& o : e.entries()) outcome_index(variables[find_variable(variables, o.id)], o.value);
        }
        for (std::size_t i = 0; i < pu->events.size(); ++i) {
            for (std::size_t j = i + 1; j < pu->events.size(); ++j) {
                if (events_overlap(pu->events[i], pu->events[j])) {
                    throw Error(ErrorCode::OverlappingPartition, "partition events " + pu->events[i].str() + " and " +
                                                                     pu->events[j].str() + " are not disjoint");
                }
            }
        }
        return;
    }
    const auto& pe = std::get<ProductEquals>(c);
    if (pe.ids.empty()) throw Error(ErrorCode::InvalidEvent, "product constraint needs at least one observable");
    if (pe.target != 1 && pe.target != -1) throw Error(ErrorCode::BadOutcome, "product target must be +1 or -1");
    std::set<ObservableId> seen;
    for (const auto& id : pe.ids) {
        if (!seen.insert(id).second) throw Error(ErrorCode::InvalidEvent, "'" + id + "' repeated in product");
        if (!is_plus_minus(variables[find_variable(variables, id)])) {
            throw Error(ErrorCode::NotDichotomic, "product constraint over '" + id + "' which is not +-1 valued");
        }
    }
}

bool satisfies(std::span<const Variable> variables, const Assignment& a, const Event& e) {
    for (const auto& o : e.entries()) {
        if (a.values[find_variable(variables, o.id)] != o.value) return false;
    }
    return true;
}

bool satisfies(std::span<const Variable> variables, const Assignment& a, const Constraint& c) {
    if (const auto* pu = std::get_if<PartitionUnity>(&c)) {
        std::size_t hits = 0;
        for (const auto& e : pu->events) hits += satisfies(variables, a, e) ? 1 : 0;
        return hits == 1;
    }
    const auto& pe = std::get<ProductEquals>(c);
    int prod = 1;
    for (const auto& id : pe.ids) prod *= a.values[find_variable(variables, id)];
    return prod == pe.target;
}

ClassicalModel::ClassicalModel(std::vector<Variable> variables, std::vector<Assignment> support, std::size_t total)
    : variables_(std::move(variables)), support_(std::move(support)), total_(total) {}

std::size_t ClassicalModel::index_of(const ObservableId& id) const { return find_variable(variables_, id); }

ClassicalModel build_model(std::span<const Variable> variables, std::vector<Assignment> assignments,
                           std::span<const Constraint> constraints) {
    for (const auto& c : constraints) validate_constraint(variables, c);
    const std::size_t total = assignments.size();
    std::vector<Assignment> support;
    for (auto& a : assignments) {
        if (a.values.size() != variables.size()) {
            throw Error(ErrorCode::SizeMismatch, "assignment is not total over the variables");
        }
        bool ok = true;
        for (const auto& c : constraints) {
            if (!satisfies(variables, a, c)) {
                ok = false;
                break;
            }
        }
        if (ok) support.push_back(std::move(a));
    }
    return ClassicalModel({variables.begin(), variables.end()}, std::move(support), total);
}

bool event_possible(const ClassicalModel& model, const Event& event) {
    std::vector<std::pair<std::size_t, int>> wanted;
    for (const auto& o : event.entries()) {
        const auto i = model.index_of(o.id);
        outcome_index(model.variables()[i], o.value);
        wanted.emplace_back(i, o.value);
    }
    return std::any_of(model.support().begin(), model.support().end(), [&](const Assignment& a) {
        return std::all_of(wanted.begin(), wanted.end(), [&](const auto& w) { return a.values[w.first] == w.second; });
    });
}

std::vector<Event> forbidden_events(const ClassicalModel& model, std::size_t k) {
    check_event_budget(model, k);
    ProjectionTable table(model);
    std::vector<Event> out;
    std::vector<std::size_t> subset(k);
    for (std::size_t i = 0; i < k; ++i) subset[i] = i;
    do {
        const auto& seen = table.occurring(subset);
        for (std::size_t c = 0; c < seen.size(); ++c) {
            if (!seen[c]) out.push_back(table.decode(subset, c));
        }
    } while (next_combination(subset, model.variables().size()));
    return out;
}

std::vector<Event> derived_forbidden_events(const ClassicalModel& model, std::size_t k,
                                            std::span<const Constraint> constraints) {
    std::vector<std::set<ObservableId>> scopes;
    for (const auto& c : constraints) {
        if (const auto* pu = std::get_if<PartitionUnity>(&c)) {
            for (const auto& e : pu->events) {
                const auto ids = e.ids();
                scopes.emplace_back(ids.begin(), ids.end());
            }
        } else {
            const auto& pe = std::get<ProductEquals>(c);
            scopes.emplace_back(pe.ids.begin(), pe.ids.end());
        }
    }
    std::vector<Event> out;
    for (auto& e : forbidden_events(model, k)) {
        const auto ids = e.ids();
        const bool restated = std::any_of(scopes.begin(), scopes.end(), [&](const auto& scope) {
            return std::all_of(ids.begin(), ids.end(), [&](const auto& id) { return scope.count(id) != 0; });
        });
        if (!restated) out.push_back(std::move(e));
    }
    return out;
}

std::vector<Event> minimal_forbidden_events(const ClassicalModel& model, std::size_t max_k) {
    const std::size_t n = model.variables().size();
    max_k = std::min(max_k, n);
    ProjectionTable table(model);
    std::vector<Event> out;
    for (std::size_t k = 1; k <= max_k; ++k) {
        check_event_budget(model, k);
        std::vector<std::size_t> subset(k);
        for (std::size_t i = 0; i < k; ++i) subset[i] = i;
        do {
            const auto& seen = table.occurring(subset);
            for (std::size_t c = 0; c < seen.size(); ++c) {
                if (seen[c]) continue;
                // Minimal iff every sub-event one entry shorter is possible.
                bool minimal = true;
                if (k > 1) {
                    std::vector<std::size_t> digits(k);
                    std::size_t rest = c;
                    for (std::size_t j = k; j-- > 0;) {
                        const auto r = model.variables()[subset[j]].outcomes.size();
                        digits[j] = rest % r;
                        rest /= r;
                    }
                    for (std::size_t drop = 0; drop < k && minimal; ++drop) {
                        std::vector<std::size_t> sub;
                        std::size_t sub_code = 0;
                        for (std::size_t j = 0; j < k; ++j) {
                            if (j == drop) continue;
                            sub.push_back(subset[j]);
                            sub_code = sub_code * model.variables()[subset[j]].outcomes.size() + digits[j];
                        }
                        if (!table.occurring(sub)[sub_code]) minimal = false;
                    }
                }
                if (minimal) out.push_back(table.decode(subset, c));
            }
        } while (next_combination(subset, n));
    }
    return out;
}

std::optional<int> implied_product(const ClassicalModel& model, std::span<const ObservableId> ids) {
    std::vector<std::size_t> idx;
    for (const auto& id : ids) {
        const auto i = model.index_of(id);
        if (!is_plus_minus(model.variables()[i])) {
            throw Error(ErrorCode::NotDichotomic, "'" + id + "' is not +-1 valued");
        }
        idx.push_back(i);
    }
    std::optional<int> common;
    for (const auto& a : model.support()) {
        int prod = 1;
        for (auto i : idx) prod *= a.values[i];
        if (!common) {
            common = prod;
        } else if (*common != prod) {
            return std::nullopt;
        }
    }
    return common;
}

std::pair<double, double> functional_bounds(std::span<const Variable> variables,
                                            std::span<const Assignment> assignments, std::span<const Term> terms) {
    std::vector<std::pair<std::size_t, std::size_t>> idx;
    for (const auto& t : terms) {
        const auto a = find_variable(variables, t.a);
        const auto b = find_variable(variables, t.b);
        if (!is_plus_minus(variables[a]) || !is_plus_minus(variables[b])) {
            throw Error(ErrorCode::NotDichotomic, "functional term over a variable that is not +-1 valued");
        }
        idx.emplace_back(a, b);
    }
    if (assignments.empty()) throw Error(ErrorCode::InvalidEvent, "no assignments to bound over");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& a : assignments) {
        double s = 0.0;
        for (std::size_t k = 0; k < terms.size(); ++k) {
            s += terms[k].coefficient * a.values[idx[k].first] * a.values[idx[k].second];
        }
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    return {lo, hi};
}

bool check_derived_inequality(std::span<const Variable> variables, std::span<const Assignment> assignments,
                              const ChshRoles& roles) {
    const auto x1 = find_variable(variables, roles.x1);
    const auto x2 = find_variable(variables, roles.x2);
    const auto y1 = find_variable(variables, roles.y1);
    const auto y2 = find_variable(variables, roles.y2);
    for (const auto& a : assignments) {
        const auto& v = a.values;
        const int lhs = (v[x1] == v[x2] && v[x2] == v[y2]) ? 1 : 0;
        const int rhs = (v[x1] == v[y1] ? 1 : 0) + (v[x1] == v[y2] ? 1 : 0) + (v[x2] == v[y1] ? 1 : 0);
        if (lhs > rhs) return false;
    }
    return true;
}

}  // namespace bks
