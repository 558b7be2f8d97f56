#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "bks/error.hpp"
#include "bks/lhv.hpp"
#include "bks/scenario.hpp"

namespace {

using bks::Assignment;
using bks::Constraint;
using bks::ErrorCode;
using bks::Event;
using bks::PartitionUnity;
using bks::ProductEquals;
using bks::Variable;

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const bks::Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::InternalConsistency;
}

std::vector<Variable> binary(std::initializer_list<const char*> ids) {
    std::vector<Variable> out;
    for (const char* id : ids) out.push_back({id, {0, 1}});
    return out;
}

std::vector<Variable> pm(std::initializer_list<const char*> ids) {
    std::vector<Variable> out;
    for (const char* id : ids) out.push_back({id, {-1, 1}});
    return out;
}

bks::ClassicalModel model_of(const bks::Scenario& sc) {
    const auto vars = sc.variables();
    return bks::build_model(vars, bks::enumerate_assignments(vars), sc.constraints());
}

std::string bits(const Assignment& a) {
    std::string s;
    for (int v : a.values) s += static_cast<char>('0' + v);
    return s;
}

TEST(Enumerate, Counts) {
    EXPECT_EQ(bks::enumerate_assignments(bks::builtin_hardy().variables()).size(), 32u);
    EXPECT_EQ(bks::enumerate_assignments(bks::builtin_mermin().variables()).size(), 1024u);
    EXPECT_EQ(bks::enumerate_assignments(bks::builtin_chsh().variables()).size(), 16u);
}

TEST(Enumerate, LexicographicFirstVariableSlowest) {
    const auto all = bks::enumerate_assignments(pm({"b", "a"}));
    ASSERT_EQ(all.size(), 4u);
    EXPECT_EQ(all[0].values, (std::vector<int>{-1, -1}));
    EXPECT_EQ(all[1].values, (std::vector<int>{-1, 1}));
    EXPECT_EQ(all[3].values, (std::vector<int>{1, 1}));
}

TEST(Enumerate, TooLarge) {
    std::vector<Variable> vars;
    for (int i = 0; i < 21; ++i) vars.push_back({"v" + std::to_string(i), {0, 1}});
    EXPECT_EQ(code_of([&] { bks::enumerate_assignments(vars); }), ErrorCode::TooLarge);
}

TEST(HardyModel, SupportMatchesBruteForce) {
    const auto model = model_of(bks::builtin_hardy());
    // Independent oracle: exactly one event of each partition holds.
    std::set<std::string> oracle;
    for (int m = 0; m < 32; ++m) {
        int v[6];
        for (int k = 1; k <= 5; ++k) v[k] = (m >> (5 - k)) & 1;
        const bool e1 = (v[1] == 0 && v[2] == 1) + (v[2] == 0 && v[3] == 1) == 1;
        const bool e2 = (v[3] == 0 && v[4] == 1) + (v[4] == 0 && v[5] == 1) == 1;
        if (e1 && e2) oracle.insert(std::to_string(v[1]) + std::to_string(v[2]) + std::to_string(v[3]) +
                                    std::to_string(v[4]) + std::to_string(v[5]));
    }
    EXPECT_EQ(oracle, (std::set<std::string>{"01010", "01011", "01001", "01101", "00101", "10101"}));
    std::set<std::string> got;
    for (const auto& a : model.support()) got.insert(bits(a));
    EXPECT_EQ(got, oracle);
    EXPECT_EQ(model.support().size(), 6u);
}

TEST(HardyModel, EachSupportAssignmentHitsExactlyOneEventPerPartition) {
    const auto sc = bks::builtin_hardy();
    const auto model = model_of(sc);
    const auto vars = sc.variables();
    for (const auto& a : model.support()) {
        for (const auto& c : sc.constraints()) {
            const auto* pu = std::get_if<PartitionUnity>(&c);
            ASSERT_NE(pu, nullptr);
            int hits = 0;
            for (const auto& e : pu->events) hits += bks::satisfies(vars, a, e);
            EXPECT_EQ(hits, 1);
        }
    }
}

TEST(HardyModel, EventPossibility) {
    const auto model = model_of(bks::builtin_hardy());
    EXPECT_FALSE(bks::event_possible(model, Event({{"P1", 1}, {"P5", 0}})));
    EXPECT_FALSE(bks::event_possible(model, Event({{"P2", 0}, {"P5", 0}})));
    EXPECT_TRUE(bks::event_possible(model, Event({{"P1", 0}, {"P2", 1}})));
    EXPECT_EQ(code_of([&] { bks::event_possible(model, Event({{"P9", 0}})); }), ErrorCode::UnknownObservable);
}

std::set<std::string> names(const std::vector<Event>& events) {
    std::set<std::string> out;
    for (const auto& e : events) out.insert(e.str());
    return out;
}

// Order-insensitive key for an event.
std::string key(const Event& e) {
    auto entries = e.entries();
    std::sort(entries.begin(), entries.end(), [](const auto& l, const auto& r) { return l.id < r.id; });
    return Event(entries).str();
}

TEST(HardyModel, DerivedForbiddenPairsAreTheSixConsequences) {
    const auto sc = bks::builtin_hardy();
    const auto model = model_of(sc);
    const std::set<std::string> six{"P(P1=1,P5=0)", "P(P1=1,P3=0)", "P(P1=1,P4=1)",
                                    "P(P2=0,P4=1)", "P(P2=0,P5=0)", "P(P3=1,P5=0)"};
    EXPECT_EQ(names(bks::derived_forbidden_events(model, 2, sc.constraints())), six);
    // The raw list also holds the four restatements of a single partition event.
    const auto all = names(bks::forbidden_events(model, 2));
    EXPECT_EQ(all.size(), 10u);
    for (const auto& s : six) EXPECT_TRUE(all.count(s)) << s;
    for (const char* s : {"P(P1=1,P2=1)", "P(P2=0,P3=0)", "P(P3=1,P4=1)", "P(P4=0,P5=0)"}) {
        EXPECT_TRUE(all.count(s)) << s;
    }
}

TEST(Forbidden, UnconstrainedModelIsEmpty) {
    const auto vars = binary({"a", "b", "c"});
    const auto model = bks::build_model(vars, bks::enumerate_assignments(vars), {});
    EXPECT_EQ(model.support().size(), 8u);
    for (std::size_t k = 1; k <= 3; ++k) EXPECT_TRUE(bks::forbidden_events(model, k).empty());
}

TEST(Forbidden, MonotoneUnderExtension) {
    for (const auto& sc : {bks::builtin_hardy(), bks::builtin_chsh()}) {
        const auto model = model_of(sc);
        const auto& vars = model.variables();
        for (std::size_t k = 1; k < vars.size(); ++k) {
            std::set<std::string> bigger;
            for (const auto& e : bks::forbidden_events(model, k + 1)) bigger.insert(key(e));
            for (const auto& e : bks::forbidden_events(model, k)) {
                for (const auto& v : vars) {
                    if (e.value_of(v.id)) continue;
                    for (int x : v.outcomes) {
                        auto outs = e.entries();
                        outs.push_back({v.id, x});
                        EXPECT_TRUE(bigger.count(key(Event(outs)))) << Event(outs).str();
                    }
                }
            }
        }
    }
}

TEST(Forbidden, ClassicalMonotonicityRandomEvents) {
    std::mt19937_64 rng(31);
    const auto model = model_of(bks::builtin_mermin());
    const auto& vars = model.variables();
    for (int t = 0; t < 2000; ++t) {
        std::vector<bks::Outcome> outs;
        for (const auto& v : vars) {
            if (rng() % 2) outs.push_back({v.id, v.outcomes[rng() % 2]});
        }
        if (outs.size() < 2) continue;
        const Event big(outs);
        outs.pop_back();
        const Event small(outs);
        if (bks::event_possible(model, big)) {
            EXPECT_TRUE(bks::event_possible(model, small));
        }
    }
}

TEST(MerminModel, SupportAndSixPointEvent) {
    const auto model = model_of(bks::builtin_mermin());
    EXPECT_EQ(model.total_assignments(), 1024u);
    EXPECT_EQ(model.support().size(), 64u);
    const Event six_point({{"gamma", 1}, {"delta", 1}, {"zeta", 1}, {"eta", 1}, {"iota", -1}, {"kappa", 1}});
    EXPECT_FALSE(bks::event_possible(model, six_point));
    EXPECT_TRUE(names(bks::forbidden_events(model, 6)).count(six_point.str()));
}

TEST(MerminModel, ImpliedProducts) {
    const auto model = model_of(bks::builtin_mermin());
    const std::vector<bks::ObservableId> horizontal{"beta", "gamma", "delta", "epsilon"};
    EXPECT_EQ(bks::implied_product(model, horizontal), 1);
    const std::vector<bks::ObservableId> ag{"alpha", "gamma"};
    EXPECT_FALSE(bks::implied_product(model, ag).has_value());
}

TEST(MerminModel, ImpliedHorizontalProductIsProductOfTargets) {
    const auto base = bks::builtin_mermin();
    const auto vars = base.variables();
    std::vector<ProductEquals> lines;
    for (const auto& c : base.constraints()) lines.push_back(std::get<ProductEquals>(c));
    ASSERT_EQ(lines.size(), 4u);
    const auto all = bks::enumerate_assignments(vars);
    const std::vector<bks::ObservableId> horizontal{"beta", "gamma", "delta", "epsilon"};
    for (int mask = 0; mask < 16; ++mask) {
        std::vector<Constraint> cs;
        int expected = 1;
        for (int k = 0; k < 4; ++k) {
            auto line = lines[static_cast<std::size_t>(k)];
            line.target = (mask >> k & 1) ? -1 : 1;
            expected *= line.target;
            cs.emplace_back(line);
        }
        const auto model = bks::build_model(vars, all, cs);
        EXPECT_EQ(model.support().size(), 64u);
        EXPECT_EQ(bks::implied_product(model, horizontal), expected) << "mask " << mask;
    }
}

TEST(ImpliedProduct, RestatedConstraint) {
    const auto vars = pm({"a", "b"});
    const std::vector<Constraint> cs{ProductEquals{{"a", "b"}, 1}};
    const auto model = bks::build_model(vars, bks::enumerate_assignments(vars), cs);
    const std::vector<bks::ObservableId> ids{"a", "b"};
    EXPECT_EQ(bks::implied_product(model, ids), 1);
}

TEST(Validation, OverlapAndDomains) {
    const auto vars = binary({"a", "b", "c"});
    const PartitionUnity overlap{{Event({{"a", 1}}), Event({{"b", 1}})}};
    EXPECT_EQ(code_of([&] { bks::validate_constraint(vars, overlap); }), ErrorCode::OverlappingPartition);
    const PartitionUnity disjoint{{Event({{"a", 1}, {"b", 0}}), Event({{"b", 1}, {"c", 0}})}};
    EXPECT_NO_THROW(bks::validate_constraint(vars, disjoint));
    EXPECT_EQ(code_of([&] { bks::validate_constraint(vars, ProductEquals{{"a", "b"}, 1}); }),
              ErrorCode::NotDichotomic);
    EXPECT_EQ(code_of([&] { bks::validate_constraint(vars, PartitionUnity{{Event({{"z", 1}})}}); }),
              ErrorCode::UnknownObservable);
    EXPECT_EQ(code_of([&] { bks::validate_constraint(vars, PartitionUnity{{Event({{"a", 3}})}}); }),
              ErrorCode::BadOutcome);
}

TEST(Validation, EmptySupportIsAFinding) {
    const auto vars = pm({"a", "b"});
    const std::vector<Constraint> cs{ProductEquals{{"a", "b"}, 1}, ProductEquals{{"a", "b"}, -1}};
    const auto model = bks::build_model(vars, bks::enumerate_assignments(vars), cs);
    EXPECT_TRUE(model.unsatisfiable());
}

std::vector<bks::Term> chsh_terms() {
    return {{"X1", "Y1", 1.0}, {"X1", "Y2", 1.0}, {"X2", "Y1", 1.0}, {"X2", "Y2", -1.0}};
}

TEST(FunctionalBounds, Chsh) {
    const auto vars = pm({"X1", "X2", "Y1", "Y2"});
    const auto all = bks::enumerate_assignments(vars);
    EXPECT_EQ(bks::functional_bounds(vars, all, chsh_terms()), std::make_pair(-2.0, 2.0));
    const std::vector<bks::Term> one{{"X1", "Y1", 1.0}};
    EXPECT_EQ(bks::functional_bounds(vars, all, one), std::make_pair(-1.0, 1.0));
    const std::vector<bks::Term> doubled{{"X1", "Y1", 1.0}, {"X1", "Y1", 1.0}};
    EXPECT_EQ(bks::functional_bounds(vars, all, doubled), std::make_pair(-2.0, 2.0));
}

TEST(FunctionalBounds, RelabelAndSignFlipSymmetry) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    const auto vars = pm({"A", "B", "C", "D"});
    const auto all = bks::enumerate_assignments(vars);
    const char* ids[] = {"A", "B", "C", "D"};
    for (int t = 0; t < 100; ++t) {
        std::vector<bks::Term> terms;
        for (int k = 0; k < 4; ++k) {
            const char* a = ids[rng() % 4];
            const char* b = ids[rng() % 4];
            if (std::string(a) == b) continue;
            terms.push_back({a, b, coef(rng)});
        }
        if (terms.empty()) continue;
        const auto base = bks::functional_bounds(vars, all, terms);

        // Relabel: a permutation of ids, applied to the variables' order too.
        std::vector<std::string> perm(std::begin(ids), std::end(ids));
        std::shuffle(perm.begin(), perm.end(), rng);
        auto rename = [&](const std::string& s) { return perm[static_cast<std::size_t>(s[0] - 'A')]; };
        std::vector<bks::Term> relabeled;
        for (const auto& term : terms) relabeled.push_back({rename(term.a), rename(term.b), term.coefficient});
        std::vector<Variable> rvars;
        for (const auto& p : perm) rvars.push_back({p, {-1, 1}});
        const auto rb = bks::functional_bounds(rvars, bks::enumerate_assignments(rvars), relabeled);
        EXPECT_NEAR(rb.first, base.first, 1e-12);
        EXPECT_NEAR(rb.second, base.second, 1e-12);

        // Flip the sign of one variable and of every coefficient touching it.
        const std::string flip = ids[rng() % 4];
        std::vector<bks::Term> flipped;
        for (auto term : terms) {
            if (term.a == flip || term.b == flip) term.coefficient = -term.coefficient;
            flipped.push_back(term);
        }
        const auto fb = bks::functional_bounds(vars, all, flipped);
        EXPECT_NEAR(fb.first, base.first, 1e-12);
        EXPECT_NEAR(fb.second, base.second, 1e-12);
    }
}

TEST(DerivedInequality, HoldsOnAllSixteenVertices) {
    const auto vars = pm({"X1", "X2", "Y1", "Y2"});
    const auto all = bks::enumerate_assignments(vars);
    const bks::ChshRoles roles{"X1", "X2", "Y1", "Y2"};
    EXPECT_TRUE(bks::check_derived_inequality(vars, all, roles));
    // Independent vertex check.
    for (const auto& a : all) {
        const int x1 = a.values[0], x2 = a.values[1], y1 = a.values[2], y2 = a.values[3];
        const int lhs = (x1 == x2 && x2 == y2);
        const int rhs = (x1 == y1) + (x1 == y2) + (x2 == y1);
        EXPECT_LE(lhs, rhs);
        const std::vector<Assignment> one{a};
        EXPECT_TRUE(bks::check_derived_inequality(vars, one, roles));
    }
}

}  // namespace
