#include "bks/sampler.hpp"

#include <algorithm>

#include <json.hpp>

#include "bks/error.hpp"

namespace bks {

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

namespace {

std::string tuple_text(const std::vector<int>& t) {
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(t[i]);
    }
    return s + ")";
}

}  // namespace

std::string SampleRun::csv() const {
    std::string out = "outcome_tuple,count\n";
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        out += "\"" + tuple_text(tuples[i]) + "\"," + std::to_string(counts[i]) + "\n";
    }
    return out;
}

std::string SampleRun::json() const {
    nlohmann::ordered_json j;
    j["generator"] = SplitMix64::kName;
    j["seed"] = seed;
    j["shots"] = shots;
    j["context"] = context;
    auto& rows = j["counts"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        nlohmann::ordered_json row;
        row["outcome"] = tuples[i];
        row["count"] = counts[i];
        row["probability"] = probabilities[i];
        rows.push_back(std::move(row));
    }
    return j.dump(2) + "\n";
}

SampleRun sample(const Scenario& scenario, const Context& context, std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) throw Error(ErrorCode::InvalidEvent, "shots must be at least 1");
    const auto& reg = scenario.observables();
    std::vector<Variable> vars;
    for (const auto& id : context.members()) {
        const auto oc = reg.at(id).outcomes();
        vars.push_back({id, {oc[0], oc[1]}});
    }
    std::vector<Assignment> tuples;
    try {
        tuples = enumerate_assignments(vars);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::TooLarge) throw Error(ErrorCode::TooLarge, "too many outcome tuples in context");
        throw;
    }

    SampleRun run;
    run.context = context.members();
    run.shots = shots;
    run.seed = seed;
    std::vector<double> cumulative;
    double acc = 0.0;
    for (auto& t : tuples) {
        std::vector<Outcome> entries;
        for (std::size_t i = 0; i < vars.size(); ++i) entries.push_back({vars[i].id, t.values[i]});
        const double p = joint_probability(scenario.state(), Event(std::move(entries)), reg, scenario.tolerance());
        acc += p;
        cumulative.push_back(acc);
        run.probabilities.push_back(p);
        run.tuples.push_back(std::move(t.values));
    }
    run.counts.assign(run.tuples.size(), 0);
    SplitMix64 rng(seed);
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = rng.uniform() * acc;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end()) --it;
        ++run.counts[static_cast<std::size_t>(it - cumulative.begin())];
    }
    return run;
}

}  // namespace bks
