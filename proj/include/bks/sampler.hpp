#pragma once

// Seeded Monte Carlo measurement records. The generator is SplitMix64
// (Steele, Lea & Flood 2014) with the reference constants; a uniform draw in
// [0,1) takes the top 53 bits of one output. Seeds therefore reproduce the
// same counts in any implementation that follows this contract.

#include <cstdint>
#include <string>
#include <vector>

#include "bks/scenario.hpp"

namespace bks {

class SplitMix64 {
public:
    static constexpr const char* kName = "splitmix64/v1";

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();
    /// Uniform double in [0, 1) from the top 53 bits of next().
    double uniform();
    /// Independent child stream seeded from this stream's next output.
    SplitMix64 split() { return SplitMix64(next()); }

private:
    std::uint64_t state_;
};

struct SampleRun {
    std::vector<ObservableId> context;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    /// All outcome tuples in lexicographic order, with their exact
    /// probabilities and the observed counts.
    std::vector<std::vector<int>> tuples;
    std::vector<double> probabilities;
    std::vector<std::uint64_t> counts;

    std::string csv() const;
    std::string json() const;
};

/// Draws shots i.i.d. outcome tuples from the exact joint distribution of the
/// context via inverse CDF.
SampleRun sample(const Scenario& scenario, const Context& context, std::uint64_t shots, std::uint64_t seed);

}  // namespace bks
