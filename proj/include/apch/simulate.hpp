#pragma once

#include "apch/volmodel.hpp"

#include <cstdint>
#include <vector>

namespace apch {

struct Segment {
    std::size_t length = 0;
    ParamVector theta;
};

/// Piecewise-constant parameter path: theta jumps at segment boundaries while
/// the variance recursion carries its state through them.
struct Scenario {
    ModelSpec spec;
    std::vector<Segment> segments;

    std::size_t total_length() const;
    void validate() const;
};

struct ScenarioResult {
    ReturnSeries y;
    VolatilityPath sigma2;
    std::vector<std::size_t> break_indices; // cumulative segment lengths
    std::vector<int> regime;                // segment index per observation
};

/// Simulates the scenario from one seeded stream. sigma2 evolves continuously
/// through breaks (only theta jumps); the true path and break positions are
/// returned for evaluation.
ScenarioResult generate(const Scenario& scenario, std::uint64_t seed);

/// The two change-point designs used in the simulation study: GARCH with
/// (alpha, beta) fixed at (0.2, 0.1) or (0.2, 0.7), 1000 observations, a
/// 500-observation stable head and a 250-observation stable tail with omega
/// jumps in between. The omega levels between head and tail are project
/// defaults, not published values.
enum class ScenarioKind { LowGarchEffect, HighGarchEffect };

Scenario paper_scenario(ScenarioKind kind);

} // namespace apch
