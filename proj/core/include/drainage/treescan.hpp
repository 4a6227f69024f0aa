#pragma once

#include <cstdint>
#include <vector>

#include "drainage/joint.hpp"
#include "drainage/statutil.hpp"

namespace drainage {

/// Start window for the component probe: all open vertices with spatial
/// coordinates in [-half_width, half_width]^{d-1} at level 0, traced up
/// to `height`.
struct BoxSpec {
    ModelParams params;
    std::int64_t half_width = 10;
    std::int64_t height = 1000;
};

/// Connected components among the traced paths: the count after the full
/// height, plus the count as a function of intermediate heights
/// (coalescence only merges, so it is non-increasing).
struct ComponentReport {
    long starts = 0;
    long components_at_top = 0;
    std::vector<std::pair<std::int64_t, long>> histogram;  // (height, components)
};
ComponentReport component_count(const BoxSpec& box);

/// Fraction of pair runs, started with the given spatial gap, that have
/// not coalesced once the lagging walker passes `height`.
struct SurvivalReport {
    std::int64_t spacing = 0;
    std::int64_t height = 0;
    long survived = 0;
    long n = 0;
    Proportion fraction;  // with 99% Wilson interval
};
SurvivalReport pair_survival(const ModelParams& params, std::int64_t spacing,
                             std::int64_t height, long n_runs, int threads = 1);

}  // namespace drainage
