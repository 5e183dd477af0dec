#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "caif/sim/types.hpp"

namespace caif::sim {

// Discrete-time RAN: one call to tick() advances the clock by tick_s seconds
// and returns one KpmReport per (cell, slice), in scenario order.
//
// Per tick and cell, every UE draws a CQI uniformly from cqi_mean ± cqi_jitter
// (clipped to 1..15); slice demand is the summed offered load scaled by one
// uniform factor in 1 ± demand_jitter_frac; PRBs come from allocate_prb and
// throughput is min(demand, prb * rate_per_prb(avg CQI)).
class Simulator {
public:
    Simulator(Scenario scenario, std::uint64_t seed);

    std::vector<KpmReport> tick();

    // Takes effect from the next tick and persists until overwritten. Throws
    // InvariantViolation (state unchanged) if the ratio is invalid on its own
    // or pushes the cell's minimums above 100%, and std::out_of_range for an
    // unknown cell/slice.
    void apply_ratio_control(int cell_id, int slice_id, RrmPolicyRatio ratio);

    RrmPolicyRatio ratio(int cell_id, int slice_id) const;
    std::map<int, RrmPolicyRatio> cell_ratios(int cell_id) const;
    int total_prb(int cell_id) const;

    // Ticks completed so far; also the tick number of the next report batch.
    long current_tick() const { return tick_; }
    const Scenario& scenario() const { return scenario_; }

private:
    const Cell& cell(int cell_id) const;

    Scenario scenario_;
    std::mt19937_64 rng_;
    long tick_ = 0;
};

}  // namespace caif::sim
