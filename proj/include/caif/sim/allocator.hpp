#pragma once

#include <map>

#include "caif/sim/types.hpp"

namespace caif::sim {

// PRB bounds implied by a ratio: floor(pct * total_prb / 100).
int ratio_floor_prb(int pct, int total_prb);

// Two-level RRM policy ratio allocation for one cell.
//
// Every slice with positive demand first receives its guaranteed minimum. The
// remaining PRBs are water-filled in proportion to each slice's residual
// demand (in PRBs, ceil(demand / rate) minus what it already holds), never
// exceeding the slice's maximum or its demand. Integer remainders go one PRB
// at a time in ascending slice id. Slices absent from `demands_mbps` or with
// zero demand receive nothing.
std::map<int, int> allocate_prb(const Cell& cell, const std::map<int, double>& demands_mbps,
                                const std::map<int, double>& rates_mbps_per_prb);

}  // namespace caif::sim
