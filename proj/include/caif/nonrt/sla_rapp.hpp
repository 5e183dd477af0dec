#pragma once

#include <stdexcept>
#include <string>

#include "caif/nonrt/perf_store.hpp"
#include "caif/pipeline/intent.hpp"

namespace caif::nonrt {

using pipeline::Action;

class NonPositiveCurrent : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NoData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoHistory : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr long kDefaultWindowS = 60;

// current * (1 +/- pct/100), rounded half-up to whole Mbps.
double derive_target(double current_mbps, Action action, double pct);

// Mean throughput over rows newer than (latest timestamp - window_s).
double current_throughput(const PerfStore& store, int cell_id, int slice_id, long window_s = kDefaultWindowS);

struct Feasibility {
    bool feasible = false;
    double achievable_max_mbps = 0.0;
    std::string reason;
};

// Best capacity ever observed on the scope's cell: total PRB x rate at the
// row's CQI, maximised over every row of that cell with a usable CQI.
double achievable_max(const PerfStore& store, int cell_id);

Feasibility feasibility_check(const PerfStore& store, Scope scope, double target_mbps);

}  // namespace caif::nonrt
