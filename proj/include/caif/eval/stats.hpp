#pragma once

#include <span>
#include <stdexcept>

#include <json.hpp>

namespace caif::eval {

class InvalidCounts : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct CiResult {
    long successes = 0;
    long trials = 0;
    double point_pct = 0.0;
    double lo_pct = 0.0;
    double hi_pct = 0.0;
};

nlohmann::json ci_to_json(const CiResult& ci);

// Two-sided standard normal quantile for the given confidence (0.95 -> 1.95996).
double z_for_confidence(double confidence);

// Wilson score interval, in percent. Throws InvalidCounts unless
// 0 <= successes <= trials and trials >= 1.
CiResult wilson_ci(long successes, long trials, double confidence = 0.95);

struct MeanCi {
    std::size_t n = 0;
    double mean = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

// Normal-approximation interval on the mean; a single sample gives a zero-width interval.
MeanCi mean_ci(std::span<const double> xs, double confidence = 0.95);

}  // namespace caif::eval
