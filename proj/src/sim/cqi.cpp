#include "caif/sim/cqi.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace caif::sim {

double cqi_efficiency(double avg_cqi) {
    if (!(avg_cqi >= 1.0 && avg_cqi <= 15.0)) {
        throw std::out_of_range("CQI must be within [1, 15], got " + std::to_string(avg_cqi));
    }
    const double lower = std::floor(avg_cqi);
    const auto i = static_cast<std::size_t>(lower) - 1;
    if (i + 1 >= kCqiEfficiency.size()) return kCqiEfficiency.back();
    const double frac = avg_cqi - lower;
    return kCqiEfficiency[i] + frac * (kCqiEfficiency[i + 1] - kCqiEfficiency[i]);
}

double slice_rate_per_prb(double avg_cqi) { return kPrbBandwidthMhz * cqi_efficiency(avg_cqi); }

}  // namespace caif::sim
