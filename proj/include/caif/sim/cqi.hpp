#pragma once

#include <array>

namespace caif::sim {

// 4-bit CQI spectral efficiency (bits/s/Hz), CQI 1..15.
inline constexpr std::array<double, 15> kCqiEfficiency = {
    0.1523, 0.2344, 0.3770, 0.6016, 0.8770, 1.1758, 1.4766, 1.9141,
    2.4063, 2.7305, 3.3223, 3.9023, 4.5234, 5.1152, 5.5547,
};

// One PRB spans 12 subcarriers of 15 kHz.
inline constexpr double kPrbBandwidthMhz = 0.18;

// Spectral efficiency at a possibly fractional CQI (linear interpolation).
// Throws std::out_of_range outside [1, 15].
double cqi_efficiency(double avg_cqi);

// Mbps carried by one PRB at the given average CQI.
double slice_rate_per_prb(double avg_cqi);

}  // namespace caif::sim
