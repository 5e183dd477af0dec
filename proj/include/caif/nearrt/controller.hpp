#pragma once

#include <optional>

#include <json.hpp>

#include "caif/ric/a1_policy.hpp"
#include "caif/sim/types.hpp"

namespace caif::nearrt {

struct ControllerGains {
    double k_p = 0.5;
    double deadband_frac = 0.05;
    int step_cap_pts = 10;
    int guard_band_pts = 10;

    // Throws std::invalid_argument.
    void check() const;
};

ControllerGains parse_gains(const nlohmann::json& doc);
nlohmann::json gains_to_json(const ControllerGains& g);

struct ControllerState {
    ric::A1Policy policy;
    sim::RrmPolicyRatio current_ratio;
    ControllerGains gains;
};

// Relative error (G - T) / G.
double relative_error(double target_mbps, double measured_mbps);

// One proportional step on the max ratio; min trails max by the guard band.
// nullopt when the error is inside the deadband.
std::optional<sim::RrmPolicyRatio> control_step(const ControllerState& state, double measured_mbps);

}  // namespace caif::nearrt
