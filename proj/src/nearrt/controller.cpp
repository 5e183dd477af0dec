#include "caif/nearrt/controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace caif::nearrt {

void ControllerGains::check() const {
    if (!(k_p > 0.0)) throw std::invalid_argument("k_p must be positive");
    if (!(deadband_frac >= 0.0 && deadband_frac < 1.0)) throw std::invalid_argument("deadband_frac must be in [0, 1)");
    if (step_cap_pts < 1) throw std::invalid_argument("step_cap_pts must be >= 1");
    if (guard_band_pts < 0 || guard_band_pts > 100) throw std::invalid_argument("guard_band_pts must be in [0, 100]");
}

ControllerGains parse_gains(const nlohmann::json& doc) {
    ControllerGains g;
    g.k_p = doc.value("k_p", g.k_p);
    g.deadband_frac = doc.value("deadband_frac", g.deadband_frac);
    g.step_cap_pts = doc.value("step_cap_pts", g.step_cap_pts);
    g.guard_band_pts = doc.value("guard_band_pts", g.guard_band_pts);
    g.check();
    return g;
}

nlohmann::json gains_to_json(const ControllerGains& g) {
    return {{"k_p", g.k_p},
            {"deadband_frac", g.deadband_frac},
            {"step_cap_pts", g.step_cap_pts},
            {"guard_band_pts", g.guard_band_pts}};
}

double relative_error(double target_mbps, double measured_mbps) {
    return (target_mbps - measured_mbps) / target_mbps;
}

std::optional<sim::RrmPolicyRatio> control_step(const ControllerState& state, double measured_mbps) {
    const auto& g = state.gains;
    double e = relative_error(state.policy.target_throughput_mbps, measured_mbps);
    if (std::abs(e) <= g.deadband_frac) return std::nullopt;
    long delta = std::lround(g.k_p * e * 100.0);
    delta = std::clamp<long>(delta, -g.step_cap_pts, g.step_cap_pts);
    int max_pct = static_cast<int>(std::clamp<long>(state.current_ratio.max_ratio_pct + delta, 0, 100));
    int min_pct = std::max(0, max_pct - g.guard_band_pts);
    return sim::RrmPolicyRatio{min_pct, max_pct};
}

}  // namespace caif::nearrt
