#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace caif::sim {

enum class Service { eMBB, mMTC };
enum class Mobility { Fixed, RandomWalk };

std::string_view to_string(Service s);
std::string_view to_string(Mobility m);
std::optional<Service> service_from_string(std::string_view s);
std::optional<Mobility> mobility_from_string(std::string_view s);

// rRMPolicyMinRatio / rRMPolicyMaxRatio, in percent of the cell's PRBs.
struct RrmPolicyRatio {
    int min_ratio_pct = 0;
    int max_ratio_pct = 100;

    bool valid() const { return 0 <= min_ratio_pct && min_ratio_pct <= max_ratio_pct && max_ratio_pct <= 100; }
    bool operator==(const RrmPolicyRatio&) const = default;
};

struct SliceConfig {
    int slice_id = 0;
    Service service = Service::eMBB;
    RrmPolicyRatio ratio;
};

struct Cell {
    int cell_id = 0;
    int total_prb = 0;
    std::vector<SliceConfig> slices;

    const SliceConfig* find_slice(int slice_id) const;
    SliceConfig* find_slice(int slice_id);
};

struct UeGroup {
    std::string name;
    Mobility mobility = Mobility::Fixed;
    int count = 0;
    int cell_id = 0;
    int slice_id = 0;
    int qos_id = 0;
    bool gbr = false;
    double per_ue_target_mbps = 0.0;
    // Offered downlink load per UE; defaults to per_ue_target_mbps.
    std::optional<double> offered_load_mbps;
    int cqi_mean = 15;
    int cqi_jitter = 0;

    double per_ue_demand_mbps() const { return offered_load_mbps.value_or(per_ue_target_mbps); }
};

struct Scenario {
    std::string name;
    std::vector<Cell> cells;
    std::vector<UeGroup> ue_groups;
    int tick_s = 1;
    double demand_jitter_frac = 0.05;

    const Cell* find_cell(int cell_id) const;
    Cell* find_cell(int cell_id);
};

struct KpmReport {
    long tick = 0;
    int cell_id = 0;
    int slice_id = 0;
    double dl_throughput_mbps = 0.0;
    int prb_used = 0;
    double avg_cqi = 0.0;
    double demand_mbps = 0.0;

    bool operator==(const KpmReport&) const = default;
};

nlohmann::json kpm_to_json(const KpmReport& r);
KpmReport kpm_from_json(const nlohmann::json& doc);

class InvariantViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Checks ratio bounds and that the minimums of a cell sum to at most 100.
void check_cell_ratios(const Cell& cell);

// Full structural validation; throws InvariantViolation with the offending field.
void check_scenario(const Scenario& scenario);

}  // namespace caif::sim
