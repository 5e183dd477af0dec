#include "caif/nonrt/sla_rapp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "caif/sim/cqi.hpp"

namespace caif::nonrt {

double derive_target(double current_mbps, Action action, double pct) {
    if (!(current_mbps > 0.0)) throw NonPositiveCurrent("current throughput must be positive");
    double factor = action == Action::Increase ? 1.0 + pct / 100.0 : 1.0 - pct / 100.0;
    double raw = current_mbps * factor;
    // Guard against 17.5 landing as 17.4999999 after the multiply.
    return std::floor(raw + 0.5 + 1e-9);
}

double current_throughput(const PerfStore& store, int cell_id, int slice_id, long window_s) {
    auto rows = store.rows(Scope{cell_id, slice_id});
    if (rows.empty()) throw NoData("no samples for " + contract::format_target({cell_id, slice_id}));
    long latest = rows.front().timestamp_s;
    for (const auto& r : rows) latest = std::max(latest, r.timestamp_s);
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : rows) {
        if (r.timestamp_s > latest - window_s) {
            sum += r.achieved_throughput_mbps;
            ++n;
        }
    }
    if (n == 0) throw NoData("empty window");
    return sum / static_cast<double>(n);
}

double achievable_max(const PerfStore& store, int cell_id) {
    auto prb = store.cell_prb(cell_id);
    if (!prb) throw NoHistory("unknown PRB budget for cell " + std::to_string(cell_id));
    auto rows = store.cell_rows(cell_id);
    double best = -1.0;
    for (const auto& r : rows) {
        if (r.avg_cqi < 1.0) continue;
        double cqi = std::min(r.avg_cqi, 15.0);
        best = std::max(best, *prb * sim::slice_rate_per_prb(cqi));
    }
    if (best < 0.0) throw NoHistory("no history for cell " + std::to_string(cell_id));
    return best;
}

Feasibility feasibility_check(const PerfStore& store, Scope scope, double target_mbps) {
    Feasibility out;
    out.achievable_max_mbps = achievable_max(store, scope.cell_id);
    std::ostringstream why;
    if (!(target_mbps > 0.0)) {
        why << "target " << target_mbps << " Mbps is not positive";
    } else if (target_mbps > out.achievable_max_mbps) {
        why << "target " << target_mbps << " Mbps exceeds achievable " << out.achievable_max_mbps << " Mbps";
    } else {
        out.feasible = true;
    }
    out.reason = why.str();
    return out;
}

}  // namespace caif::nonrt
