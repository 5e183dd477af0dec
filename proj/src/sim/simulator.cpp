#include "caif/sim/simulator.hpp"

#include <algorithm>

#include "caif/sim/allocator.hpp"
#include "caif/sim/cqi.hpp"

namespace caif::sim {

Simulator::Simulator(Scenario scenario, std::uint64_t seed) : scenario_(std::move(scenario)), rng_(seed) {
    check_scenario(scenario_);
}

const Cell& Simulator::cell(int cell_id) const {
    const Cell* c = scenario_.find_cell(cell_id);
    if (!c) throw std::out_of_range("unknown cell " + std::to_string(cell_id));
    return *c;
}

std::vector<KpmReport> Simulator::tick() {
    std::vector<KpmReport> reports;
    std::uniform_real_distribution<double> jitter(-scenario_.demand_jitter_frac, scenario_.demand_jitter_frac);

    for (const auto& c : scenario_.cells) {
        std::map<int, double> demand;
        std::map<int, double> cqi_sum;
        std::map<int, int> ue_count;
        for (const auto& g : scenario_.ue_groups) {
            if (g.cell_id != c.cell_id) continue;
            std::uniform_int_distribution<int> draw(g.cqi_mean - g.cqi_jitter, g.cqi_mean + g.cqi_jitter);
            for (int u = 0; u < g.count; ++u) cqi_sum[g.slice_id] += std::clamp(draw(rng_), 1, 15);
            ue_count[g.slice_id] += g.count;
            demand[g.slice_id] += g.per_ue_demand_mbps() * g.count;
        }

        std::map<int, double> rates;
        std::map<int, double> avg_cqi;
        for (const auto& s : c.slices) {
            demand[s.slice_id] *= 1.0 + jitter(rng_);
            const int n = ue_count[s.slice_id];
            avg_cqi[s.slice_id] = n > 0 ? cqi_sum[s.slice_id] / n : 0.0;
            rates[s.slice_id] = n > 0 ? slice_rate_per_prb(avg_cqi[s.slice_id]) : 0.0;
            if (n == 0) demand[s.slice_id] = 0.0;
        }

        const auto prbs = allocate_prb(c, demand, rates);
        for (const auto& s : c.slices) {
            KpmReport r;
            r.tick = tick_;
            r.cell_id = c.cell_id;
            r.slice_id = s.slice_id;
            r.prb_used = prbs.at(s.slice_id);
            r.avg_cqi = avg_cqi[s.slice_id];
            r.demand_mbps = demand[s.slice_id];
            r.dl_throughput_mbps = std::min(r.demand_mbps, r.prb_used * rates[s.slice_id]);
            reports.push_back(r);
        }
    }
    ++tick_;
    return reports;
}

void Simulator::apply_ratio_control(int cell_id, int slice_id, RrmPolicyRatio ratio) {
    Cell* c = scenario_.find_cell(cell_id);
    if (!c) throw std::out_of_range("unknown cell " + std::to_string(cell_id));
    SliceConfig* s = c->find_slice(slice_id);
    if (!s) throw std::out_of_range("unknown slice " + std::to_string(slice_id) + " in cell " + std::to_string(cell_id));
    Cell candidate = *c;
    candidate.find_slice(slice_id)->ratio = ratio;
    check_cell_ratios(candidate);
    s->ratio = ratio;
}

RrmPolicyRatio Simulator::ratio(int cell_id, int slice_id) const {
    const SliceConfig* s = cell(cell_id).find_slice(slice_id);
    if (!s) throw std::out_of_range("unknown slice " + std::to_string(slice_id));
    return s->ratio;
}

std::map<int, RrmPolicyRatio> Simulator::cell_ratios(int cell_id) const {
    std::map<int, RrmPolicyRatio> out;
    for (const auto& s : cell(cell_id).slices) out[s.slice_id] = s.ratio;
    return out;
}

int Simulator::total_prb(int cell_id) const { return cell(cell_id).total_prb; }

}  // namespace caif::sim
