#pragma once

#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <vector>

#include "caif/contract/types.hpp"
#include "caif/sim/types.hpp"

namespace caif::nearrt {

using contract::Scope;

inline constexpr std::size_t kDefaultMetricsCapacity = 3600;

// KPIMON's store: a ring of reports per (cell, slice), kept in tick order.
class MetricsDb {
public:
    explicit MetricsDb(std::size_t capacity_per_scope = kDefaultMetricsCapacity);

    void ingest(std::span<const sim::KpmReport> reports);
    void ingest(const sim::KpmReport& report);

    std::optional<sim::KpmReport> latest(Scope scope) const;
    std::vector<sim::KpmReport> reports(Scope scope) const;
    std::size_t capacity() const { return capacity_; }

private:
    std::size_t capacity_;
    mutable std::shared_mutex mu_;
    std::map<Scope, std::deque<sim::KpmReport>> rings_;
};

}  // namespace caif::nearrt
