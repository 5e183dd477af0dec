#include "caif/pipeline/mock_backend.hpp"

#include <algorithm>
#include <stdexcept>

#include "caif/pipeline/phrase_parser.hpp"

namespace caif::pipeline {

using nlohmann::json;

std::string_view to_string(FaultKind kind) {
    switch (kind) {
        case FaultKind::Drop:              return "drop";
        case FaultKind::PerturbOnce:       return "perturb-once";
        case FaultKind::CorruptPersistent: return "corrupt-persistent";
        case FaultKind::GarbleOnce:        return "garble-once";
        case FaultKind::GarblePersistent:  return "garble-persistent";
    }
    return "?";
}

json perturbed_value(Field field, const StructuredIntent& intent, std::uint64_t seed) {
    const int bump = 1 + static_cast<int>(seed % 3);
    switch (field) {
        case Field::CellId:  return intent.cell_id.value_or(1) + bump;
        case Field::SliceId: return intent.slice_id.value_or(1) + bump;
        case Field::Metric:
            return std::string(to_string(intent.metric == Metric::UplinkThroughput ? Metric::DownlinkThroughput
                                                                                    : Metric::UplinkThroughput));
        case Field::Action:
            return std::string(to_string(intent.action == Action::Increase ? Action::Decrease : Action::Increase));
        case Field::MagnitudePct: {
            const double p = intent.magnitude_pct.value_or(10.0);
            const double delta = 5.0 + static_cast<double>(seed % 10);
            return p + delta <= 100.0 ? p + delta : p - delta;
        }
        case Field::DeadlineS: return intent.deadline_s.value_or(60) + 60 * (1 + static_cast<int>(seed % 5));
    }
    return nullptr;
}

json corrupted_value(Field field, std::uint64_t seed) {
    const auto pick = seed % 3;
    switch (field) {
        case Field::CellId:       return pick == 0 ? json("one") : pick == 1 ? json(-1) : json(0);
        case Field::SliceId:      return pick == 0 ? json("slice-x") : pick == 1 ? json(-2) : json(0);
        case Field::Metric:       return pick == 0 ? json("Sideways") : pick == 1 ? json(42) : json("Downlink");
        case Field::Action:       return pick == 0 ? json("Maybe") : pick == 1 ? json(1) : json("increase!");
        case Field::MagnitudePct: return pick == 0 ? json("twenty") : pick == 1 ? json(250) : json(-5);
        case Field::DeadlineS:    return pick == 0 ? json("soon") : pick == 1 ? json(0) : json(-300);
    }
    return nullptr;
}

void MockBackend::set_fault_plan(FaultPlan plan) {
    std::lock_guard lock(mu_);
    plan_ = std::move(plan);
}

void MockBackend::reset() {
    std::lock_guard lock(mu_);
    calls_.clear();
}

std::size_t MockBackend::calls(const std::string& session_id) const {
    std::lock_guard lock(mu_);
    auto it = calls_.find(session_id);
    return it == calls_.end() ? 0 : it->second;
}

std::string MockBackend::complete(const BackendRequest& request) {
    if (!request.conversation) throw std::invalid_argument("mock backend: request without conversation");
    if (request.kind == PromptKind::Evaluation) {
        if (!request.intent) throw std::invalid_argument("mock backend: evaluation without intent");
        return evaluate(request);
    }
    std::size_t index = 0;
    {
        std::lock_guard lock(mu_);
        index = calls_[request.conversation->session_id]++;
    }
    if (garbled(index)) return "Sure! Here is the intent you asked for: cell one, slice one.";
    if (request.kind == PromptKind::Profiling) return profile(request, index);
    if (!request.intent || !request.report) throw std::invalid_argument("mock backend: refinement without context");
    return refine(request, index);
}

bool MockBackend::garbled(std::size_t call_index) const {
    return std::any_of(plan_.faults.begin(), plan_.faults.end(), [&](const Fault& f) {
        return f.kind == FaultKind::GarblePersistent || (f.kind == FaultKind::GarbleOnce && call_index == 0);
    });
}

json MockBackend::apply_faults(json out, const StructuredIntent& clean, std::size_t call_index,
                               const std::set<Field>* touched) const {
    for (const auto& fault : plan_.faults) {
        const std::string key(field_name(fault.field));
        switch (fault.kind) {
            case FaultKind::Drop:
                if (call_index == 0) {
                    out[key] = nullptr;
                    out["provenance"].erase(key);
                }
                break;
            case FaultKind::PerturbOnce:
                if (call_index == 0 && clean.is_set(fault.field)) {
                    out[key] = perturbed_value(fault.field, clean, fault.seed);
                }
                break;
            case FaultKind::CorruptPersistent:
                if (clean.is_set(fault.field) && (!touched || touched->contains(fault.field))) {
                    out[key] = corrupted_value(fault.field, fault.seed + call_index);
                }
                break;
            case FaultKind::GarbleOnce:
            case FaultKind::GarblePersistent:
                break;
        }
    }
    return out;
}

std::string MockBackend::profile(const BackendRequest& r, std::size_t call_index) const {
    const StructuredIntent clean = extract_conversation(*r.conversation);
    return apply_faults(intent_to_json(clean), clean, call_index, nullptr).dump();
}

std::string MockBackend::refine(const BackendRequest& r, std::size_t call_index) const {
    const StructuredIntent evidence = extract_conversation(*r.conversation);
    const auto flagged = r.report->flagged();
    StructuredIntent out = *r.intent;
    for (Field f : flagged) {
        if (evidence.is_set(f)) {
            out.copy_field(f, evidence);
        } else {
            out.clear(f);
        }
    }
    return apply_faults(intent_to_json(out), out, call_index, &flagged).dump();
}

std::string MockBackend::evaluate(const BackendRequest& r) const {
    const StructuredIntent evidence = extract_conversation(*r.conversation);
    const StructuredIntent& candidate = *r.intent;
    EvaluationReport report;
    for (Field f : kAllFields) {
        if (!candidate.is_set(f)) {
            report.missing_fields.push_back(f);
            continue;
        }
        if (!evidence.is_set(f)) {
            report.violations.push_back({f, std::nullopt, "value is not evidenced anywhere in the conversation"});
            continue;
        }
        if (!candidate.same_value(f, evidence)) {
            const int turn = evidence.provenance.at(f);
            report.violations.push_back({f, turn,
                                         "extracted " + candidate.value_text(f) + " but turn " +
                                             std::to_string(turn) + " states " + evidence.value_text(f)});
        }
    }
    report.seal();
    return report_to_json(report).dump();
}

}  // namespace caif::pipeline
