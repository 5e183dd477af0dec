#include "caif/eval/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>

#include "caif/util/files.hpp"

namespace caif::eval {

using pipeline::Action;
using pipeline::Field;
using pipeline::Metric;
using pipeline::StructuredIntent;

namespace {

// Fixed-seed helpers so output does not depend on the standard library's
// distribution implementations.
struct Rng {
    std::mt19937_64 g;
    explicit Rng(std::uint64_t seed) : g(seed) {}
    int range(int lo, int hi) { return lo + static_cast<int>(g() % static_cast<std::uint64_t>(hi - lo + 1)); }
    template <typename T>
    const T& pick(const std::vector<T>& xs) { return xs[g() % xs.size()]; }
    double unit() { return static_cast<double>(g() >> 11) * 0x1.0p-53; }
};

int pick_shots(Rng& rng, const ShotDistribution& dist) {
    double total = 0.0;
    for (double w : dist) total += w;
    double u = rng.unit() * total;
    for (int k = 0; k < 5; ++k) {
        if (u < dist[k]) return k + 1;
        u -= dist[k];
    }
    return 5;
}

const std::vector<std::string> kIncreaseVerbs = {"increase", "raise", "boost", "improve", "enhance"};
const std::vector<std::string> kDecreaseVerbs = {"decrease", "reduce", "lower", "cut", "throttle"};
const std::vector<std::string> kMetricPhrases = {"downlink throughput", "the downlink throughput", "DL throughput",
                                                 "the DL throughput"};
const std::vector<std::string> kLeadIns = {"", "Please ", "I need to ", "Can you ", "We want to "};
const std::vector<std::string> kScopeLeads = {"This is for", "Apply it to", "Target", "It concerns", "Use"};

std::string deadline_phrase(Rng& rng, int seconds) {
    if (seconds % 3600 == 0 && rng.range(0, 1) == 0) {
        int h = seconds / 3600;
        return "in " + std::to_string(h) + (h == 1 ? " hour" : " hours");
    }
    if (seconds % 60 == 0 && rng.range(0, 3) != 0) {
        int m = seconds / 60;
        return "in " + std::to_string(m) + (m == 1 ? " minute" : rng.range(0, 4) == 0 ? " mins" : " minutes");
    }
    return "in " + std::to_string(seconds) + " seconds";
}

std::string render_turn(Rng& rng, const StructuredIntent& gt, const std::vector<Field>& fields) {
    auto has = [&](Field f) { return std::find(fields.begin(), fields.end(), f) != fields.end(); };
    std::vector<std::string> parts;
    bool verb_led = false;
    if (has(Field::Action)) {
        const auto& verbs = *gt.action == Action::Increase ? kIncreaseVerbs : kDecreaseVerbs;
        parts.push_back(rng.pick(kLeadIns) + rng.pick(verbs));
        verb_led = true;
    }
    if (has(Field::Metric)) {
        parts.push_back(verb_led ? rng.pick(kMetricPhrases) : "the metric is " + rng.pick(kMetricPhrases));
        verb_led = true;
    }
    if (has(Field::MagnitudePct)) {
        std::ostringstream os;
        os << "by " << *gt.magnitude_pct << (rng.range(0, 2) == 0 ? " percent" : "%");
        parts.push_back(verb_led ? os.str() : "change it " + os.str());
        verb_led = true;
    }
    const bool scope = has(Field::SliceId) || has(Field::CellId);
    if (scope && !verb_led) parts.push_back(rng.pick(kScopeLeads));
    if (has(Field::SliceId)) {
        std::string s = rng.range(0, 2) == 0 ? "slice ID " : "slice ";
        parts.push_back((verb_led ? "for " : "") + s + std::to_string(*gt.slice_id));
    }
    if (has(Field::CellId)) {
        std::string c = rng.range(0, 2) == 0 ? "cell ID " : "cell ";
        const char* join = has(Field::SliceId) ? "of " : (verb_led ? "on " : "");
        parts.push_back(join + c + std::to_string(*gt.cell_id));
    }
    if (has(Field::DeadlineS)) {
        std::string d = deadline_phrase(rng, *gt.deadline_s);
        parts.push_back(parts.empty() ? "It should happen " + d : d);
    }
    std::string out;
    for (const auto& p : parts) {
        if (p.empty()) continue;
        if (!out.empty()) out += ' ';
        out += p;
    }
    if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out + ".";
}

StructuredIntent draw_truth(Rng& rng, const DatasetOptions& opts) {
    StructuredIntent gt;
    gt.cell_id = rng.range(1, opts.max_cell);
    gt.slice_id = rng.range(1, opts.max_slice);
    gt.metric = Metric::DownlinkThroughput;
    gt.action = rng.range(0, 1) == 0 ? Action::Increase : Action::Decrease;
    gt.magnitude_pct = static_cast<double>(rng.range(1, 18) * 5);
    static const std::vector<int> deadlines = {30, 45, 60, 90, 120, 180, 240, 300, 600, 900, 1200, 1800, 3600, 7200};
    gt.deadline_s = rng.pick(deadlines);
    return gt;
}

}  // namespace

std::vector<DatasetInstance> generate_dataset(std::uint64_t seed, const DatasetOptions& opts) {
    if (opts.max_cell < 1 || opts.max_slice < 1) throw std::invalid_argument("id ranges must be positive");
    Rng rng(seed);
    std::vector<DatasetInstance> out;
    out.reserve(opts.n);
    for (std::size_t i = 0; i < opts.n; ++i) {
        DatasetInstance inst;
        char buf[32];
        std::snprintf(buf, sizeof buf, "inst-%04zu", i);
        inst.id = buf;
        inst.shots = pick_shots(rng, opts.shots);
        inst.ground_truth = draw_truth(rng, opts);

        std::vector<Field> order(pipeline::kAllFields.begin(), pipeline::kAllFields.end());
        for (std::size_t j = order.size() - 1; j > 0; --j) std::swap(order[j], order[rng.g() % (j + 1)]);
        // k-1 distinct cut points in 1..5 split the shuffled fields into k non-empty turns.
        std::vector<int> cuts = {1, 2, 3, 4, 5};
        for (std::size_t j = cuts.size() - 1; j > 0; --j) std::swap(cuts[j], cuts[rng.g() % (j + 1)]);
        cuts.resize(static_cast<std::size_t>(inst.shots - 1));
        cuts.push_back(0);
        cuts.push_back(6);
        std::sort(cuts.begin(), cuts.end());

        for (int t = 0; t < inst.shots; ++t) {
            std::vector<Field> group(order.begin() + cuts[t], order.begin() + cuts[t + 1]);
            std::sort(group.begin(), group.end());
            for (Field f : group) inst.ground_truth.provenance[f] = t;
            inst.turns.push_back(render_turn(rng, inst.ground_truth, group));
        }
        out.push_back(std::move(inst));
    }
    return out;
}

pipeline::Conversation to_conversation(const DatasetInstance& inst) {
    pipeline::Conversation c;
    c.session_id = inst.id;
    for (const auto& t : inst.turns) c.add_operator(t, Timestamp{});
    return c;
}

nlohmann::json instance_to_json(const DatasetInstance& inst) {
    return {{"id", inst.id},
            {"shots", inst.shots},
            {"turns", inst.turns},
            {"ground_truth", pipeline::intent_to_json(inst.ground_truth)}};
}

DatasetInstance instance_from_json(const nlohmann::json& doc) {
    DatasetInstance inst;
    inst.id = doc.at("id").get<std::string>();
    inst.shots = doc.at("shots").get<int>();
    inst.turns = doc.at("turns").get<std::vector<std::string>>();
    auto parsed = pipeline::parse_intent_json(doc.at("ground_truth"));
    if (!parsed.issues.empty() || !parsed.intent.complete()) {
        throw std::invalid_argument("instance " + inst.id + ": ground truth is not fully populated");
    }
    if (inst.shots < 1 || inst.shots > 5 || static_cast<int>(inst.turns.size()) != inst.shots) {
        throw std::invalid_argument("instance " + inst.id + ": shots must equal the number of turns (1-5)");
    }
    inst.ground_truth = parsed.intent;
    return inst;
}

std::string dataset_to_ndjson(const std::vector<DatasetInstance>& data) {
    std::string out;
    for (const auto& inst : data) {
        out += instance_to_json(inst).dump();
        out += '\n';
    }
    return out;
}

std::vector<DatasetInstance> dataset_from_ndjson(std::string_view text) {
    std::vector<DatasetInstance> out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(instance_from_json(nlohmann::json::parse(line)));
        } catch (const std::exception& e) {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

void save_dataset(const std::filesystem::path& path, const std::vector<DatasetInstance>& data) {
    write_text_file(path, dataset_to_ndjson(data));
}

std::vector<DatasetInstance> load_dataset(const std::filesystem::path& path) {
    return dataset_from_ndjson(read_text_file(path));
}

}  // namespace caif::eval
