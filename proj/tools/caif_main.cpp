#include <csignal>
#include <filesystem>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "caif/contract/catalog.hpp"
#include "caif/contract/serialize.hpp"
#include "caif/contract/validate.hpp"
#include "caif/eval/dataset.hpp"
#include "caif/eval/harness.hpp"
#include "caif/eval/report.hpp"
#include "caif/gateway/config.hpp"
#include "caif/gateway/http_server.hpp"
#include "caif/gateway/replay.hpp"
#include "caif/gateway/system.hpp"
#include "caif/util/files.hpp"

#ifndef CAIF_DEFAULT_ASSET_DIR
#define CAIF_DEFAULT_ASSET_DIR "assets"
#endif

namespace fs = std::filesystem;
using namespace caif;

namespace {

gateway::HttpServer* g_server = nullptr;

void on_signal(int) {
    if (g_server) g_server->stop();
}

int cmd_serve(const fs::path& config_path, int port_override, bool manual_clock) {
    auto config = gateway::load_config(config_path);
    if (port_override > 0) config.port = port_override;
    auto system = gateway::System::from_config(config);
    gateway::HttpServer server(*system);
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    if (!manual_clock) system->start(std::chrono::milliseconds(config.tick_interval_ms));
    std::cerr << "listening on http://" << config.host << ":" << config.port << "\n";
    bool ok = server.listen(config.host, config.port);
    system->stop();
    g_server = nullptr;
    if (!ok) {
        std::cerr << "error: could not listen on " << config.host << ":" << config.port << "\n";
        return 1;
    }
    return 0;
}

struct EvalArgs {
    std::string mode = "caif";
    std::string dataset;
    std::uint64_t seed = 0;
    std::size_t n = 500;
    bool fault_matrix = false;
    double fault_rate = -1.0;
    int matrix_seeds = 10;
    std::string out;
    std::string csv;
    std::string records;
};

int cmd_eval(const EvalArgs& a, const fs::path& asset_dir) {
    auto mode = eval::mode_from_string(a.mode);
    if (!mode) {
        std::cerr << "error: --mode must be baseline or caif\n";
        return 2;
    }
    auto data = a.dataset.empty() ? eval::generate_dataset(a.seed, {.n = a.n}) : eval::load_dataset(a.dataset);
    if (data.empty()) {
        std::cerr << "error: empty dataset\n";
        return 1;
    }
    auto prompts = pipeline::PromptLibrary::load(asset_dir / "prompts");
    auto catalog = contract::load_catalog(asset_dir / "catalog.json");
    eval::Harness harness(prompts, catalog);

    std::vector<eval::RunRecord> records;
    if (a.fault_matrix) {
        records = eval::run_fault_matrix(harness, *mode, data, a.matrix_seeds);
    } else if (a.fault_rate >= 0.0) {
        records = eval::run_with_fault_rate(harness, *mode, data, a.fault_rate, a.seed);
    } else {
        records = harness.run_all(*mode, data);
    }
    auto report = eval::make_report(records);
    std::cout << eval::report_table(report);
    if (!a.out.empty()) write_text_file(a.out, eval::report_to_json(report).dump(2) + "\n");
    if (!a.csv.empty()) write_text_file(a.csv, eval::per_shot_csv(report));
    if (!a.records.empty()) {
        std::string nd;
        for (const auto& r : records) nd += eval::record_to_json(r).dump() + "\n";
        write_text_file(a.records, nd);
    }
    return 0;
}

int cmd_dataset(std::uint64_t seed, std::size_t n, const std::string& out) {
    eval::save_dataset(out, eval::generate_dataset(seed, {.n = n}));
    std::cerr << "wrote " << n << " instances to " << out << "\n";
    return 0;
}

int cmd_replay(const fs::path& script_path, const fs::path& config_path, const std::string& csv) {
    auto config = gateway::load_config(config_path);
    auto system = gateway::System::from_config(config);
    auto script = gateway::load_script(script_path);
    auto result = gateway::run_replay(*system, script);
    auto text = gateway::replay_csv(result);
    if (csv.empty()) {
        std::cout << text;
    } else {
        write_text_file(csv, text);
    }
    for (const auto& m : result.markers) {
        std::cerr << "t=" << m.tick << " " << m.label << " " << m.policy_id << " "
                  << contract::format_target(m.scope) << "\n";
    }
    for (const auto& e : result.errors) std::cerr << "error: " << e << "\n";
    return result.errors.empty() ? 0 : 1;
}

int cmd_validate(const fs::path& contract_path, const fs::path& catalog_path) {
    contract::IntentContract c;
    try {
        c = contract::parse_contract_text(read_text_file(contract_path));
    } catch (const contract::ParseError& e) {
        std::cerr << "parse error at " << e.path() << ": " << e.what() << "\n";
        return 1;
    }
    auto result = contract::validate_contract(c, contract::load_catalog(catalog_path));
    if (result.ok()) {
        std::cout << "OK " << c.id << "\n";
        return 0;
    }
    for (const auto& v : result.violations) std::cout << "violation: " << v.field << ": " << v.reason << "\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Contract-governed intent translation and slice assurance"};
    app.require_subcommand(1);
    std::string asset_dir = CAIF_DEFAULT_ASSET_DIR;
    app.add_option("--assets", asset_dir, "Asset directory (catalog, prompts, scenarios)");

    std::string config_path;
    int port = 0;
    bool manual_clock = false;
    auto* serve = app.add_subcommand("serve", "Run the gateway and simulator");
    serve->add_option("--config", config_path, "Gateway config file");
    serve->add_option("--port", port, "Override the configured port");
    serve->add_flag("--manual-clock", manual_clock, "Advance time only through POST /clock/step");

    EvalArgs ea;
    auto* ev = app.add_subcommand("eval", "Run the evaluation harness");
    ev->add_option("--mode", ea.mode, "baseline or caif")->check(CLI::IsMember({"baseline", "caif"}));
    ev->add_option("--dataset", ea.dataset, "NDJSON dataset; generated from --seed when omitted");
    ev->add_option("--seed", ea.seed, "Dataset / fault seed");
    ev->add_option("--n", ea.n, "Instances to generate");
    ev->add_flag("--fault-matrix", ea.fault_matrix, "Run the fault matrix instead of the clean dataset");
    ev->add_option("--matrix-seeds", ea.matrix_seeds, "Seeds per fault kind and field");
    ev->add_option("--fault-rate", ea.fault_rate, "Inject a random fault into this fraction of instances");
    ev->add_option("--out", ea.out, "Write the JSON report here");
    ev->add_option("--csv", ea.csv, "Write the per-shot CSV here");
    ev->add_option("--records", ea.records, "Write per-instance records (NDJSON) here");

    std::uint64_t ds_seed = 0;
    std::size_t ds_n = 500;
    std::string ds_out;
    auto* ds = app.add_subcommand("dataset", "Generate an intent dataset");
    ds->add_option("--seed", ds_seed);
    ds->add_option("--n", ds_n);
    ds->add_option("--out", ds_out)->required();

    std::string script, replay_csv;
    auto* rp = app.add_subcommand("replay", "Run a timed intent script and emit the time series");
    rp->add_option("--script", script)->required()->check(CLI::ExistingFile);
    rp->add_option("--config", config_path, "Gateway config file");
    rp->add_option("--csv", replay_csv, "Write the CSV here instead of stdout");

    std::string contract_path, catalog_path;
    auto* va = app.add_subcommand("validate", "Check a contract file offline");
    va->add_option("--contract", contract_path)->required()->check(CLI::ExistingFile);
    va->add_option("--catalog", catalog_path, "Specification catalog");

    CLI11_PARSE(app, argc, argv);

    const fs::path assets = asset_dir;
    if (config_path.empty()) config_path = (assets / "config.json").string();
    if (catalog_path.empty()) catalog_path = (assets / "catalog.json").string();

    try {
        if (*serve) return cmd_serve(config_path, port, manual_clock);
        if (*ev) return cmd_eval(ea, assets);
        if (*ds) return cmd_dataset(ds_seed, ds_n, ds_out);
        if (*rp) return cmd_replay(script, config_path, replay_csv);
        if (*va) return cmd_validate(contract_path, catalog_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
