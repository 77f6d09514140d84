// Command-line front end: run simulations, sweep ablations, and analyze or
// export the JSONL event logs they produce.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "repunet/metrics.hpp"
#include "repunet/network_graph.hpp"
#include "repunet/run_config.hpp"
#include "repunet/sim_engine.hpp"

namespace {

using repunet::json;

repunet::RunConfig load_config(const std::string& path) {
    if (path.empty()) return repunet::RunConfig{};
    return repunet::RunConfig::load_file(path);
}

struct Overrides {
    std::string scenario;
    std::string ablation;
    std::string backend;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int agents = 0;
    int max_rounds = 0;
    double epsilon = -1.0;

    void apply(repunet::RunConfig& cfg) const {
        if (!scenario.empty()) cfg.scenario = repunet::scenario_from_string(scenario);
        if (!ablation.empty()) cfg.ablation = repunet::ablation_from_string(ablation);
        if (!backend.empty()) cfg.backend = repunet::backend_kind_from_string(backend);
        if (seed_set) cfg.seed = seed;
        if (agents > 0) cfg.n_agents = agents;
        if (max_rounds > 0) cfg.max_rounds = max_rounds;
        if (epsilon >= 0.0) cfg.epsilon = epsilon;
        cfg.validate();
    }
};

void add_override_flags(CLI::App* cmd, std::string& config_path, Overrides& ov) {
    cmd->add_option("-c,--config", config_path, "JSON config file (defaults apply otherwise)");
    cmd->add_option("--scenario", ov.scenario, "pd | participation | trading")
        ->check(CLI::IsMember({"pd", "participation", "trading"}));
    cmd->add_option("--ablation", ov.ablation, "full | no_gossip | no_reputation | no_repunet")
        ->check(CLI::IsMember({"full", "no_gossip", "no_reputation", "no_repunet"}));
    cmd->add_option("--backend", ov.backend, "scripted | remote")
        ->check(CLI::IsMember({"scripted", "remote"}));
    cmd->add_option_function<std::uint64_t>(
           "--seed", [&ov](std::uint64_t v) { ov.seed = v; ov.seed_set = true; },
           "run seed");
    cmd->add_option("--agents", ov.agents, "society size")->check(CLI::PositiveNumber);
    cmd->add_option("--max-rounds", ov.max_rounds, "round budget")->check(CLI::PositiveNumber);
    cmd->add_option("--epsilon", ov.epsilon, "stranger-exploration probability")
        ->check(CLI::Range(0.0, 1.0));
}

std::vector<repunet::SimEvent> read_log(const std::string& path) {
    return repunet::EventLog::read_jsonl_file(path);
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw repunet::ValidationError("cannot open output file '" + out_path + "'");
    out << text;
}

int cmd_run(const std::string& config_path, const Overrides& ov,
            const std::string& log_path, bool quiet) {
    repunet::RunConfig cfg = load_config(config_path);
    ov.apply(cfg);
    repunet::SimEngine engine(cfg);
    repunet::RunResult result = engine.run(log_path);
    if (!quiet) std::cout << result.summary().dump(2) << "\n";
    if (result.exit == repunet::RunExit::backend_abort)
        std::cerr << "run aborted: " << result.abort_reason << "\n";
    return result.exit_code();
}

int cmd_ablate(const std::string& config_path, const Overrides& ov, int repeats,
               const std::string& out_dir, bool as_json) {
    repunet::RunConfig base = load_config(config_path);
    ov.apply(base);

    static const repunet::Ablation kAll[] = {
        repunet::Ablation::full, repunet::Ablation::no_gossip,
        repunet::Ablation::no_reputation, repunet::Ablation::no_repunet};

    json doc = json::array();
    bool aborted = false;
    for (repunet::Ablation abl : kAll) {
        repunet::RunConfig cfg = base;
        cfg.ablation = abl;
        std::string log_dir;
        if (!out_dir.empty()) log_dir = out_dir + "/" + repunet::to_string(abl);
        std::vector<repunet::RunResult> runs =
            repunet::run_experiment(cfg, repeats, log_dir);

        double mean5 = 0.0;
        double mean_rounds = 0.0;
        int stabilized = 0;
        for (const auto& r : runs) {
            mean5 += repunet::mean_final_rate(r.cooperation_series, 5);
            mean_rounds += r.rounds;
            if (r.stabilized) ++stabilized;
            if (r.exit == repunet::RunExit::backend_abort) aborted = true;
        }
        mean5 /= repeats;
        mean_rounds /= repeats;

        doc.push_back(json{{"ablation", repunet::to_string(abl)},
                           {"runs", repeats},
                           {"mean_final_5_rate", mean5},
                           {"stabilized_runs", stabilized},
                           {"mean_rounds", mean_rounds}});
    }

    if (as_json) {
        std::cout << doc.dump(2) << "\n";
    } else {
        std::printf("%-14s %5s %14s %11s %12s\n", "ablation", "runs", "mean_final_5",
                    "stabilized", "mean_rounds");
        for (const auto& row : doc)
            std::printf("%-14s %5d %14.4f %8d/%-2d %12.1f\n",
                        row.at("ablation").get<std::string>().c_str(),
                        row.at("runs").get<int>(),
                        row.at("mean_final_5_rate").get<double>(),
                        row.at("stabilized_runs").get<int>(), repeats,
                        row.at("mean_rounds").get<double>());
    }
    return aborted ? 3 : 0;
}

int cmd_metrics(const std::string& log_path, int window, int final_k,
                int permutations, const std::string& sentiment_mode) {
    std::vector<repunet::SimEvent> events = read_log(log_path);

    json doc;
    json series = json::array();
    auto rates = repunet::cooperation_rate_series(events);
    for (const auto& pt : rates)
        series.push_back(json{{"round", pt.round}, {"rate", pt.rate}});
    doc["cooperation_series"] = series;
    doc["mean_final_rate"] = repunet::mean_final_rate(rates, final_k);
    doc["final_rate_window"] = final_k;

    auto pts = repunet::behavior_reputation_points(events, window);
    json scatter = json::array();
    std::vector<std::pair<double, double>> xy;
    for (const auto& p : pts.points) {
        scatter.push_back(json{{"agent", p.agent}, {"x", p.x}, {"y", p.y}});
        xy.emplace_back(p.x, p.y);
    }
    doc["behavior_reputation_points"] = scatter;
    doc["excluded_agents"] = pts.excluded;
    try {
        auto reg = repunet::linear_regression(xy, permutations);
        doc["regression"] = json{{"slope", reg.slope},
                                 {"intercept", reg.intercept},
                                 {"r", reg.r},
                                 {"p_perm", reg.p_perm},
                                 {"n", reg.n}};
    } catch (const repunet::ValidationError& e) {
        doc["regression"] = json{{"error", e.what()}};
    }

    json freq = json::array();
    for (const auto& f : repunet::gossip_frequency_points(events)) {
        json row{{"target", f.target}, {"times_gossiped_about", f.times_gossiped_about}};
        if (f.has_incoming_mu) row["mean_incoming_mu"] = f.mean_incoming_mu;
        freq.push_back(row);
    }
    doc["gossip_frequency"] = freq;

    auto mode = sentiment_mode == "lexicon" ? repunet::SentimentMode::lexicon
                                            : repunet::SentimentMode::valence_tags;
    auto sent = repunet::sentiment_summary(events, mode);
    doc["sentiment"] = json{{"mode", sentiment_mode}, {"n", sent.n},
                            {"positive", sent.positive}, {"neutral", sent.neutral},
                            {"negative", sent.negative},
                            {"weighted_mean", sent.weighted_mean}};

    std::cout << doc.dump(2) << "\n";
    return 0;
}

int cmd_snapshot(const std::string& log_path, const std::string& format,
                 const std::string& out_path) {
    auto snap = repunet::NetworkSnapshot::from_events(read_log(log_path));
    if (format == "dot")
        emit(out_path, snap.to_dot());
    else
        emit(out_path, snap.to_json().dump(2) + "\n");
    return 0;
}

int cmd_validate(const std::string& config_path) {
    repunet::RunConfig cfg = repunet::RunConfig::load_file(config_path);
    std::cout << cfg.to_json().dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-level reputation network simulator"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides ov;

    auto* run = app.add_subcommand("run", "execute one simulation run");
    std::string run_log;
    bool run_quiet = false;
    add_override_flags(run, config_path, ov);
    run->add_option("--log", run_log, "stream events to this JSONL file");
    run->add_flag("--quiet", run_quiet, "suppress the summary JSON");

    auto* ablate = app.add_subcommand("ablate", "run every ablation and compare");
    int repeats = 5;
    std::string out_dir;
    bool ablate_json = false;
    add_override_flags(ablate, config_path, ov);
    ablate->add_option("--repeats", repeats, "independent runs per ablation")
        ->check(CLI::PositiveNumber);
    ablate->add_option("--out-dir", out_dir, "write per-run JSONL logs under this directory");
    ablate->add_flag("--json", ablate_json, "emit the comparison as JSON");

    auto* metrics = app.add_subcommand("metrics", "analyze a JSONL event log");
    std::string metrics_log;
    int window = 10;
    int final_k = 5;
    int permutations = 10000;
    std::string sentiment_mode = "tags";
    metrics->add_option("--log", metrics_log, "JSONL event log")->required();
    metrics->add_option("--window", window, "behavior window in rounds")
        ->check(CLI::PositiveNumber);
    metrics->add_option("--final-k", final_k, "rounds in the final-rate mean")
        ->check(CLI::PositiveNumber);
    metrics->add_option("--permutations", permutations, "permutation-test resamples")
        ->check(CLI::PositiveNumber);
    metrics->add_option("--sentiment", sentiment_mode, "tags | lexicon")
        ->check(CLI::IsMember({"tags", "lexicon"}));

    auto* snapshot = app.add_subcommand("snapshot", "rebuild the willingness graph from a log");
    std::string snap_log;
    std::string snap_format = "json";
    std::string snap_out;
    snapshot->add_option("--log", snap_log, "JSONL event log")->required();
    snapshot->add_option("--format", snap_format, "json | dot")
        ->check(CLI::IsMember({"json", "dot"}));
    snapshot->add_option("-o,--out", snap_out, "write here instead of stdout");

    auto* validate = app.add_subcommand("validate-config", "check a config file");
    validate->add_option("-c,--config", config_path, "JSON config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, ov, run_log, run_quiet);
        if (ablate->parsed())
            return cmd_ablate(config_path, ov, repeats, out_dir, ablate_json);
        if (metrics->parsed())
            return cmd_metrics(metrics_log, window, final_k, permutations, sentiment_mode);
        if (snapshot->parsed()) return cmd_snapshot(snap_log, snap_format, snap_out);
        if (validate->parsed()) return cmd_validate(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
