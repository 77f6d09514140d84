#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "repunet/metrics.hpp"
#include "repunet/scripted_policy.hpp"
#include "repunet/sim_engine.hpp"

using namespace repunet;

namespace {

RunConfig small_config(ScenarioId scenario, Ablation ablation,
                       std::uint64_t seed = 42) {
    RunConfig cfg;
    cfg.n_agents = 8;
    cfg.scenario = scenario;
    cfg.ablation = ablation;
    cfg.seed = seed;
    cfg.max_rounds = 12;
    return cfg;
}

int count_kind(const EventLog& log, EventKind k) {
    int n = 0;
    for (const auto& ev : log.events())
        if (ev.kind == k) ++n;
    return n;
}

int count_updates_with_cause(const EventLog& log, const std::string& cause) {
    int n = 0;
    for (const auto& ev : log.events())
        if (ev.kind == EventKind::reputation_update &&
            ev.payload.at("cause").get<std::string>() == cause)
            ++n;
    return n;
}

// Plays the scripted policy until the first scenario decision, then dies in
// a way no retry can fix.
struct DoomedBackend : JudgmentBackend {
    ScriptedBackend inner;
    JudgmentResponse judge(const JudgmentRequest& req) override {
        if (req.kind == JudgmentKind::scenario_action)
            throw BackendError("synthetic failure", /*retryable=*/false);
        return inner.judge(req);
    }
    std::string name() const override { return "doomed"; }
};

} // namespace

TEST_CASE("equal config and seed reproduce the event log byte for byte") {
    for (ScenarioId scenario :
         {ScenarioId::pd, ScenarioId::participation, ScenarioId::trading}) {
        for (Ablation ablation : {Ablation::full, Ablation::no_gossip,
                                  Ablation::no_reputation, Ablation::no_repunet}) {
            CAPTURE(to_string(scenario));
            CAPTURE(to_string(ablation));
            RunConfig cfg = small_config(scenario, ablation);
            RunResult first = SimEngine(cfg).run();
            RunResult second = SimEngine(cfg).run();
            CHECK(first.log.to_jsonl() == second.log.to_jsonl());
            CHECK(first.cooperation_series == second.cooperation_series);
            CHECK(first.rounds == second.rounds);
        }
    }
}

TEST_CASE("different seeds diverge") {
    RunConfig a = small_config(ScenarioId::pd, Ablation::full, 1);
    RunConfig b = small_config(ScenarioId::pd, Ablation::full, 2);
    CHECK(SimEngine(a).run().log.to_jsonl() != SimEngine(b).run().log.to_jsonl());
}

TEST_CASE("the streamed log file matches the in-memory log exactly") {
    const std::string path = "test_sim_engine_stream.jsonl";
    RunConfig cfg = small_config(ScenarioId::pd, Ablation::full);
    RunResult res = SimEngine(cfg).run(path);

    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == res.log.to_jsonl());
    std::remove(path.c_str());
}

TEST_CASE("stability detection: flat tail after enough rounds") {
    StabilizationConfig cfg;  // window 10, band 0.05, min_rounds 30
    std::vector<double> series(29, 0.5);
    CHECK_FALSE(SimEngine::is_stable(series, cfg));  // too early
    series.push_back(0.5);
    CHECK(SimEngine::is_stable(series, cfg));  // 30 flat rounds

    // A swing wider than the band inside the window spoils it.
    series[25] = 0.58;
    CHECK_FALSE(SimEngine::is_stable(series, cfg));
    // The same swing outside the window is forgotten.
    std::vector<double> later(series);
    for (int i = 0; i < 6; ++i) later.push_back(0.5);
    CHECK(SimEngine::is_stable(later, cfg));

    // Spread exactly at the band still counts as flat (binary-exact values).
    StabilizationConfig wide;
    wide.band = 0.0625;
    std::vector<double> edge(30, 0.5);
    edge[24] = 0.5625;
    CHECK(SimEngine::is_stable(edge, wide));
    edge[24] = 0.5626;
    CHECK_FALSE(SimEngine::is_stable(edge, wide));
}

TEST_CASE("mean of the trailing rates") {
    const std::vector<double> rates{1.0, 2.0, 3.0, 4.0};
    CHECK(mean_final_rate(rates, 2) == doctest::Approx(3.5));
    CHECK(mean_final_rate(rates, 10) == doctest::Approx(2.5));
    CHECK(mean_final_rate(std::vector<double>{}, 5) == 0.0);
    CHECK(mean_final_rate(std::vector<double>{1.0}, 0) == 0.0);
}

TEST_CASE("exit codes: stabilized, round budget, backend abort") {
    // Default config stabilizes well inside 100 rounds.
    RunConfig full;
    full.n_agents = 10;
    full.seed = 7;
    RunResult stab = SimEngine(full).run();
    CHECK(stab.stabilized);
    CHECK(stab.exit == RunExit::stabilized);
    CHECK(stab.exit_code() == 0);
    CHECK(stab.rounds >= full.stabilization.min_rounds);

    // A three-round budget can never reach the 30-round stability floor.
    RunConfig tiny = small_config(ScenarioId::pd, Ablation::full);
    tiny.max_rounds = 3;
    RunResult capped = SimEngine(tiny).run();
    CHECK_FALSE(capped.stabilized);
    CHECK(capped.exit == RunExit::max_rounds);
    CHECK(capped.exit_code() == 2);
    CHECK(capped.rounds == 3);

    // A backend that gives up non-retryably aborts the run.
    RunConfig cfg = small_config(ScenarioId::pd, Ablation::full);
    RunResult aborted = SimEngine(cfg, std::make_shared<DoomedBackend>()).run();
    CHECK(aborted.exit == RunExit::backend_abort);
    CHECK(aborted.exit_code() == 3);
    CHECK(aborted.abort_reason == "synthetic failure");
    bool warned = false;
    for (const auto& ev : aborted.log.events())
        if (ev.kind == EventKind::warning &&
            ev.payload.at("what").get<std::string>() == "backend abort")
            warned = true;
    CHECK(warned);
}

TEST_CASE("silenced gossip: no exchanges and no hearsay-driven updates") {
    RunConfig cfg = small_config(ScenarioId::pd, Ablation::no_gossip);
    cfg.max_rounds = 20;
    RunResult res = SimEngine(cfg).run();
    CHECK(count_kind(res.log, EventKind::gossip) == 0);
    CHECK(count_updates_with_cause(res.log, "gossip") == 0);
    // Direct-encounter opinion shaping still runs.
    CHECK(count_updates_with_cause(res.log, "direct_encounter") > 0);
}

TEST_CASE("bare ablation: no reputation machinery at all") {
    RunConfig cfg = small_config(ScenarioId::pd, Ablation::no_repunet);
    cfg.max_rounds = 20;
    RunResult res = SimEngine(cfg).run();
    CHECK(count_kind(res.log, EventKind::reputation_update) == 0);
    CHECK(count_kind(res.log, EventKind::gossip) == 0);
    // Databases stay empty.
    for (const auto& [id, db] : res.databases) {
        CHECK(db.peer_reputations().empty());
        CHECK_FALSE(db.self_reputation().has_value());
    }
}

TEST_CASE("hearsay flows without databases in the gossip-only ablation") {
    RunConfig cfg = small_config(ScenarioId::pd, Ablation::no_reputation);
    cfg.max_rounds = 20;
    RunResult res = SimEngine(cfg).run();
    CHECK(count_kind(res.log, EventKind::gossip) > 0);
    CHECK(count_kind(res.log, EventKind::reputation_update) == 0);
}

TEST_CASE("the reported series equals the series recomputed from the log") {
    for (ScenarioId scenario :
         {ScenarioId::pd, ScenarioId::participation, ScenarioId::trading}) {
        CAPTURE(to_string(scenario));
        RunConfig cfg = small_config(scenario, Ablation::full);
        cfg.max_rounds = 15;
        RunResult res = SimEngine(cfg).run();

        const std::vector<SimEvent> events(res.log.events().begin(),
                                           res.log.events().end());
        const auto recomputed = cooperation_rate_series(events);

        // Rounds with encounters must agree exactly; rounds without any are
        // reported as zero by the engine and skipped by the metric.
        std::set<int> covered;
        for (const RatePoint& p : recomputed) {
            REQUIRE(p.round >= 1);
            REQUIRE(p.round <= (int)res.cooperation_series.size());
            CHECK(res.cooperation_series[p.round - 1] == p.rate);
            covered.insert(p.round);
        }
        for (int r = 1; r <= (int)res.cooperation_series.size(); ++r)
            if (covered.count(r) == 0)
                CHECK(res.cooperation_series[r - 1] == 0.0);
    }
}

TEST_CASE("participation runs re-query standings and log decisions") {
    // Without reputation machinery, prosocial agents keep meeting the
    // defectors who burned them and flip their standing at re-query rounds.
    RunConfig cfg = small_config(ScenarioId::participation, Ablation::no_repunet);
    cfg.max_rounds = 30;
    RunResult res = SimEngine(cfg).run();
    int decisions = 0;
    for (const auto& ev : res.log.events()) {
        if (ev.kind != EventKind::decision) continue;
        ++decisions;
        CHECK(ev.payload.contains("agent"));
        CHECK(ev.payload.contains("standing"));
    }
    CHECK(decisions > 0);
}

TEST_CASE("trading runs settle every encounter with finite payoffs") {
    RunConfig cfg = small_config(ScenarioId::trading, Ablation::full);
    cfg.max_rounds = 30;
    RunResult res = SimEngine(cfg).run();
    int encounters = 0;
    for (const auto& ev : res.log.events()) {
        if (ev.kind != EventKind::encounter) continue;
        ++encounters;
        CHECK(std::isfinite(ev.payload.at("payoff_a").get<double>()));
        CHECK(std::isfinite(ev.payload.at("payoff_b").get<double>()));
        const auto act_a = scenario_action_from_json(ev.payload.at("action_a"));
        const auto act_b = scenario_action_from_json(ev.payload.at("action_b"));
        for (const auto& act : {act_a, act_b}) {
            if (act.kind == ActionKind::invest || act.kind == ActionKind::allocate ||
                act.kind == ActionKind::deviate || act.kind == ActionKind::propose)
                CHECK(act.amount >= 0.0);
        }
    }
    CHECK(encounters > 0);
}

TEST_CASE("repeated experiments step the seed and write one log per run") {
    RunConfig base = small_config(ScenarioId::pd, Ablation::full, 100);
    base.max_rounds = 6;
    const std::string dir = ".";
    auto results = run_experiment(base, 3, dir);
    REQUIRE(results.size() == 3);
    for (int k = 0; k < 3; ++k) {
        CHECK(results[k].config.seed == 100 + (std::uint64_t)k);
        const std::string path = dir + "/run_" + std::to_string(k) + ".jsonl";
        std::ifstream in(path, std::ios::binary);
        REQUIRE(in.good());
        std::ostringstream buf;
        buf << in.rdbuf();
        CHECK(buf.str() == results[k].log.to_jsonl());
        std::remove(path.c_str());
    }
    // Distinct seeds actually diverge.
    CHECK(results[0].log.to_jsonl() != results[1].log.to_jsonl());
}

TEST_CASE("the run summary carries the headline numbers") {
    RunConfig cfg = small_config(ScenarioId::pd, Ablation::no_gossip, 5);
    RunResult res = SimEngine(cfg).run();
    json s = res.summary();
    CHECK(s.at("scenario").get<std::string>() == "pd");
    CHECK(s.at("ablation").get<std::string>() == "no_gossip");
    CHECK(s.at("backend").get<std::string>() == "scripted");
    CHECK(s.at("seed").get<std::uint64_t>() == 5);
    CHECK(s.at("n_agents").get<int>() == 8);
    CHECK(s.at("rounds").get<int>() == res.rounds);
    CHECK(s.at("exit_code").get<int>() == res.exit_code());
    CHECK(s.at("events").get<std::size_t>() == res.log.size());
    CHECK(s.at("cooperation_series").size() == res.cooperation_series.size());
    CHECK(s.at("final_rate").get<double>() == res.cooperation_series.back());
    CHECK(s.at("mean_final_5").get<double>() ==
          doctest::Approx(mean_final_rate(res.cooperation_series, 5)));
}

TEST_CASE("agent roster: ids ascend and dispositions follow the fraction") {
    RunConfig cfg = small_config(ScenarioId::pd, Ablation::full);
    cfg.n_agents = 7;
    cfg.prosocial_fraction = 0.5;  // ceil(3.5) = 4 prosocial
    cfg.max_rounds = 2;
    RunResult res = SimEngine(cfg).run();
    REQUIRE(res.agents.size() == 7);
    int prosocial = 0;
    for (std::size_t i = 0; i < res.agents.size(); ++i) {
        CHECK(res.agents[i].id == (AgentId)(i + 1));
        if (res.agents[i].disposition == Disposition::prosocial) ++prosocial;
    }
    CHECK(prosocial == 4);
}
