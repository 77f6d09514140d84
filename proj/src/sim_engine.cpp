#include "repunet/sim_engine.hpp"

#include <algorithm>
#include <cmath>

#include "repunet/gossip_protocol.hpp"
#include "repunet/network_graph.hpp"
#include "repunet/remote_backend.hpp"
#include "repunet/reputation_engine.hpp"
#include "repunet/rng.hpp"
#include "repunet/scenarios.hpp"
#include "repunet/scripted_policy.hpp"
#include "repunet/trust_signals.hpp"

namespace repunet {

namespace {

std::shared_ptr<JudgmentBackend> make_backend(const RunConfig& cfg) {
    if (cfg.backend == BackendKind::scripted)
        return std::make_shared<ScriptedBackend>(cfg.policy);
    return std::make_shared<RemoteBackend>(cfg.remote);
}

// All mutable state of one running society.
struct Runner {
    const RunConfig& cfg;
    JudgmentBackend& backend;
    Rng rng;
    EventLog log;
    std::vector<AgentDescription> agents;  // ascending id
    std::vector<AgentId> ids;
    std::map<AgentId, RepuDatabase> dbs;
    std::map<AgentId, AgentMemory> memories;
    TrustSignalBook signals;
    std::set<std::pair<AgentId, AgentId>> met;
    TradingState trading;
    std::map<AgentId, bool> standing;  // participation: current willingness
    std::vector<double> series;

    Runner(const RunConfig& c, JudgmentBackend& b) : cfg(c), backend(b), rng(c.seed) {
        ids.reserve(cfg.n_agents);
        for (AgentId i = 1; i <= cfg.n_agents; ++i) ids.push_back(i);

        // ceil(fraction * n) agents are prosocial; which ones is seeded.
        const int prosocial_count = static_cast<int>(
            std::ceil(cfg.prosocial_fraction * static_cast<double>(cfg.n_agents)));
        std::vector<AgentId> draw = ids;
        rng.shuffle(draw);
        std::set<AgentId> prosocial(draw.begin(), draw.begin() + prosocial_count);

        for (AgentId i : ids) {
            const Disposition d = prosocial.count(i) ? Disposition::prosocial
                                                     : Disposition::self_interested;
            agents.push_back(AgentDescription::make(i, d, cfg.scenario));
            dbs.emplace(i, RepuDatabase(i));
            memories.emplace(i, AgentMemory{i, {}});
            standing[i] = d == Disposition::prosocial;
        }
        trading = TradingState::init(ids, cfg.initial_balance);
    }

    const AgentDescription& desc(AgentId id) const {
        return agents[static_cast<std::size_t>(id - 1)];
    }

    void warn(int round, const std::string& what, json detail) {
        detail["what"] = what;
        log.append(round, EventKind::warning, std::move(detail));
    }

    // --- scenario actions ------------------------------------------------

    JudgmentRequest action_request(int round, AgentId me, AgentId counterpart,
                                   TradeContext tc) const {
        JudgmentRequest req;
        req.kind = JudgmentKind::scenario_action;
        req.agent = desc(me);
        req.scenario = cfg.scenario;
        req.round = round;
        req.reputation_enabled = cfg.reputation_enabled();
        req.gossip_enabled = cfg.gossip_enabled();
        EncounterView view;
        view.counterpart = counterpart;
        view.counterpart_name = agent_name(counterpart);
        req.encounter = view;
        req.prior = dbs.at(me).peer_reputation(counterpart, cfg.scenario);
        req.memory = signals.about(me, counterpart);
        req.trade = tc;
        return req;
    }

    // Asks for a scenario action and insists on one of `allowed`. A backend
    // that answers with the wrong kind of action gets one more chance, then
    // the engine substitutes `fallback` and logs a warning.
    ScenarioAction expect_action(int round, AgentId me, AgentId counterpart,
                                 TradeContext tc,
                                 std::initializer_list<ActionKind> allowed,
                                 ScenarioAction fallback) {
        const JudgmentRequest req = action_request(round, me, counterpart, tc);
        for (int attempt = 0; attempt < 2; ++attempt) {
            const ScenarioAction act = *backend.judge(req).action;
            if (std::find(allowed.begin(), allowed.end(), act.kind) != allowed.end())
                return act;
        }
        warn(round, "action of the wrong kind substituted",
             json{{"agent", me}, {"substituted", to_string(fallback.kind)}});
        return fallback;
    }

    // Clamps an out-of-range amount into [lo, hi] with a warning event.
    double clamp_amount(int round, AgentId who, const char* what, double v,
                        double lo, double hi) {
        double c = std::isfinite(v) ? std::min(std::max(v, lo), hi) : lo;
        if (c != v) {
            warn(round, std::string(what) + " clamped into range",
                 json{{"agent", who}, {"raw", std::isfinite(v) ? v : 0.0}});
        }
        return c;
    }

    // --- encounters -------------------------------------------------------

    Encounter conduct_pd(int round, AgentId a, AgentId b) {
        const ScenarioAction fallback = ScenarioAction::simple(ActionKind::defect);
        const ScenarioAction act_a =
            expect_action(round, a, b, {}, {ActionKind::cooperate, ActionKind::defect},
                          fallback);
        const ScenarioAction act_b =
            expect_action(round, b, a, {}, {ActionKind::cooperate, ActionKind::defect},
                          fallback);
        const auto [pay_a, pay_b] = pd_payoff(cfg.payoff, act_a.kind, act_b.kind);
        const std::string transcript =
            "Round " + std::to_string(round) + ": " + agent_name(a) + " " +
            valence_verb(cfg.scenario, action_valence(act_a)) + "; " + agent_name(b) +
            " " + valence_verb(cfg.scenario, action_valence(act_b)) + ".";
        return finish_encounter(round, a, b, act_a, act_b, pay_a, pay_b, transcript);
    }

    Encounter conduct_participation(int round, AgentId a, AgentId b) {
        if (participation_requery_due(round, cfg.decision_window)) {
            requery_standing(round, a, b);
            requery_standing(round, b, a);
        }
        auto act_of = [&](AgentId who) {
            return ScenarioAction::simple(standing.at(who) ? ActionKind::participate
                                                           : ActionKind::not_participate);
        };
        const ScenarioAction act_a = act_of(a);
        const ScenarioAction act_b = act_of(b);
        const std::string transcript =
            "Round " + std::to_string(round) + ": " + agent_name(a) + " " +
            valence_verb(cfg.scenario, action_valence(act_a)) + "; " + agent_name(b) +
            " " + valence_verb(cfg.scenario, action_valence(act_b)) + ".";
        return finish_encounter(round, a, b, act_a, act_b, 0.0, 0.0, transcript);
    }

    void requery_standing(int round, AgentId who, AgentId counterpart) {
        const ScenarioAction act = expect_action(
            round, who, counterpart, {},
            {ActionKind::participate, ActionKind::not_participate},
            ScenarioAction::simple(ActionKind::not_participate));
        const bool now = act.kind == ActionKind::participate;
        if (now != standing.at(who)) {
            standing[who] = now;
            log.append(round, EventKind::decision,
                       json{{"agent", who},
                            {"standing", now ? "participate" : "not_participate"}});
        }
    }

    Encounter conduct_trading(int round, AgentId a, AgentId b) {
        const AgentId investor = rng.bounded(2) == 0 ? a : b;
        const AgentId trustee = investor == a ? b : a;

        // 1. The trustee proposes a split of the doubled pool.
        TradeContext tc;
        tc.point = TradePoint::propose;
        tc.balance = trading.of(trustee);
        const ScenarioAction proposal =
            expect_action(round, trustee, investor, tc, {ActionKind::propose},
                          ScenarioAction::with_amount(ActionKind::propose, 0.5));
        const double split = clamp_amount(round, trustee, "proposed split",
                                          proposal.amount, 0.0, 1.0);

        // 2. The investor accepts with an amount, or walks away.
        tc = TradeContext{};
        tc.point = TradePoint::accept;
        tc.split = split;
        tc.balance = trading.of(investor);
        const ScenarioAction answer = expect_action(
            round, investor, trustee, tc, {ActionKind::invest, ActionKind::reject},
            ScenarioAction::simple(ActionKind::reject));

        ScenarioAction act_inv, act_tru;
        double pay_inv = 0.0, pay_tru = 0.0;
        std::string tail;
        if (answer.kind == ActionKind::reject) {
            act_inv = ScenarioAction::simple(ActionKind::reject);
            act_tru = ScenarioAction::with_amount(ActionKind::propose, split);
            tail = agent_name(investor) + " rejected the deal.";
        } else {
            const double invested = clamp_amount(round, investor, "invested amount",
                                                 answer.amount, 0.0,
                                                 trading.of(investor));

            // 3. The trustee allocates the doubled pool.
            tc = TradeContext{};
            tc.point = TradePoint::allocate;
            tc.split = split;
            tc.invested = invested;
            tc.balance = trading.of(trustee);
            const ScenarioAction alloc = expect_action(
                round, trustee, investor, tc,
                {ActionKind::allocate, ActionKind::deviate},
                ScenarioAction::with_amount(ActionKind::deviate, 0.0));
            const double returned = clamp_amount(round, trustee, "returned amount",
                                                 alloc.amount, 0.0, 2.0 * invested);

            settle_trade(trading, investor, trustee, invested, returned);
            pay_inv = returned - invested;
            pay_tru = 2.0 * invested - returned;
            act_inv = ScenarioAction::with_amount(ActionKind::invest, invested);
            act_tru = ScenarioAction::with_amount(alloc.kind, returned);
            tail = agent_name(investor) + " invested " + std::to_string(invested) +
                   "; " + agent_name(trustee) + " " +
                   valence_verb(cfg.scenario, action_valence(act_tru)) + ".";
        }

        const std::string transcript = "Round " + std::to_string(round) + ": " +
                                       agent_name(trustee) + " proposed a split of " +
                                       std::to_string(split) + "; " + tail;
        const ScenarioAction act_a = a == investor ? act_inv : act_tru;
        const ScenarioAction act_b = b == investor ? act_inv : act_tru;
        const double pay_a = a == investor ? pay_inv : pay_tru;
        const double pay_b = b == investor ? pay_inv : pay_tru;
        return finish_encounter(round, a, b, act_a, act_b, pay_a, pay_b, transcript);
    }

    Encounter finish_encounter(int round, AgentId a, AgentId b, ScenarioAction act_a,
                               ScenarioAction act_b, double pay_a, double pay_b,
                               const std::string& transcript) {
        const EventSeq seq = log.next_seq();
        Encounter enc = Encounter::make(seq, round, a, b, cfg.scenario, act_a, act_b,
                                        pay_a, pay_b, transcript);
        log.append(round, EventKind::encounter,
                   json{{"a", a},
                        {"b", b},
                        {"scenario", to_string(cfg.scenario)},
                        {"action_a", to_json(act_a)},
                        {"action_b", to_json(act_b)},
                        {"payoff_a", pay_a},
                        {"payoff_b", pay_b},
                        {"transcript", transcript}});

        met.emplace(std::min(a, b), std::max(a, b));
        memories.at(a).remember(seq);
        memories.at(b).remember(seq);
        for (auto [me, mine, theirs] :
             {std::tuple{a, act_a, act_b}, std::tuple{b, act_b, act_a}}) {
            signals.note(me, enc.counterpart_of(me), action_valence(theirs));
            if (cooperation_signal(mine) && !cooperation_signal(theirs))
                signals.note_exploited(me);
        }
        return enc;
    }

    Encounter conduct(int round, AgentId a, AgentId b) {
        switch (cfg.scenario) {
            case ScenarioId::pd: return conduct_pd(round, a, b);
            case ScenarioId::participation: return conduct_participation(round, a, b);
            case ScenarioId::trading: return conduct_trading(round, a, b);
        }
        throw ValidationError("unhandled scenario");
    }

    // --- one full round ---------------------------------------------------

    double run_round(int round) {
        const PairingMode mode =
            round <= 1 ? PairingMode::random : cfg.pairing_mode();
        const PairingPlan plan = select_partners(round, mode, ids, dbs, met,
                                                 cfg.scenario, cfg.epsilon, rng);

        std::vector<Encounter> encounters;
        encounters.reserve(plan.pairs.size());
        for (const auto& [a, b] : plan.pairs)
            encounters.push_back(conduct(round, a, b));

        if (cfg.reputation_enabled()) {
            for (const Encounter& enc : encounters) {
                shape_repu_peer(backend, dbs.at(enc.a), desc(enc.a), enc, log,
                                true, cfg.gossip_enabled());
                shape_repu_peer(backend, dbs.at(enc.b), desc(enc.b), enc, log,
                                true, cfg.gossip_enabled());
                shape_repu_self(backend, dbs.at(enc.a), desc(enc.a), enc, log,
                                true, cfg.gossip_enabled());
                shape_repu_self(backend, dbs.at(enc.b), desc(enc.b), enc, log,
                                true, cfg.gossip_enabled());
            }
        }

        if (cfg.gossip_enabled())
            run_gossip_phase(backend, agents, dbs, memories, signals, encounters,
                             round, cfg.scenario, cfg.reputation_enabled(), log,
                             rng);

        for (const Encounter& enc : encounters) {
            interact_edge_shape(backend, dbs.at(enc.a), desc(enc.a), enc, log,
                                cfg.reputation_enabled(), cfg.gossip_enabled());
            interact_edge_shape(backend, dbs.at(enc.b), desc(enc.b), enc, log,
                                cfg.reputation_enabled(), cfg.gossip_enabled());
        }

        int coop = 0, total = 0;
        for (const Encounter& enc : encounters) {
            coop += cooperation_signal(enc.action_a) ? 1 : 0;
            coop += cooperation_signal(enc.action_b) ? 1 : 0;
            total += 2;
        }
        return total == 0 ? 0.0 : static_cast<double>(coop) / total;
    }
};

} // namespace

bool SimEngine::is_stable(const std::vector<double>& series,
                          const StabilizationConfig& cfg) {
    if (static_cast<int>(series.size()) < cfg.min_rounds) return false;
    if (static_cast<int>(series.size()) < cfg.window) return false;
    const auto tail = series.end() - cfg.window;
    const auto [lo, hi] = std::minmax_element(tail, series.end());
    return *hi - *lo <= cfg.band;
}

double mean_final_rate(const std::vector<double>& series, int k) {
    if (series.empty() || k <= 0) return 0.0;
    const std::size_t n = std::min<std::size_t>(series.size(), k);
    double sum = 0.0;
    for (std::size_t i = series.size() - n; i < series.size(); ++i) sum += series[i];
    return sum / static_cast<double>(n);
}

SimEngine::SimEngine(RunConfig cfg, std::shared_ptr<JudgmentBackend> backend)
    : cfg_(std::move(cfg)), backend_(std::move(backend)) {
    cfg_.validate();
    if (!backend_) backend_ = make_backend(cfg_);
}

RunResult SimEngine::run(const std::string& log_path) {
    Runner runner(cfg_, *backend_);
    if (!log_path.empty()) runner.log.attach_sink(log_path);

    RunResult result;
    result.config = cfg_;
    result.exit = RunExit::max_rounds;

    for (int round = 1; round <= cfg_.max_rounds; ++round) {
        try {
            runner.series.push_back(runner.run_round(round));
        } catch (const BackendError& e) {
            runner.warn(round, "backend abort", json{{"detail", e.what()}});
            result.exit = RunExit::backend_abort;
            result.abort_reason = e.what();
            break;
        }
        result.rounds = round;
        if (is_stable(runner.series, cfg_.stabilization)) {
            result.stabilized = true;
            result.exit = RunExit::stabilized;
            break;
        }
    }

    runner.log.detach_sink();
    result.cooperation_series = std::move(runner.series);
    result.log = std::move(runner.log);
    result.agents = std::move(runner.agents);
    result.databases = std::move(runner.dbs);
    return result;
}

json RunResult::summary() const {
    return json{
        {"scenario", to_string(config.scenario)},
        {"ablation", to_string(config.ablation)},
        {"backend", to_string(config.backend)},
        {"seed", config.seed},
        {"n_agents", config.n_agents},
        {"rounds", rounds},
        {"stabilized", stabilized},
        {"exit_code", exit_code()},
        {"abort_reason", abort_reason},
        {"final_rate", cooperation_series.empty() ? 0.0 : cooperation_series.back()},
        {"mean_final_5", mean_final_rate(cooperation_series, 5)},
        {"cooperation_series", cooperation_series},
        {"events", log.size()},
    };
}

std::vector<RunResult> run_experiment(const RunConfig& base, int repeats,
                                      const std::string& log_dir,
                                      std::shared_ptr<JudgmentBackend> backend) {
    if (repeats < 1) throw ValidationError("repeats must be >= 1");
    std::vector<RunResult> results;
    results.reserve(repeats);
    for (int k = 0; k < repeats; ++k) {
        RunConfig cfg = base;
        cfg.seed = base.seed + static_cast<std::uint64_t>(k);
        SimEngine engine(cfg, backend);
        const std::string path =
            log_dir.empty() ? "" : log_dir + "/run_" + std::to_string(k) + ".jsonl";
        results.push_back(engine.run(path));
    }
    return results;
}

} // namespace repunet
