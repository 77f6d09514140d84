#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "repunet/network_graph.hpp"
#include "repunet/scenarios.hpp"
#include "repunet/scripted_policy.hpp"
#include "repunet/sim_engine.hpp"

using namespace repunet;

namespace {

std::vector<AgentId> iota_ids(int n) {
    std::vector<AgentId> ids;
    for (int i = 1; i <= n; ++i) ids.push_back(i);
    return ids;
}

std::map<AgentId, RepuDatabase> fresh_dbs(const std::vector<AgentId>& ids) {
    std::map<AgentId, RepuDatabase> dbs;
    for (AgentId i : ids) dbs.emplace(i, RepuDatabase(i));
    return dbs;
}

void mutual_edge(std::map<AgentId, RepuDatabase>& dbs, AgentId a, AgentId b) {
    dbs.at(a).add_out_edge(b);
    dbs.at(b).add_out_edge(a);
}

void opine(std::map<AgentId, RepuDatabase>& dbs, AgentId owner, AgentId target,
           double mu) {
    dbs.at(owner).upsert_peer_reputation(
        Reputation::make(target, ScenarioId::pd, "partner", "seeded", mu, 0));
}

// Every agent appears exactly once across pairs and unmatched; pairs are
// distinct agents stored low id first.
void check_plan_invariants(const PairingPlan& plan, const std::vector<AgentId>& ids) {
    std::set<AgentId> seen;
    for (const auto& [a, b] : plan.pairs) {
        CHECK(a < b);
        CHECK(seen.insert(a).second);
        CHECK(seen.insert(b).second);
    }
    for (AgentId u : plan.unmatched) CHECK(seen.insert(u).second);
    CHECK(seen.size() == ids.size());
    for (AgentId i : ids) CHECK(seen.count(i) == 1);
}

Encounter pd_encounter(EventLog& log, int round, AgentId a, AgentId b,
                       ActionKind act_a, ActionKind act_b) {
    PayoffMatrix m;
    auto [pa, pb] = pd_payoff(m, act_a, act_b);
    const SimEvent& ev =
        log.append(round, EventKind::encounter, json{{"a", a}, {"b", b}});
    return Encounter::make(ev.seq, round, a, b, ScenarioId::pd,
                           ScenarioAction::simple(act_a),
                           ScenarioAction::simple(act_b), pa, pb, "t");
}

} // namespace

TEST_CASE("random pairing: full coverage, one idler when odd, deterministic") {
    for (int n : {6, 7}) {
        const auto ids = iota_ids(n);
        const auto dbs = fresh_dbs(ids);
        Rng rng(42);
        PairingPlan plan = select_partners(5, PairingMode::random, ids, dbs, {},
                                           ScenarioId::pd, 0.2, rng);
        check_plan_invariants(plan, ids);
        CHECK(plan.unmatched.size() == (n % 2 == 0 ? 0u : 1u));

        Rng rng2(42);
        PairingPlan again = select_partners(5, PairingMode::random, ids, dbs, {},
                                            ScenarioId::pd, 0.2, rng2);
        CHECK(again.pairs == plan.pairs);
        CHECK(again.unmatched == plan.unmatched);
    }
}

TEST_CASE("round one is random even in reputation mode") {
    const auto ids = iota_ids(6);
    auto dbs = fresh_dbs(ids);
    // Reputation mode with no edges would leave everyone unmatched; round 1
    // must pair everybody anyway.
    Rng rng(9);
    PairingPlan plan = select_partners(1, PairingMode::reputation, ids, dbs, {},
                                       ScenarioId::pd, 0.0, rng);
    check_plan_invariants(plan, ids);
    CHECK(plan.pairs.size() == 3);
    CHECK(plan.unmatched.empty());

    // Identical to plain random mode under the same seed.
    Rng rng2(9);
    PairingPlan rand_plan = select_partners(1, PairingMode::random, ids, dbs, {},
                                            ScenarioId::pd, 0.0, rng2);
    CHECK(plan.pairs == rand_plan.pairs);
}

TEST_CASE("reputation pairing requires mutual consent") {
    const auto ids = iota_ids(4);
    auto dbs = fresh_dbs(ids);
    mutual_edge(dbs, 1, 2);
    dbs.at(3).add_out_edge(4);  // one-way: 4 never reciprocated

    // Everyone has met everyone, so exploration can't kick in.
    std::set<std::pair<AgentId, AgentId>> met;
    for (AgentId i : ids)
        for (AgentId j : ids)
            if (i < j) met.insert({i, j});

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        PairingPlan plan = select_partners(5, PairingMode::reputation, ids, dbs,
                                           met, ScenarioId::pd, 0.2, rng);
        check_plan_invariants(plan, ids);
        REQUIRE(plan.pairs.size() == 1);
        CHECK(plan.pairs[0] == std::make_pair(AgentId(1), AgentId(2)));
        CHECK(plan.unmatched == std::vector<AgentId>{3, 4});
    }
}

TEST_CASE("reputation pairing picks the best-regarded willing neighbor") {
    const auto ids = iota_ids(5);

    // Replicate the seeded visiting order: the shuffle is the first draw.
    const std::uint64_t seed = 3;
    std::vector<AgentId> order = ids;
    {
        Rng probe(seed);
        probe.shuffle(order);
    }
    const AgentId first = order[0];

    auto dbs = fresh_dbs(ids);
    // Give `first` a clear favorite: the highest id gets 0.95, others 0.1*j.
    AgentId peak = 0;
    for (AgentId j : ids)
        if (j != first && j > peak) peak = j;
    for (AgentId j : ids) {
        if (j == first) continue;
        mutual_edge(dbs, first, j);
        opine(dbs, first, j, j == peak ? 0.95 : 0.1 * j);
    }

    std::set<std::pair<AgentId, AgentId>> met;
    for (AgentId i : ids)
        for (AgentId j : ids)
            if (i < j) met.insert({i, j});

    Rng rng(seed);
    PairingPlan plan = select_partners(7, PairingMode::reputation, ids, dbs, met,
                                       ScenarioId::pd, 0.0, rng);
    REQUIRE(plan.pairs.size() == 1);
    CHECK(plan.pairs[0] == std::make_pair(std::min(first, peak),
                                          std::max(first, peak)));
    // The others only ever consented to `first`, so they sit out.
    CHECK(plan.unmatched.size() == 3);
}

TEST_CASE("equal opinions break ties toward the lowest id") {
    const auto ids = iota_ids(4);
    const std::uint64_t seed = 3;
    std::vector<AgentId> order = ids;
    {
        Rng probe(seed);
        probe.shuffle(order);
    }
    const AgentId first = order[0];

    auto dbs = fresh_dbs(ids);
    AgentId lowest = 0;
    for (AgentId j : ids) {
        if (j == first) continue;
        mutual_edge(dbs, first, j);
        opine(dbs, first, j, 0.5);
        if (lowest == 0 || j < lowest) lowest = j;
    }
    std::set<std::pair<AgentId, AgentId>> met;
    for (AgentId i : ids)
        for (AgentId j : ids)
            if (i < j) met.insert({i, j});

    Rng rng(seed);
    PairingPlan plan = select_partners(7, PairingMode::reputation, ids, dbs, met,
                                       ScenarioId::pd, 0.0, rng);
    REQUIRE(plan.pairs.size() == 1);
    CHECK(plan.pairs[0] == std::make_pair(std::min(first, lowest),
                                          std::max(first, lowest)));
}

TEST_CASE("exploration draws only genuine strangers: unmet and unheard-of") {
    const auto ids = iota_ids(4);
    auto dbs = fresh_dbs(ids);
    // 1 and 2 have met; 3 holds an opinion about 4 (hearsay), so 3-4 are not
    // strangers either. The only stranger pairs are across those groups.
    opine(dbs, 3, 4, 0.4);
    std::set<std::pair<AgentId, AgentId>> met{{1, 2}};

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(seed);
        PairingPlan plan = select_partners(5, PairingMode::reputation, ids, dbs,
                                           met, ScenarioId::pd, 1.0, rng);
        check_plan_invariants(plan, ids);
        REQUIRE(plan.pairs.size() == 2);
        CHECK(plan.unmatched.empty());
        for (const auto& p : plan.pairs) {
            CHECK(p != std::make_pair(AgentId(1), AgentId(2)));
            CHECK(p != std::make_pair(AgentId(3), AgentId(4)));
        }
    }
}

TEST_CASE("with no strangers left, exploration falls back to neighbors") {
    const auto ids = iota_ids(4);
    auto dbs = fresh_dbs(ids);
    mutual_edge(dbs, 1, 2);
    std::set<std::pair<AgentId, AgentId>> met;
    for (AgentId i : ids)
        for (AgentId j : ids)
            if (i < j) met.insert({i, j});

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        PairingPlan plan = select_partners(5, PairingMode::reputation, ids, dbs,
                                           met, ScenarioId::pd, 1.0, rng);
        REQUIRE(plan.pairs.size() == 1);
        CHECK(plan.pairs[0] == std::make_pair(AgentId(1), AgentId(2)));
    }
}

TEST_CASE("post-encounter edge shaping appends events only on real change") {
    ScriptedBackend backend;
    EventLog log;
    RepuDatabase db(1);
    auto owner = AgentDescription::make(1, Disposition::prosocial, ScenarioId::pd);
    db.upsert_peer_reputation(
        Reputation::make(2, ScenarioId::pd, "partner", "seeded", 0.5, 0));

    Encounter enc = pd_encounter(log, 3, 1, 2, ActionKind::cooperate,
                                 ActionKind::cooperate);

    // Positive opinion: keep. No edge existed, so one is added and logged.
    CHECK(interact_edge_shape(backend, db, owner, enc, log, true, true) ==
          EdgeDecision::yes);
    CHECK(db.has_out_edge(2));
    REQUIRE(log.size() == 2);  // encounter + edge_change
    {
        const SimEvent& ev = log.events().back();
        CHECK(ev.kind == EventKind::edge_change);
        CHECK(ev.payload.at("owner").get<AgentId>() == 1);
        CHECK(ev.payload.at("target").get<AgentId>() == 2);
        CHECK(ev.payload.at("change").get<std::string>() == "added");
        CHECK(ev.payload.at("origin").get<std::string>() == "interaction");
    }

    // Same judgment again: the edge already exists, nothing is logged.
    CHECK(interact_edge_shape(backend, db, owner, enc, log, true, true) ==
          EdgeDecision::yes);
    CHECK(log.size() == 2);

    // Opinion turns sour: the edge is removed, once.
    db.upsert_peer_reputation(
        Reputation::make(2, ScenarioId::pd, "partner", "soured", -0.5, 1));
    CHECK(interact_edge_shape(backend, db, owner, enc, log, true, true) ==
          EdgeDecision::no);
    CHECK_FALSE(db.has_out_edge(2));
    REQUIRE(log.size() == 3);
    CHECK(log.events().back().payload.at("change").get<std::string>() ==
          "removed");

    // And removing an already absent edge logs nothing.
    CHECK(interact_edge_shape(backend, db, owner, enc, log, true, true) ==
          EdgeDecision::no);
    CHECK(log.size() == 3);
}

TEST_CASE("snapshots from live state and from the event log agree") {
    RunConfig cfg;
    cfg.n_agents = 10;
    cfg.max_rounds = 40;
    cfg.seed = 17;
    RunResult res = SimEngine(cfg).run();

    NetworkSnapshot live =
        NetworkSnapshot::capture(res.rounds, res.databases, cfg.scenario);
    const std::vector<SimEvent> events(res.log.events().begin(),
                                       res.log.events().end());
    NetworkSnapshot replayed = NetworkSnapshot::from_events(events);

    CHECK(live.edges == replayed.edges);
    REQUIRE(live.nodes.size() == replayed.nodes.size());
    for (std::size_t i = 0; i < live.nodes.size(); ++i) {
        const NodeStat& a = live.nodes[i];
        const NodeStat& b = replayed.nodes[i];
        CHECK(a.id == b.id);
        CHECK(a.out_degree == b.out_degree);
        CHECK(a.in_degree == b.in_degree);
        CHECK(a.mutual_degree == b.mutual_degree);
        CHECK(a.has_incoming_mu == b.has_incoming_mu);
        if (a.has_incoming_mu)
            CHECK(a.mean_incoming_mu ==
                  doctest::Approx(b.mean_incoming_mu).epsilon(1e-12));
    }
}

TEST_CASE("reciprocated density counts mutual pairs inside the group") {
    NetworkSnapshot snap;
    snap.edges = {{1, 2}, {2, 1}, {1, 3}, {3, 4}, {4, 3}};
    for (AgentId id : {1, 2, 3, 4}) {
        NodeStat n;
        n.id = id;
        snap.nodes.push_back(n);
    }
    // Mutual pairs: (1,2) and (3,4). Six unordered pairs over four nodes.
    CHECK(snap.reciprocated_density({1, 2, 3, 4}) ==
          doctest::Approx(2.0 / 6.0).epsilon(1e-12));
    CHECK(snap.reciprocated_density({1, 2}) == doctest::Approx(1.0));
    CHECK(snap.reciprocated_density({1, 3}) == doctest::Approx(0.0));
    CHECK(snap.reciprocated_density({2, 3, 4}) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(snap.reciprocated_density({1}) == 0.0);
    CHECK(snap.reciprocated_density({}) == 0.0);
}

TEST_CASE("snapshot serializations carry the full structure") {
    NetworkSnapshot snap;
    snap.round = 12;
    NodeStat n;
    n.id = 1;
    n.out_degree = 1;
    n.in_degree = 1;
    n.mutual_degree = 1;
    n.mean_incoming_mu = 0.5;
    n.has_incoming_mu = true;
    snap.nodes.push_back(n);
    NodeStat m;
    m.id = 2;
    snap.nodes.push_back(m);
    snap.edges = {{1, 2}, {2, 1}};

    json j = snap.to_json();
    CHECK(j.at("round").get<int>() == 12);
    CHECK(j.at("nodes").size() == 2);
    CHECK(j.at("nodes")[0].at("mean_incoming_mu").get<double>() == 0.5);
    CHECK_FALSE(j.at("nodes")[1].contains("mean_incoming_mu"));
    CHECK(j.at("edges").size() == 2);
    CHECK(j.at("edges")[0] == json::array({1, 2}));

    const std::string dot = snap.to_dot();
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("\"Agent-1\" -> \"Agent-2\"") != std::string::npos);
    CHECK(dot.find("\"Agent-2\" -> \"Agent-1\"") != std::string::npos);
}
