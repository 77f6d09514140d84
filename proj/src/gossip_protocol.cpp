#include "repunet/gossip_protocol.hpp"

#include <algorithm>

#include "repunet/network_graph.hpp"
#include "repunet/reputation_engine.hpp"
#include "repunet/scenarios.hpp"
#include "repunet/scripted_policy.hpp"

namespace repunet {

std::string synthesize_conversation(const AgentDescription& gossiper,
                                    AgentId target, ScenarioId scenario,
                                    Valence valence, int round) {
    return gossiper.name + " says: let me tell you about " + agent_name(target) +
           ". In round " + std::to_string(round) + " they " +
           valence_verb(scenario, valence) + ".";
}

namespace {

void warn(EventLog& log, int round, const std::string& what, json detail) {
    detail["what"] = what;
    log.append(round, EventKind::warning, std::move(detail));
}

} // namespace

std::vector<GossipExchange> run_gossip_phase(
    JudgmentBackend& backend, const std::vector<AgentDescription>& agents,
    std::map<AgentId, RepuDatabase>& dbs, std::map<AgentId, AgentMemory>& memories,
    TrustSignalBook& signals, const std::vector<Encounter>& round_encounters,
    int round, ScenarioId scenario, bool reputation_enabled, EventLog& log,
    Rng& rng) {
    std::map<AgentId, const AgentDescription*> desc;
    for (const auto& a : agents) desc[a.id] = &a;

    // Participants this round, in canonical ascending order.
    std::map<AgentId, const Encounter*> encounter_of;
    for (const auto& e : round_encounters) {
        encounter_of[e.a] = &e;
        encounter_of[e.b] = &e;
    }

    std::vector<GossipExchange> exchanges;
    for (const auto& [gid, enc] : encounter_of) {
        const AgentDescription& gossiper = *desc.at(gid);
        const EncounterView view = make_encounter_view(*enc, gid);
        const AgentId target = view.counterpart;

        // 1. Does the gossiper want to share this experience?
        JudgmentRequest will_req;
        will_req.kind = JudgmentKind::gossip_will;
        will_req.agent = gossiper;
        will_req.scenario = scenario;
        will_req.round = round;
        will_req.reputation_enabled = reputation_enabled;
        will_req.encounter = view;
        will_req.prior = dbs.at(gid).peer_reputation(target, scenario);
        if (backend.judge(will_req).decision != EdgeDecision::yes) continue;

        // 2. Pick a listener among everyone who is neither party. Candidate
        // order is the tie-breaking order: canonical by id when opinions
        // exist to rank on, seeded-random otherwise.
        std::vector<AgentId> eligible;
        for (const auto& a : agents)
            if (a.id != gid && a.id != target) eligible.push_back(a.id);
        if (eligible.empty()) {
            warn(log, round, "gossip cancelled: no eligible third party",
                 json{{"gossiper", gid}});
            continue;
        }
        if (!reputation_enabled) rng.shuffle(eligible);

        JudgmentRequest choice_req;
        choice_req.kind = JudgmentKind::gossip_choice;
        choice_req.agent = gossiper;
        choice_req.scenario = scenario;
        choice_req.round = round;
        choice_req.reputation_enabled = reputation_enabled;
        for (AgentId c : eligible) {
            const auto rep = dbs.at(gid).peer_reputation(c, scenario);
            choice_req.candidates.emplace_back(
                c, rep ? std::optional<double>(rep->mu) : std::nullopt);
        }
        const AgentId listener = *backend.judge(choice_req).chosen;
        const AgentDescription& hearer = *desc.at(listener);

        // 3. The gossiper speaks; the listener works out who it is about.
        const Valence valence = view.counterpart_valence;
        const std::string conversation =
            synthesize_conversation(gossiper, target, scenario, valence, round);

        JudgmentRequest ident_req;
        ident_req.kind = JudgmentKind::gossip_identify;
        ident_req.agent = hearer;
        ident_req.scenario = scenario;
        ident_req.round = round;
        ident_req.reputation_enabled = reputation_enabled;
        ident_req.conversation = conversation;
        GossipView heard;
        heard.gossiper = gid;
        heard.gossiper_name = gossiper.name;
        ident_req.gossip = heard;
        const JudgmentResponse ident = backend.judge(ident_req);
        if (ident.skip) {
            warn(log, round, "gossip dropped: conversation identifies nobody",
                 json{{"gossiper", gid}, {"listener", listener}});
            continue;
        }
        const AgentId identified = *ident.chosen;
        // The third-party law is enforced here no matter what the backend
        // said, and the subject must be a real agent.
        if (identified == gid || identified == listener || !desc.count(identified)) {
            warn(log, round, "gossip dropped: subject violates the third-party law",
                 json{{"gossiper", gid},
                      {"listener", listener},
                      {"identified", identified}});
            continue;
        }

        // 4. The listener rates how credible the account is.
        JudgmentRequest eval_req;
        eval_req.kind = JudgmentKind::gossip_evaluate;
        eval_req.agent = hearer;
        eval_req.scenario = scenario;
        eval_req.round = round;
        eval_req.reputation_enabled = reputation_enabled;
        GossipView rated;
        rated.target = identified;
        rated.gossiper = gid;
        rated.gossiper_name = gossiper.name;
        rated.target_name = agent_name(identified);
        rated.summary = ident.summary;
        rated.valence = *ident.valence;
        eval_req.gossip = rated;
        eval_req.gossiper_reputation = dbs.at(listener).peer_reputation(gid, scenario);
        eval_req.unreliable_fraction = dbs.at(listener).unreliable_fraction();
        const JudgmentResponse eval = backend.judge(eval_req);
        if (eval.clamped)
            warn(log, round, "credibility clamped into 1..5",
                 json{{"listener", listener}});
        const int credibility = *eval.likert;

        // 5. Record the exchange and store it with the listener.
        const SimEvent& ev =
            log.append(round, EventKind::gossip,
                       json{{"gossiper", gid},
                            {"listener", listener},
                            {"target", identified},
                            {"summary", ident.summary},
                            {"valence", to_string(*ident.valence)},
                            {"credibility", credibility}});
        const GossipRecord record = GossipRecord::make(
            identified, gid, ident.summary, credibility, *ident.valence, ev.seq);
        dbs.at(listener).append_gossip(record);
        memories.at(gid).remember(ev.seq);
        memories.at(listener).remember(ev.seq);
        if (!record.uncredible()) signals.note(listener, identified, record.valence);

        // 6. Let the hearsay shape the listener's opinion and edge.
        if (reputation_enabled)
            shape_repu_gossip(backend, dbs.at(listener), hearer, record, scenario,
                              round, ev.seq, log, reputation_enabled,
                              /*gossip_enabled=*/true);
        if (dbs.at(listener).has_out_edge(identified))
            gossip_edge_shape(backend, dbs.at(listener), hearer, record, scenario,
                              round, log, reputation_enabled,
                              /*gossip_enabled=*/true);

        GossipExchange done;
        done.gossiper = gid;
        done.listener = listener;
        done.target = identified;
        done.summary = ident.summary;
        done.valence = *ident.valence;
        done.credibility = credibility;
        done.event_seq = ev.seq;
        exchanges.push_back(std::move(done));
    }
    return exchanges;
}

} // namespace repunet
