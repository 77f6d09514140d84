#include "repunet/network_graph.hpp"

#include <algorithm>
#include <sstream>

#include "repunet/scenarios.hpp"

namespace repunet {

const char* to_string(PairingMode m) {
    return m == PairingMode::random ? "random" : "reputation";
}

PairingPlan select_partners(int round, PairingMode mode,
                            const std::vector<AgentId>& ids,
                            const std::map<AgentId, RepuDatabase>& dbs,
                            const std::set<std::pair<AgentId, AgentId>>& met,
                            ScenarioId scenario, double epsilon, Rng& rng) {
    std::vector<AgentId> order = ids;
    rng.shuffle(order);

    PairingPlan plan;
    if (mode == PairingMode::random || round <= 1) {
        for (std::size_t i = 0; i + 1 < order.size(); i += 2)
            plan.pairs.emplace_back(std::min(order[i], order[i + 1]),
                                    std::max(order[i], order[i + 1]));
        if (order.size() % 2 != 0) plan.unmatched.push_back(order.back());
        return plan;
    }

    std::set<AgentId> open(ids.begin(), ids.end());
    auto mu_of = [&](AgentId i, AgentId j) {
        return dbs.at(i).peer_reputation(j, scenario);
    };

    for (AgentId i : order) {
        if (open.count(i) == 0) continue;
        std::optional<AgentId> partner;

        // Exploration: a uniform draw among genuine strangers — never met,
        // and neither side has heard enough to hold an opinion.
        if (rng.unit() < epsilon) {
            std::vector<AgentId> strangers;
            for (AgentId j : open) {
                if (j == i) continue;
                if (met.count({std::min(i, j), std::max(i, j)}) > 0) continue;
                if (mu_of(i, j) || mu_of(j, i)) continue;
                strangers.push_back(j);
            }
            if (!strangers.empty())
                partner = strangers[static_cast<std::size_t>(
                    rng.bounded(strangers.size()))];
        }

        // Otherwise the best mutually willing neighbor, by stored opinion,
        // ties to the lowest id (`open` iterates ascending).
        if (!partner) {
            double best_mu = 0.0;
            for (AgentId j : open) {
                if (j == i) continue;
                if (!dbs.at(i).has_out_edge(j) || !dbs.at(j).has_out_edge(i)) continue;
                const double m = mu_of(i, j) ? mu_of(i, j)->mu : 0.0;
                if (!partner || m > best_mu) {
                    partner = j;
                    best_mu = m;
                }
            }
        }

        if (partner) {
            open.erase(i);
            open.erase(*partner);
            plan.pairs.emplace_back(std::min(i, *partner), std::max(i, *partner));
        }
        // No consenting partner and no stranger: i sits this round out (it
        // may still be drawn by an agent visited later).
    }

    plan.unmatched.assign(open.begin(), open.end());
    return plan;
}

EdgeDecision interact_edge_shape(JudgmentBackend& backend, RepuDatabase& db,
                                 const AgentDescription& owner,
                                 const Encounter& enc, EventLog& log,
                                 bool reputation_enabled, bool gossip_enabled) {
    const EncounterView view = make_encounter_view(enc, owner.id);
    JudgmentRequest req;
    req.kind = JudgmentKind::interact_edge_shape;
    req.agent = owner;
    req.scenario = enc.scenario;
    req.round = enc.round;
    req.reputation_enabled = reputation_enabled;
    req.gossip_enabled = gossip_enabled;
    req.encounter = view;
    req.prior = db.peer_reputation(view.counterpart, enc.scenario);

    const EdgeDecision decision = *backend.judge(req).decision;
    const bool had = db.has_out_edge(view.counterpart);
    if (decision == EdgeDecision::yes && !had) {
        db.add_out_edge(view.counterpart);
        log.append(enc.round, EventKind::edge_change,
                   json{{"owner", owner.id},
                        {"target", view.counterpart},
                        {"change", "added"},
                        {"origin", "interaction"}});
    } else if (decision == EdgeDecision::no && had) {
        db.remove_out_edge(view.counterpart);
        log.append(enc.round, EventKind::edge_change,
                   json{{"owner", owner.id},
                        {"target", view.counterpart},
                        {"change", "removed"},
                        {"origin", "interaction"}});
    }
    return decision;
}

EdgeDecision gossip_edge_shape(JudgmentBackend& backend, RepuDatabase& db,
                               const AgentDescription& listener,
                               const GossipRecord& rec, ScenarioId scenario,
                               int round, EventLog& log, bool reputation_enabled,
                               bool gossip_enabled) {
    if (!db.has_out_edge(rec.target))
        throw ValidationError("gossip_edge_shape: no existing edge to reconsider");

    JudgmentRequest req;
    req.kind = JudgmentKind::gossip_edge_shape;
    req.agent = listener;
    req.scenario = scenario;
    req.round = round;
    req.reputation_enabled = reputation_enabled;
    req.gossip_enabled = gossip_enabled;
    req.prior = db.peer_reputation(rec.target, scenario);
    GossipView view;
    view.target = rec.target;
    view.gossiper = rec.gossiper;
    view.gossiper_name = agent_name(rec.gossiper);
    view.target_name = agent_name(rec.target);
    view.summary = rec.summary;
    view.valence = rec.valence;
    view.credibility = rec.credibility;
    req.gossip = view;

    const EdgeDecision decision = *backend.judge(req).decision;
    if (decision == EdgeDecision::no) {
        db.remove_out_edge(rec.target);
        log.append(round, EventKind::edge_change,
                   json{{"owner", listener.id},
                        {"target", rec.target},
                        {"change", "removed"},
                        {"origin", "gossip"}});
    }
    return decision;
}

NetworkSnapshot NetworkSnapshot::capture(int round,
                                         const std::map<AgentId, RepuDatabase>& dbs,
                                         ScenarioId scenario) {
    NetworkSnapshot snap;
    snap.round = round;
    std::set<std::pair<AgentId, AgentId>> edges;
    for (const auto& [id, db] : dbs)
        for (AgentId t : db.out_edges()) edges.emplace(id, t);

    for (const auto& [id, db] : dbs) {
        NodeStat n;
        n.id = id;
        n.out_degree = static_cast<int>(db.out_edges().size());
        double sum = 0.0;
        int cnt = 0;
        for (const auto& [jid, jdb] : dbs) {
            if (jid == id) continue;
            if (edges.count({jid, id})) {
                ++n.in_degree;
                if (edges.count({id, jid})) ++n.mutual_degree;
            }
            if (auto rep = jdb.peer_reputation(id, scenario)) {
                sum += rep->mu;
                ++cnt;
            }
        }
        if (cnt > 0) {
            n.mean_incoming_mu = sum / cnt;
            n.has_incoming_mu = true;
        }
        snap.nodes.push_back(n);
    }
    snap.edges.assign(edges.begin(), edges.end());
    return snap;
}

NetworkSnapshot NetworkSnapshot::from_events(const std::vector<SimEvent>& events) {
    std::set<AgentId> ids;
    std::set<std::pair<AgentId, AgentId>> edges;
    std::map<std::pair<AgentId, AgentId>, double> mu;  // (owner, target) -> latest
    int last_round = 0;

    for (const auto& ev : events) {
        last_round = std::max(last_round, ev.round);
        switch (ev.kind) {
            case EventKind::encounter:
                ids.insert(ev.payload.at("a").get<AgentId>());
                ids.insert(ev.payload.at("b").get<AgentId>());
                break;
            case EventKind::edge_change: {
                const AgentId o = ev.payload.at("owner").get<AgentId>();
                const AgentId t = ev.payload.at("target").get<AgentId>();
                ids.insert(o);
                ids.insert(t);
                if (ev.payload.at("change").get<std::string>() == "added")
                    edges.emplace(o, t);
                else
                    edges.erase({o, t});
                break;
            }
            case EventKind::reputation_update: {
                const AgentId o = ev.payload.at("owner").get<AgentId>();
                const auto& after = ev.payload.at("after");
                const AgentId t = after.at("target").get<AgentId>();
                ids.insert(o);
                ids.insert(t);
                if (o != t) mu[{o, t}] = after.at("mu").get<double>();
                break;
            }
            case EventKind::gossip:
                ids.insert(ev.payload.at("gossiper").get<AgentId>());
                ids.insert(ev.payload.at("listener").get<AgentId>());
                ids.insert(ev.payload.at("target").get<AgentId>());
                break;
            default:
                break;
        }
    }

    NetworkSnapshot snap;
    snap.round = last_round;
    for (AgentId id : ids) {
        NodeStat n;
        n.id = id;
        double sum = 0.0;
        int cnt = 0;
        for (AgentId j : ids) {
            if (j == id) continue;
            if (edges.count({id, j})) ++n.out_degree;
            if (edges.count({j, id})) {
                ++n.in_degree;
                if (edges.count({id, j})) ++n.mutual_degree;
            }
            auto it = mu.find({j, id});
            if (it != mu.end()) {
                sum += it->second;
                ++cnt;
            }
        }
        if (cnt > 0) {
            n.mean_incoming_mu = sum / cnt;
            n.has_incoming_mu = true;
        }
        snap.nodes.push_back(n);
    }
    snap.edges.assign(edges.begin(), edges.end());
    return snap;
}

double NetworkSnapshot::reciprocated_density(const std::vector<AgentId>& group) const {
    if (group.size() < 2) return 0.0;
    std::set<std::pair<AgentId, AgentId>> edge_set(edges.begin(), edges.end());
    int mutual = 0;
    for (std::size_t i = 0; i < group.size(); ++i)
        for (std::size_t j = i + 1; j < group.size(); ++j)
            if (edge_set.count({group[i], group[j]}) &&
                edge_set.count({group[j], group[i]}))
                ++mutual;
    const double pairs =
        static_cast<double>(group.size()) * (group.size() - 1) / 2.0;
    return mutual / pairs;
}

json NetworkSnapshot::to_json() const {
    json node_list = json::array();
    for (const auto& n : nodes) {
        json item{{"id", n.id},
                  {"out_degree", n.out_degree},
                  {"in_degree", n.in_degree},
                  {"mutual_degree", n.mutual_degree}};
        if (n.has_incoming_mu) item["mean_incoming_mu"] = n.mean_incoming_mu;
        node_list.push_back(std::move(item));
    }
    json edge_list = json::array();
    for (const auto& [a, b] : edges) edge_list.push_back(json::array({a, b}));
    return json{{"round", round}, {"nodes", node_list}, {"edges", edge_list}};
}

std::string NetworkSnapshot::to_dot() const {
    std::ostringstream out;
    out << "digraph willingness {\n";
    for (const auto& n : nodes)
        out << "  \"" << agent_name(n.id) << "\";\n";
    for (const auto& [a, b] : edges)
        out << "  \"" << agent_name(a) << "\" -> \"" << agent_name(b) << "\";\n";
    out << "}\n";
    return out.str();
}

} // namespace repunet
