#pragma once

#include <map>
#include <set>
#include <vector>

#include "repunet/events.hpp"
#include "repunet/judgment.hpp"
#include "repunet/rng.hpp"

namespace repunet {

enum class PairingMode { random, reputation };
const char* to_string(PairingMode m);

// One round's matching: disjoint pairs (each stored low-id first) plus
// whoever sat the round out.
struct PairingPlan {
    std::vector<std::pair<AgentId, AgentId>> pairs;
    std::vector<AgentId> unmatched;
};

// Picks this round's interaction partners.
//
// random: a seeded shuffle paired off adjacently (one agent idles when the
// count is odd). Round 1 is always random regardless of mode — nobody knows
// anybody yet.
//
// reputation: agents are visited in seeded-shuffled order; each unmatched
// agent first rolls the exploration dice (probability epsilon) for a uniform
// draw among unmatched strangers — pairs with no prior encounter where
// neither side holds a stored opinion of the other — then falls back to its
// best mutually-willing neighbor (both out-edges present), preferring the
// highest stored opinion and breaking ties toward the lowest id. An agent
// with neither a stranger draw nor a willing neighbor sits the round out:
// partnering is by mutual consent, never imposed.
PairingPlan select_partners(int round, PairingMode mode,
                            const std::vector<AgentId>& ids,
                            const std::map<AgentId, RepuDatabase>& dbs,
                            const std::set<std::pair<AgentId, AgentId>>& met,
                            ScenarioId scenario, double epsilon, Rng& rng);

// Post-encounter judgment: does `owner` keep the counterpart as a potential
// future partner? Applies the answer to the owner's out-edge and appends an
// edge_change event when (and only when) the edge actually changed.
EdgeDecision interact_edge_shape(JudgmentBackend& backend, RepuDatabase& db,
                                 const AgentDescription& owner,
                                 const Encounter& enc, EventLog& log,
                                 bool reputation_enabled, bool gossip_enabled);

// Post-gossip judgment: after hearing `rec`, does the listener keep its
// existing out-edge to the target? Only call when that edge exists. Appends
// an edge_change event if the edge is severed.
EdgeDecision gossip_edge_shape(JudgmentBackend& backend, RepuDatabase& db,
                               const AgentDescription& listener,
                               const GossipRecord& rec, ScenarioId scenario,
                               int round, EventLog& log, bool reputation_enabled,
                               bool gossip_enabled);

struct NodeStat {
    AgentId id = 0;
    int out_degree = 0;
    int in_degree = 0;
    int mutual_degree = 0;
    double mean_incoming_mu = 0.0;  // over peers' stored opinions of this node
    bool has_incoming_mu = false;
};

// A structural snapshot of the willingness graph at one moment.
struct NetworkSnapshot {
    int round = 0;
    std::vector<NodeStat> nodes;                       // ascending id
    std::vector<std::pair<AgentId, AgentId>> edges;    // directed, sorted

    static NetworkSnapshot capture(int round,
                                   const std::map<AgentId, RepuDatabase>& dbs,
                                   ScenarioId scenario);

    // Rebuilds the graph as of the end of an event log by replaying its
    // edge_change and reputation_update events.
    static NetworkSnapshot from_events(const std::vector<SimEvent>& events);

    // Fraction of unordered pairs inside `group` joined in both directions.
    // Pass all node ids for the global density.
    double reciprocated_density(const std::vector<AgentId>& group) const;

    json to_json() const;
    std::string to_dot() const;
};

} // namespace repunet
