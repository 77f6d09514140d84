#pragma once

#include <map>
#include <vector>

#include "repunet/events.hpp"
#include "repunet/judgment.hpp"
#include "repunet/rng.hpp"
#include "repunet/trust_signals.hpp"

namespace repunet {

// One completed single-hop gossip exchange, as recorded in the event log.
struct GossipExchange {
    AgentId gossiper = 0;
    AgentId listener = 0;
    AgentId target = 0;
    std::string summary;
    Valence valence = Valence::neutral;
    int credibility = 3;
    EventSeq event_seq = 0;
};

// Runs the per-round gossip phase over every agent that had an encounter this
// round, in ascending id order. For each would-be gossiper: decide whether to
// share (gossip_will), pick a listener (gossip_choice), synthesize the
// conversation, let the listener identify the subject (gossip_identify) and
// rate credibility (gossip_evaluate), store the record in the listener's
// database, then — when reputation is enabled — revise the listener's opinion
// of the target and reconsider the listener's outgoing edge to the target.
//
// The third-party law (target is never the gossiper or the listener) is
// enforced here regardless of what a backend answers; violating or
// unidentifiable exchanges are dropped with a warning event. With fewer than
// three agents there is never an eligible listener, so every exchange cancels
// with a warning.
std::vector<GossipExchange> run_gossip_phase(
    JudgmentBackend& backend, const std::vector<AgentDescription>& agents,
    std::map<AgentId, RepuDatabase>& dbs, std::map<AgentId, AgentMemory>& memories,
    TrustSignalBook& signals, const std::vector<Encounter>& round_encounters,
    int round, ScenarioId scenario, bool reputation_enabled, EventLog& log,
    Rng& rng);

// Conversation text a gossiper opens with; the listener parses the subject
// and tone out of this. Exposed for tests.
std::string synthesize_conversation(const AgentDescription& gossiper,
                                    AgentId target, ScenarioId scenario,
                                    Valence valence, int round);

} // namespace repunet
