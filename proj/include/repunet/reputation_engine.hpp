#pragma once

#include "repunet/events.hpp"
#include "repunet/judgment.hpp"

namespace repunet {

enum class UpdateCause { direct_encounter, gossip };
const char* to_string(UpdateCause c);

// Result of one reputation-shaping operation: the stored entry before (absent
// on a first impression) and after, plus what triggered it.
struct ReputationUpdate {
    AgentId owner = 0;
    std::optional<Reputation> before;
    Reputation after;
    UpdateCause cause = UpdateCause::direct_encounter;
    EventSeq cause_seq = 0;  // encounter or gossip event that triggered this
    EventSeq event_seq = 0;  // the reputation_update event that records it
};

// Revise `observer`'s opinion of the encounter counterpart. Queries the
// backend, stores the result in the observer's database (most recently
// stored wins), and appends a reputation_update event whose payload carries
// before/after and the cause. A clamped backend value is logged as a warning
// event first.
ReputationUpdate shape_repu_peer(JudgmentBackend& backend, RepuDatabase& db,
                                 const AgentDescription& observer,
                                 const Encounter& enc, EventLog& log,
                                 bool reputation_enabled, bool gossip_enabled);

// Same, for the observer's opinion of their own conduct in the encounter.
ReputationUpdate shape_repu_self(JudgmentBackend& backend, RepuDatabase& db,
                                 const AgentDescription& observer,
                                 const Encounter& enc, EventLog& log,
                                 bool reputation_enabled, bool gossip_enabled);

// Revise the listener's opinion of a gossip target from a received, already
// credibility-rated record. Returns nothing when the backend declines to move
// the opinion (uncredible gossip still sits in the log but shapes nothing).
std::optional<ReputationUpdate> shape_repu_gossip(
    JudgmentBackend& backend, RepuDatabase& db, const AgentDescription& listener,
    const GossipRecord& rec, ScenarioId scenario, int round, EventSeq gossip_seq,
    EventLog& log, bool reputation_enabled, bool gossip_enabled);

} // namespace repunet
