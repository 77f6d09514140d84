#pragma once

#include <map>
#include <set>

#include "repunet/judgment.hpp"

namespace repunet {

// Engine-side record of what each agent has personally seen or credibly
// heard about everyone else. This is the memory that scenario decisions fall
// back on when the reputation machinery is ablated away; it is distilled to
// MemorySignals when building a judgment request.
struct TrustSignalBook {
    std::set<std::pair<AgentId, AgentId>> positive;  // (owner, about)
    std::set<std::pair<AgentId, AgentId>> negative;
    std::map<AgentId, int> exploited;  // times owner cooperated and was burned

    void note(AgentId owner, AgentId about, Valence v) {
        if (v == Valence::positive) positive.emplace(owner, about);
        else if (v == Valence::negative) negative.emplace(owner, about);
    }

    void note_exploited(AgentId owner) { ++exploited[owner]; }

    MemorySignals about(AgentId owner, AgentId counterpart) const {
        MemorySignals m;
        m.positive_about_counterpart = positive.count({owner, counterpart}) > 0;
        m.negative_about_counterpart = negative.count({owner, counterpart}) > 0;
        auto it = exploited.find(owner);
        m.suffered_exploitations = it == exploited.end() ? 0 : it->second;
        return m;
    }
};

} // namespace repunet
