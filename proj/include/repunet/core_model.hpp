#pragma once

// Core domain vocabulary: agents, reputations, gossip records, encounters,
// and the per-agent reputation database. All construction-time invariants
// live here; higher layers can assume any instance they hold is valid.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace repunet {

// Thrown on any domain invariant violation (bad mu, self-loop edge, ...).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Monotone position in the global event log; also used as "last updated at".
using EventSeq = std::uint64_t;

// Agents are dense integer ids 0..n-1. Kept as a strong-ish alias: the code
// treats it as an opaque ordered token and serializes it as an integer.
using AgentId = std::int32_t;

enum class ScenarioId { pd, participation, trading };

const char* to_string(ScenarioId s);
ScenarioId scenario_from_string(const std::string& name);

enum class Disposition { prosocial, self_interested };

const char* to_string(Disposition d);
Disposition disposition_from_string(const std::string& name);

enum class Valence { positive, neutral, negative };

const char* to_string(Valence v);
Valence valence_from_string(const std::string& name);

// +1 / 0 / -1, the multiplier used by the scripted update rules.
inline int valence_sign(Valence v) {
    switch (v) {
        case Valence::positive: return 1;
        case Valence::negative: return -1;
        default: return 0;
    }
}

inline Valence valence_from_sign(int s) {
    if (s > 0) return Valence::positive;
    if (s < 0) return Valence::negative;
    return Valence::neutral;
}

// Clamp a raw judgment score into the legal reputation range [-1, 1].
// Non-finite input is a hard error: it means a backend produced garbage.
inline double clamp_mu(double x) {
    if (!std::isfinite(x)) throw ValidationError("clamp_mu: non-finite value");
    if (x < -1.0) return -1.0;
    if (x > 1.0) return 1.0;
    return x;
}

inline std::string agent_name(AgentId id) { return "Agent-" + std::to_string(id); }

// Static description of an agent: identity, persona text, and behavioral
// disposition. persona_text must be non-empty (prompt rendering requires it).
struct AgentDescription {
    AgentId id = 0;
    std::string name;
    std::string persona_text;
    Disposition disposition = Disposition::prosocial;

    static AgentDescription make(AgentId id, Disposition d, ScenarioId scenario);
};

// One stored opinion: who it is about, in which scenario, the target's role
// there, a one-line textual justification, and the numeric value mu in [-1,1].
// "Most recently stored wins" semantics are enforced by RepuDatabase.
struct Reputation {
    AgentId target = 0;
    ScenarioId scenario = ScenarioId::pd;
    std::string role;     // role of the target in the scenario, e.g. "partner"
    std::string content;  // one-line justification, never empty
    double mu = 0.0;      // always within [-1, 1]
    EventSeq updated_at = 0;

    static Reputation make(AgentId target, ScenarioId scenario, std::string role,
                           std::string content, double mu, EventSeq updated_at);
};

// One received piece of gossip: target, who said it, the listener's summary,
// and the listener's credibility rating on a 1..5 scale (1 = very uncredible).
// The third-party law (target != gossiper, target != listener) is enforced at
// construction and again at insertion into the listener's database.
struct GossipRecord {
    AgentId target = 0;
    AgentId gossiper = 0;
    std::string summary;
    int credibility = 3;  // Likert 1..5
    Valence valence = Valence::neutral;
    EventSeq received_at = 0;

    static GossipRecord make(AgentId target, AgentId gossiper, std::string summary,
                             int credibility, Valence valence, EventSeq received_at);

    // Ratings 1 and 2 count as "uncredible" for the unreliable fraction.
    bool uncredible() const { return credibility <= 2; }
};

enum class EdgeDecision { yes, no };

// An action taken inside a scenario encounter. `kind` covers all three
// scenarios; `amount` carries the invested / returned units where relevant.
enum class ActionKind {
    cooperate,
    defect,
    participate,
    not_participate,
    invest,    // investor accepted and invested `amount`
    reject,    // investor declined the proposal
    allocate,  // trustee honored the agreed split, returning `amount`
    deviate,   // trustee broke the agreement, returning `amount`
    propose    // trustee's proposal stood alone (investor rejected)
};

const char* to_string(ActionKind k);
ActionKind action_kind_from_string(const std::string& name);

struct ScenarioAction {
    ActionKind kind = ActionKind::cooperate;
    double amount = 0.0;

    static ScenarioAction simple(ActionKind k) { return ScenarioAction{k, 0.0}; }
    static ScenarioAction with_amount(ActionKind k, double amount) { return ScenarioAction{k, amount}; }
};

// One completed interaction between two distinct agents in one round.
struct Encounter {
    EventSeq seq = 0;
    int round = 0;
    AgentId a = 0;
    AgentId b = 0;
    ScenarioId scenario = ScenarioId::pd;
    ScenarioAction action_a;
    ScenarioAction action_b;
    double payoff_a = 0.0;
    double payoff_b = 0.0;
    std::string transcript;  // short synthesized summary of what happened

    static Encounter make(EventSeq seq, int round, AgentId a, AgentId b, ScenarioId scenario,
                          ScenarioAction action_a, ScenarioAction action_b,
                          double payoff_a, double payoff_b, std::string transcript);

    AgentId counterpart_of(AgentId who) const;
    const ScenarioAction& action_of(AgentId who) const;
    const ScenarioAction& action_of_counterpart(AgentId who) const;
};

// Per-agent reputation database: optional self-reputation, peer reputations
// keyed by (target, scenario), outgoing willingness edges, and the gossip log.
class RepuDatabase {
public:
    RepuDatabase() = default;
    explicit RepuDatabase(AgentId owner) : owner_(owner) {}

    AgentId owner() const { return owner_; }

    // Latest stored opinion about `target` in `scenario`; absence means the
    // owner holds no opinion (there is no neutral sentinel).
    std::optional<Reputation> peer_reputation(AgentId target, ScenarioId scenario) const;
    const std::optional<Reputation>& self_reputation() const { return self_; }

    // Replace-or-insert per (target, scenario). Rejects target == owner:
    // opinions about oneself go through set_self_reputation.
    void upsert_peer_reputation(const Reputation& r);
    void set_self_reputation(const Reputation& r);

    // Outgoing edges: agents the owner is willing to interact with again.
    bool has_out_edge(AgentId target) const { return out_edges_.count(target) > 0; }
    void add_out_edge(AgentId target);
    void remove_out_edge(AgentId target) { out_edges_.erase(target); }
    const std::set<AgentId>& out_edges() const { return out_edges_; }

    // Gossip the owner has received (as listener). Append-only.
    void append_gossip(const GossipRecord& rec);
    const std::vector<GossipRecord>& gossip_log() const { return gossip_log_; }

    // Fraction of received gossip rated uncredible (Likert <= 2); 0 when the
    // log is empty. This is the P of "prior gossip turned out unreliable".
    double unreliable_fraction() const;

    // All stored peer reputations, ordered by (target, scenario).
    const std::map<std::pair<AgentId, int>, Reputation>& peer_reputations() const {
        return peers_;
    }

private:
    AgentId owner_ = 0;
    std::optional<Reputation> self_;
    std::map<std::pair<AgentId, int>, Reputation> peers_;  // key: (target, scenario)
    std::set<AgentId> out_edges_;
    std::vector<GossipRecord> gossip_log_;
};

// Append-only list of event references visible to one agent: everything it
// participated in or received via gossip. Event payloads live in the log.
struct AgentMemory {
    AgentId owner = 0;
    std::vector<EventSeq> events;

    void remember(EventSeq seq) { events.push_back(seq); }
};

}  // namespace repunet
