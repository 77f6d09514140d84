#pragma once

// The judgment seam: every subjective call an agent makes (revise an opinion,
// decide to gossip, pick a listener, rate credibility, keep or cut an edge,
// choose a scenario action) is phrased as a JudgmentRequest and answered by a
// JudgmentBackend. Backends are interchangeable: a deterministic scripted
// policy for tests and batch experiments, or a remote chat-completion model.
//
// A request carries exactly the inputs the operation is defined over. The
// backend must behave as a pure function of the request (plus its own fixed
// config); all randomness and all mutable state stay in the engine.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "repunet/core_model.hpp"

namespace repunet {

// Raised when a backend cannot produce a usable answer. `retryable` means the
// caller may re-issue the request (transport hiccup, malformed completion);
// non-retryable errors abort the run.
class BackendError : public std::runtime_error {
public:
    BackendError(const std::string& what, bool retryable)
        : std::runtime_error(what), retryable_(retryable) {}
    bool retryable() const { return retryable_; }

private:
    bool retryable_;
};

enum class JudgmentKind {
    shape_repu_peer,    // revise opinion of the encounter counterpart
    shape_repu_self,    // revise opinion of one's own conduct
    shape_repu_gossip,  // revise opinion of a gossip target
    gossip_will,        // share this experience with someone?
    gossip_choice,      // with whom?
    gossip_identify,    // who is the conversation about, and how did they act?
    gossip_evaluate,    // how credible is what I just heard?
    interact_edge_shape,  // keep the counterpart as a future partner?
    gossip_edge_shape,    // keep the gossip target as a future partner?
    scenario_action       // what do I do in this encounter?
};

const char* to_string(JudgmentKind k);

// The judging agent's view of one encounter.
struct EncounterView {
    AgentId counterpart = 0;
    std::string counterpart_name;
    ScenarioAction own_action;
    ScenarioAction counterpart_action;
    Valence own_valence = Valence::neutral;          // cooperativeness of own action
    Valence counterpart_valence = Valence::neutral;  // cooperativeness of counterpart's action
    std::string counterpart_role;  // counterpart's role in the scenario
    std::string own_role;
    std::string summary;  // short transcript of the encounter
};

// The judging agent's view of one piece of gossip (being heard or acted on).
struct GossipView {
    AgentId target = 0;
    AgentId gossiper = 0;
    std::string gossiper_name;
    std::string target_name;
    std::string summary;
    Valence valence = Valence::neutral;
    std::optional<int> credibility;  // set once the listener has rated it
};

// Remembered evidence about a specific counterpart, distilled by the engine
// from the agent's own history. Only consulted when reputation is disabled.
struct MemorySignals {
    bool positive_about_counterpart = false;  // they cooperated with me, or credible praise
    bool negative_about_counterpart = false;  // they wronged me, or credible warnings
    int suffered_exploitations = 0;           // times I cooperated and was defected on
};

enum class TradePoint { none, propose, accept, allocate };

struct TradeContext {
    TradePoint point = TradePoint::none;
    double split = 0.0;     // trustee's proposed share of the doubled pool
    double invested = 0.0;  // amount the investor put in (allocate stage)
    double balance = 0.0;   // judging agent's current balance
};

struct JudgmentRequest {
    JudgmentKind kind = JudgmentKind::scenario_action;
    AgentDescription agent;  // the judging agent
    ScenarioId scenario = ScenarioId::pd;
    int round = 0;
    bool reputation_enabled = true;
    bool gossip_enabled = true;

    std::optional<EncounterView> encounter;
    std::optional<Reputation> prior;  // the prior opinion relevant to `kind`
    std::optional<GossipView> gossip;
    std::optional<Reputation> gossiper_reputation;  // listener's opinion of the gossiper
    std::optional<double> unreliable_fraction;      // listener's P of past gossip being junk
    std::string conversation;                       // raw text for gossip_identify

    // gossip_choice: eligible listeners with the gossiper's stored opinion of
    // each (absent where none). Tie-breaking follows list order, so the engine
    // controls canonical-vs-shuffled ordering.
    std::vector<std::pair<AgentId, std::optional<double>>> candidates;

    MemorySignals memory;
    TradeContext trade;
};

struct JudgmentResponse {
    JudgmentKind kind = JudgmentKind::scenario_action;
    std::optional<double> mu;          // shape_repu_*
    std::string content;               // shape_repu_*: textual justification
    std::optional<EdgeDecision> decision;  // gossip_will / interact_edge / gossip_edge
    std::optional<int> likert;             // gossip_evaluate, 1..5
    std::optional<AgentId> chosen;         // gossip_choice / gossip_identify (identified target)
    std::string summary;                   // gossip_identify
    std::optional<Valence> valence;        // gossip_identify
    std::optional<ScenarioAction> action;  // scenario_action
    bool clamped = false;  // true if validation had to clamp an out-of-range value

    // shape_repu_gossip: "this gossip should not move my opinion" (uncredible);
    // gossip_identify: "the conversation identifies nobody" (exchange dropped).
    bool skip = false;
};

// Normalize and check a response against its request. Out-of-range numeric
// values are clamped into the legal range and flagged via `clamped` (the
// engine logs a warning); structurally unusable responses raise BackendError
// with retryable=true so the caller can re-query.
void validate_response(const JudgmentRequest& req, JudgmentResponse& resp);

class JudgmentBackend {
public:
    virtual ~JudgmentBackend() = default;
    virtual JudgmentResponse judge(const JudgmentRequest& req) = 0;
    virtual std::string name() const = 0;
};

}  // namespace repunet
