#include "repunet/core_model.hpp"

namespace repunet {

const char* to_string(ScenarioId s) {
    switch (s) {
        case ScenarioId::pd: return "pd";
        case ScenarioId::participation: return "participation";
        case ScenarioId::trading: return "trading";
    }
    return "pd";
}

ScenarioId scenario_from_string(const std::string& name) {
    if (name == "pd") return ScenarioId::pd;
    if (name == "participation") return ScenarioId::participation;
    if (name == "trading") return ScenarioId::trading;
    throw ValidationError("unknown scenario: '" + name + "' (expected pd|participation|trading)");
}

const char* to_string(Disposition d) {
    return d == Disposition::prosocial ? "prosocial" : "self_interested";
}

Disposition disposition_from_string(const std::string& name) {
    if (name == "prosocial") return Disposition::prosocial;
    if (name == "self_interested") return Disposition::self_interested;
    throw ValidationError("unknown disposition: '" + name + "'");
}

const char* to_string(Valence v) {
    switch (v) {
        case Valence::positive: return "positive";
        case Valence::negative: return "negative";
        default: return "neutral";
    }
}

Valence valence_from_string(const std::string& name) {
    if (name == "positive") return Valence::positive;
    if (name == "negative") return Valence::negative;
    if (name == "neutral") return Valence::neutral;
    throw ValidationError("unknown valence: '" + name + "'");
}

const char* to_string(ActionKind k) {
    switch (k) {
        case ActionKind::cooperate: return "cooperate";
        case ActionKind::defect: return "defect";
        case ActionKind::participate: return "participate";
        case ActionKind::not_participate: return "not_participate";
        case ActionKind::invest: return "invest";
        case ActionKind::reject: return "reject";
        case ActionKind::allocate: return "allocate";
        case ActionKind::deviate: return "deviate";
        case ActionKind::propose: return "propose";
    }
    return "cooperate";
}

ActionKind action_kind_from_string(const std::string& name) {
    if (name == "cooperate") return ActionKind::cooperate;
    if (name == "defect") return ActionKind::defect;
    if (name == "participate") return ActionKind::participate;
    if (name == "not_participate") return ActionKind::not_participate;
    if (name == "invest") return ActionKind::invest;
    if (name == "reject") return ActionKind::reject;
    if (name == "allocate") return ActionKind::allocate;
    if (name == "deviate") return ActionKind::deviate;
    if (name == "propose") return ActionKind::propose;
    throw ValidationError("unknown action kind: '" + name + "'");
}

AgentDescription AgentDescription::make(AgentId id, Disposition d, ScenarioId scenario) {
    AgentDescription a;
    a.id = id;
    a.name = agent_name(id);
    a.disposition = d;
    std::string setting;
    switch (scenario) {
        case ScenarioId::pd: setting = "repeated two-player exchanges"; break;
        case ScenarioId::participation: setting = "an ongoing community activity"; break;
        case ScenarioId::trading: setting = "repeated investment deals"; break;
    }
    if (d == Disposition::prosocial) {
        a.persona_text = a.name + " values fairness and the wellbeing of the group, and approaches " +
                         setting + " looking for mutually beneficial outcomes.";
    } else {
        a.persona_text = a.name + " cares first about personal gain, and approaches " + setting +
                         " looking for the best deal for themselves.";
    }
    return a;
}

Reputation Reputation::make(AgentId target, ScenarioId scenario, std::string role,
                            std::string content, double mu, EventSeq updated_at) {
    if (!std::isfinite(mu) || mu < -1.0 || mu > 1.0)
        throw ValidationError("Reputation: mu out of range [-1, 1]");
    if (content.empty()) throw ValidationError("Reputation: empty content");
    if (role.empty()) throw ValidationError("Reputation: empty role");
    Reputation r;
    r.target = target;
    r.scenario = scenario;
    r.role = std::move(role);
    r.content = std::move(content);
    r.mu = mu;
    r.updated_at = updated_at;
    return r;
}

GossipRecord GossipRecord::make(AgentId target, AgentId gossiper, std::string summary,
                                int credibility, Valence valence, EventSeq received_at) {
    if (target == gossiper)
        throw ValidationError("GossipRecord: target and gossiper must differ");
    if (credibility < 1 || credibility > 5)
        throw ValidationError("GossipRecord: credibility must be in 1..5");
    if (summary.empty()) throw ValidationError("GossipRecord: empty summary");
    GossipRecord g;
    g.target = target;
    g.gossiper = gossiper;
    g.summary = std::move(summary);
    g.credibility = credibility;
    g.valence = valence;
    g.received_at = received_at;
    return g;
}

Encounter Encounter::make(EventSeq seq, int round, AgentId a, AgentId b, ScenarioId scenario,
                          ScenarioAction action_a, ScenarioAction action_b,
                          double payoff_a, double payoff_b, std::string transcript) {
    if (a == b) throw ValidationError("Encounter: participants must differ");
    if (!std::isfinite(payoff_a) || !std::isfinite(payoff_b))
        throw ValidationError("Encounter: non-finite payoff");
    Encounter e;
    e.seq = seq;
    e.round = round;
    e.a = a;
    e.b = b;
    e.scenario = scenario;
    e.action_a = action_a;
    e.action_b = action_b;
    e.payoff_a = payoff_a;
    e.payoff_b = payoff_b;
    e.transcript = std::move(transcript);
    return e;
}

AgentId Encounter::counterpart_of(AgentId who) const {
    if (who == a) return b;
    if (who == b) return a;
    throw ValidationError("Encounter: agent is not a participant");
}

const ScenarioAction& Encounter::action_of(AgentId who) const {
    if (who == a) return action_a;
    if (who == b) return action_b;
    throw ValidationError("Encounter: agent is not a participant");
}

const ScenarioAction& Encounter::action_of_counterpart(AgentId who) const {
    return action_of(counterpart_of(who));
}

std::optional<Reputation> RepuDatabase::peer_reputation(AgentId target, ScenarioId scenario) const {
    auto it = peers_.find({target, static_cast<int>(scenario)});
    if (it == peers_.end()) return std::nullopt;
    return it->second;
}

void RepuDatabase::upsert_peer_reputation(const Reputation& r) {
    if (r.target == owner_)
        throw ValidationError("RepuDatabase: peer reputation about the owner itself");
    peers_.insert_or_assign({r.target, static_cast<int>(r.scenario)}, r);
}

void RepuDatabase::set_self_reputation(const Reputation& r) {
    if (r.target != owner_)
        throw ValidationError("RepuDatabase: self reputation must target the owner");
    self_ = r;
}

void RepuDatabase::add_out_edge(AgentId target) {
    if (target == owner_) throw ValidationError("RepuDatabase: self-loop edge");
    out_edges_.insert(target);
}

void RepuDatabase::append_gossip(const GossipRecord& rec) {
    if (rec.target == owner_)
        throw ValidationError("RepuDatabase: gossip about the listener itself");
    if (rec.gossiper == owner_)
        throw ValidationError("RepuDatabase: gossip from the listener itself");
    gossip_log_.push_back(rec);
}

double RepuDatabase::unreliable_fraction() const {
    if (gossip_log_.empty()) return 0.0;
    std::size_t bad = 0;
    for (const auto& g : gossip_log_)
        if (g.uncredible()) ++bad;
    return static_cast<double>(bad) / static_cast<double>(gossip_log_.size());
}

}  // namespace repunet
