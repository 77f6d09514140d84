#include "repunet/scripted_policy.hpp"

#include <cctype>
#include <cmath>

namespace repunet {

namespace {

void check_range(const char* field, double v, double lo, double hi) {
    if (!std::isfinite(v) || v < lo || v > hi)
        throw ValidationError(std::string("ScriptedPolicyConfig.") + field + " out of range");
}

}  // namespace

void ScriptedPolicyConfig::validate() const {
    if (!std::isfinite(delta) || delta <= 0.0)
        throw ValidationError("ScriptedPolicyConfig.delta must be > 0");
    check_range("first_mu", first_mu, 0.0, 1.0);
    check_range("edge_threshold", edge_threshold, -1.0, 1.0);
    check_range("sever_mu", sever_mu, -1.0, 1.0);
    if (sever_likert_min < 1 || sever_likert_min > 5)
        throw ValidationError("ScriptedPolicyConfig.sever_likert_min must be in 1..5");
    check_range("gossip_mu_trigger", gossip_mu_trigger, 0.0, 1.0);
    check_range("coop_trust_threshold", coop_trust_threshold, -1.0, 1.0);
    check_range("distrust_threshold", distrust_threshold, -1.0, 1.0);
    if (stranger_patience < 0)
        throw ValidationError("ScriptedPolicyConfig.stranger_patience must be >= 0");
}

std::string valence_verb(ScenarioId scenario, Valence v) {
    if (v == Valence::neutral) return "acted neutrally";
    bool pos = v == Valence::positive;
    switch (scenario) {
        case ScenarioId::pd: return pos ? "cooperated" : "defected";
        case ScenarioId::participation: return pos ? "participated" : "stayed out";
        case ScenarioId::trading: return pos ? "dealt fairly" : "broke the deal";
    }
    return pos ? "cooperated" : "defected";
}

namespace {

const EncounterView& need_encounter(const JudgmentRequest& req) {
    if (!req.encounter)
        throw BackendError("scripted: request is missing its encounter context", false);
    return *req.encounter;
}

const GossipView& need_gossip(const JudgmentRequest& req) {
    if (!req.gossip)
        throw BackendError("scripted: request is missing its gossip context", false);
    return *req.gossip;
}

// Revised opinion value: first impressions are +-first_mu (scaled by `weight`),
// later updates move the prior by delta (scaled likewise) and clamp.
double revised_mu(const ScriptedPolicyConfig& cfg, const std::optional<Reputation>& prior,
                  int valence, double weight) {
    double v = static_cast<double>(valence);
    if (prior) return clamp_mu(prior->mu + cfg.delta * v * weight);
    return cfg.first_mu * v * weight;
}

std::string direction_word(const std::optional<Reputation>& prior, double updated) {
    if (!prior) return "first impression";
    if (updated > prior->mu) return "revised up";
    if (updated < prior->mu) return "revised down";
    return "unchanged";
}

JudgmentResponse shape_peer(const ScriptedPolicyConfig& cfg, const JudgmentRequest& req) {
    const auto& enc = need_encounter(req);
    int v = valence_sign(enc.counterpart_valence);
    JudgmentResponse resp;
    resp.kind = req.kind;
    resp.mu = revised_mu(cfg, req.prior, v, 1.0);
    resp.content = enc.counterpart_name + " " + valence_verb(req.scenario, enc.counterpart_valence) +
                   " in round " + std::to_string(req.round) + "; " +
                   direction_word(req.prior, *resp.mu) + ".";
    return resp;
}

JudgmentResponse shape_self(const ScriptedPolicyConfig& cfg, const JudgmentRequest& req) {
    const auto& enc = need_encounter(req);
    int v = valence_sign(enc.own_valence);
    JudgmentResponse resp;
    resp.kind = req.kind;
    resp.mu = revised_mu(cfg, req.prior, v, 1.0);
    resp.content = req.agent.name + " " + valence_verb(req.scenario, enc.own_valence) +
                   " toward " + enc.counterpart_name + " in round " + std::to_string(req.round) +
                   "; " + direction_word(req.prior, *resp.mu) + ".";
    return resp;
}

JudgmentResponse shape_gossip(const ScriptedPolicyConfig& cfg, const JudgmentRequest& req) {
    const auto& g = need_gossip(req);
    if (!g.credibility)
        throw BackendError("scripted: gossip update without a credibility rating", false);
    JudgmentResponse resp;
    resp.kind = req.kind;
    if (*g.credibility <= 2) {  // uncredible gossip is stored but moves nothing
        resp.skip = true;
        return resp;
    }
    double w = std::fabs((static_cast<double>(*g.credibility) - 3.0) / 2.0);
    int v = valence_sign(g.valence);
    resp.mu = revised_mu(cfg, req.prior, v, w);
    resp.content = g.gossiper_name + " reports " + g.target_name + " " +
                   valence_verb(req.scenario, g.valence) + "; weighed at credibility " +
                   std::to_string(*g.credibility) + ", " + direction_word(req.prior, *resp.mu) + ".";
    return resp;
}

JudgmentResponse gossip_will(const ScriptedPolicyConfig& cfg, const JudgmentRequest& req) {
    JudgmentResponse resp;
    resp.kind = req.kind;
    bool share = false;
    if (req.reputation_enabled) {
        // Share once the freshly updated opinion of the counterpart is strong.
        share = req.prior && std::fabs(req.prior->mu) >= cfg.gossip_mu_trigger;
    } else {
        // No opinions exist; any clearly valenced experience is worth telling.
        share = req.encounter && req.encounter->counterpart_valence != Valence::neutral;
    }
    resp.decision = share ? EdgeDecision::yes : EdgeDecision::no;
    return resp;
}

JudgmentResponse gossip_choice(const JudgmentRequest& req) {
    if (req.candidates.empty())
        throw BackendError("scripted: no eligible gossip listeners", false);
    // Highest stored opinion wins; ties (including all-absent) go to the first
    // candidate in list order. The engine passes candidates in ascending id
    // order when reputation is enabled (so ties break to the lowest id) and in
    // seeded-random order when it is disabled.
    AgentId best = req.candidates.front().first;
    double best_mu = req.candidates.front().second.value_or(0.0);
    for (std::size_t i = 1; i < req.candidates.size(); ++i) {
        double mu = req.candidates[i].second.value_or(0.0);
        if (mu > best_mu) {
            best = req.candidates[i].first;
            best_mu = mu;
        }
    }
    JudgmentResponse resp;
    resp.kind = req.kind;
    resp.chosen = best;
    return resp;
}

JudgmentResponse gossip_identify(const JudgmentRequest& req) {
    const auto& g = need_gossip(req);
    JudgmentResponse resp;
    resp.kind = req.kind;

    // Find the first "Agent-<k>" mention that is neither the gossiper nor the
    // listener; that is who the conversation is about.
    const std::string& text = req.conversation;
    const std::string tag = "Agent-";
    std::optional<AgentId> target;
    for (std::size_t pos = text.find(tag); pos != std::string::npos;
         pos = text.find(tag, pos + 1)) {
        std::size_t i = pos + tag.size();
        if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) continue;
        AgentId id = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            id = id * 10 + (text[i] - '0');
            ++i;
        }
        if (id != g.gossiper && id != req.agent.id) {
            target = id;
            break;
        }
    }
    if (!target) {
        resp.skip = true;  // nobody identified; the engine drops the exchange
        return resp;
    }

    auto contains = [&](const char* word) { return text.find(word) != std::string::npos; };
    Valence v = Valence::neutral;
    if (contains("cooperated") || contains("participated") || contains("dealt fairly") ||
        contains("honored") || contains("invested") || contains("accepted"))
        v = Valence::positive;
    else if (contains("defected") || contains("stayed out") || contains("broke the deal") ||
             contains("deviated") || contains("rejected") || contains("betrayed"))
        v = Valence::negative;

    resp.chosen = *target;
    resp.valence = v;
    resp.summary = g.gossiper_name + " reports " + agent_name(*target) + " " +
                   valence_verb(req.scenario, v);
    return resp;
}

JudgmentResponse gossip_evaluate(const ScriptedPolicyConfig&, const JudgmentRequest& req) {
    if (!req.unreliable_fraction)
        throw BackendError("scripted: gossip_evaluate needs the unreliable fraction", false);
    double mu_g = req.gossiper_reputation ? req.gossiper_reputation->mu : 0.0;
    double p = *req.unreliable_fraction;
    int likert = 3;
    if (mu_g >= 0.5) likert += 1;
    if (mu_g < 0.0) likert -= 1;
    if (p < 0.1) likert += 1;
    if (p > 0.5) likert -= 1;
    likert = likert < 1 ? 1 : (likert > 5 ? 5 : likert);
    JudgmentResponse resp;
    resp.kind = req.kind;
    resp.likert = likert;
    return resp;
}

JudgmentResponse interact_edge(const ScriptedPolicyConfig& cfg, const JudgmentRequest& req) {
    JudgmentResponse resp;
    resp.kind = req.kind;
    bool keep;
    if (req.reputation_enabled && req.prior) {
        keep = req.prior->mu >= cfg.edge_threshold;
    } else {
        // No opinion to lean on: keep whoever just acted cooperatively.
        keep = req.encounter && req.encounter->counterpart_valence == Valence::positive;
    }
    resp.decision = keep ? EdgeDecision::yes : EdgeDecision::no;
    return resp;
}

JudgmentResponse gossip_edge(const ScriptedPolicyConfig& cfg, const JudgmentRequest& req) {
    const auto& g = need_gossip(req);
    if (!g.credibility)
        throw BackendError("scripted: gossip edge decision without a credibility rating", false);
    bool sever;
    if (req.reputation_enabled) {
        sever = req.prior && req.prior->mu < cfg.sever_mu && *g.credibility >= cfg.sever_likert_min;
    } else {
        sever = g.valence == Valence::negative && *g.credibility >= cfg.sever_likert_min;
    }
    JudgmentResponse resp;
    resp.kind = req.kind;
    resp.decision = sever ? EdgeDecision::no : EdgeDecision::yes;
    return resp;
}

// Would this agent act cooperatively toward the counterpart right now?
bool cooperative_stance(const ScriptedPolicyConfig& cfg, const JudgmentRequest& req) {
    if (req.reputation_enabled) {
        if (req.agent.disposition == Disposition::prosocial)
            return !(req.prior && req.prior->mu < cfg.distrust_threshold);
        return req.prior && req.prior->mu >= cfg.coop_trust_threshold;
    }
    // Reputation disabled: self-interested agents always take the selfish
    // action; prosocial agents lean on remembered evidence, staying open to
    // strangers only until exploited stranger_patience times.
    if (req.agent.disposition == Disposition::self_interested) return false;
    if (req.memory.positive_about_counterpart) return true;
    if (req.memory.negative_about_counterpart) return false;
    return req.memory.suffered_exploitations < cfg.stranger_patience;
}

JudgmentResponse scenario_action(const ScriptedPolicyConfig& cfg, const JudgmentRequest& req) {
    JudgmentResponse resp;
    resp.kind = req.kind;
    bool coop = cooperative_stance(cfg, req);
    switch (req.scenario) {
        case ScenarioId::pd:
            resp.action = ScenarioAction::simple(coop ? ActionKind::cooperate : ActionKind::defect);
            break;
        case ScenarioId::participation:
            resp.action = ScenarioAction::simple(coop ? ActionKind::participate
                                                      : ActionKind::not_participate);
            break;
        case ScenarioId::trading:
            switch (req.trade.point) {
                case TradePoint::propose:
                    // An even split of the doubled pool, regardless of stance.
                    resp.action = ScenarioAction::with_amount(ActionKind::propose, 0.5);
                    break;
                case TradePoint::accept:
                    if (coop)
                        resp.action = ScenarioAction::with_amount(ActionKind::invest,
                                                                  0.5 * req.trade.balance);
                    else
                        resp.action = ScenarioAction::simple(ActionKind::reject);
                    break;
                case TradePoint::allocate:
                    if (coop)
                        resp.action = ScenarioAction::with_amount(
                            ActionKind::allocate, req.trade.split * 2.0 * req.trade.invested);
                    else
                        resp.action = ScenarioAction::with_amount(ActionKind::deviate, 0.0);
                    break;
                default:
                    throw BackendError("scripted: trading action without a decision point", false);
            }
            break;
    }
    return resp;
}

}  // namespace

JudgmentResponse ScriptedBackend::judge(const JudgmentRequest& req) {
    JudgmentResponse resp;
    switch (req.kind) {
        case JudgmentKind::shape_repu_peer: resp = shape_peer(cfg_, req); break;
        case JudgmentKind::shape_repu_self: resp = shape_self(cfg_, req); break;
        case JudgmentKind::shape_repu_gossip: resp = shape_gossip(cfg_, req); break;
        case JudgmentKind::gossip_will: resp = gossip_will(cfg_, req); break;
        case JudgmentKind::gossip_choice: resp = gossip_choice(req); break;
        case JudgmentKind::gossip_identify: resp = gossip_identify(req); break;
        case JudgmentKind::gossip_evaluate: resp = gossip_evaluate(cfg_, req); break;
        case JudgmentKind::interact_edge_shape: resp = interact_edge(cfg_, req); break;
        case JudgmentKind::gossip_edge_shape: resp = gossip_edge(cfg_, req); break;
        case JudgmentKind::scenario_action: resp = scenario_action(cfg_, req); break;
    }
    validate_response(req, resp);
    return resp;
}

}  // namespace repunet
