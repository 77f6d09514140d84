#include "repunet/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace repunet {

void PayoffMatrix::validate() const {
    for (double v : {temptation, reward, punishment, sucker})
        if (!std::isfinite(v)) throw ValidationError("payoff values must be finite");
    if (!(temptation > reward && reward > punishment && punishment > sucker))
        throw ValidationError(
            "payoffs must satisfy temptation > reward > punishment > sucker");
    if (!(2.0 * reward > temptation + sucker))
        throw ValidationError(
            "payoffs must satisfy 2*reward > temptation + sucker");
}

std::pair<double, double> pd_payoff(const PayoffMatrix& m, ActionKind a, ActionKind b) {
    auto coop = [](ActionKind k) {
        if (k == ActionKind::cooperate) return true;
        if (k == ActionKind::defect) return false;
        throw ValidationError("matrix game actions must be cooperate or defect");
    };
    const bool ca = coop(a), cb = coop(b);
    if (ca && cb) return {m.reward, m.reward};
    if (!ca && !cb) return {m.punishment, m.punishment};
    if (!ca && cb) return {m.temptation, m.sucker};
    return {m.sucker, m.temptation};
}

bool cooperation_signal(const ScenarioAction& a) {
    switch (a.kind) {
        case ActionKind::cooperate:
        case ActionKind::participate:
        case ActionKind::invest:
        case ActionKind::allocate:
        case ActionKind::propose:
            return true;
        case ActionKind::defect:
        case ActionKind::not_participate:
        case ActionKind::reject:
        case ActionKind::deviate:
            return false;
    }
    throw ValidationError("unhandled action kind");
}

Valence action_valence(const ScenarioAction& a) {
    return cooperation_signal(a) ? Valence::positive : Valence::negative;
}

std::string role_string(ScenarioId scenario, const ScenarioAction& a) {
    switch (scenario) {
        case ScenarioId::pd: return "partner";
        case ScenarioId::participation: return "participant";
        case ScenarioId::trading:
            switch (a.kind) {
                case ActionKind::invest:
                case ActionKind::reject:
                    return "investor";
                default:
                    return "trustee";
            }
    }
    throw ValidationError("unhandled scenario");
}

std::string action_text(const ScenarioAction& a) {
    switch (a.kind) {
        case ActionKind::invest:
        case ActionKind::allocate:
        case ActionKind::deviate:
        case ActionKind::propose: {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%s %.4g", to_string(a.kind), a.amount);
            return buf;
        }
        default:
            return to_string(a.kind);
    }
}

EncounterView make_encounter_view(const Encounter& e, AgentId who) {
    EncounterView v;
    v.counterpart = e.counterpart_of(who);
    v.counterpart_name = agent_name(v.counterpart);
    v.own_action = e.action_of(who);
    v.counterpart_action = e.action_of_counterpart(who);
    v.own_valence = action_valence(v.own_action);
    v.counterpart_valence = action_valence(v.counterpart_action);
    v.own_role = role_string(e.scenario, v.own_action);
    v.counterpart_role = role_string(e.scenario, v.counterpart_action);
    v.summary = e.transcript;
    return v;
}

bool participation_requery_due(int round, int window) {
    if (window < 1) throw ValidationError("requery window must be >= 1");
    return round % window == 0;
}

TradingState TradingState::init(const std::vector<AgentId>& ids, double initial) {
    if (!(initial >= 0.0) || !std::isfinite(initial))
        throw ValidationError("initial balance must be finite and >= 0");
    TradingState s;
    for (AgentId id : ids) s.balance[id] = initial;
    return s;
}

double TradingState::of(AgentId id) const {
    auto it = balance.find(id);
    if (it == balance.end())
        throw ValidationError("no balance for " + agent_name(id));
    return it->second;
}

bool allocation_in_range(double invested, double returned) {
    return std::isfinite(returned) && returned >= 0.0 && returned <= 2.0 * invested;
}

void settle_trade(TradingState& s, AgentId investor, AgentId trustee,
                  double invested, double returned) {
    if (investor == trustee)
        throw ValidationError("a trade needs two distinct parties");
    if (!std::isfinite(invested) || invested < 0.0)
        throw ValidationError("invested amount must be finite and >= 0");
    const double inv_before = s.of(investor);
    const double tru_before = s.of(trustee);
    if (invested > inv_before + 1e-9)
        throw ValidationError(agent_name(investor) +
                              " cannot invest more than their balance");
    if (!allocation_in_range(invested, returned))
        throw ValidationError("returned amount must lie in [0, 2*invested]");

    s.balance[investor] = inv_before - invested + returned;
    s.balance[trustee] = tru_before + 2.0 * invested - returned;

    // The doubled pool injects exactly `invested` units of new value. The
    // tolerance scales with the money in play: an absolute epsilon would
    // reject correct arithmetic once compounding growth pushes balances far
    // above the rounding granularity of double.
    const double before = inv_before + tru_before;
    const double after = s.balance[investor] + s.balance[trustee];
    const double tol = 1e-9 * std::max(1.0, before + invested);
    if (std::fabs(after - (before + invested)) > tol)
        throw ValidationError("trade settlement broke value conservation");
    if (s.balance[investor] < -tol || s.balance[trustee] < -tol)
        throw ValidationError("trade settlement produced a negative balance");
}

} // namespace repunet
