#pragma once

#include <map>
#include <utility>

#include "repunet/core_model.hpp"
#include "repunet/judgment.hpp"

namespace repunet {

// One-shot matrix game payoffs. Defaults give the classic dilemma:
// mutual cooperation 3/3, mutual defection 1/1, sucker/tempter 0/5.
struct PayoffMatrix {
    double temptation = 5.0;  // I defect, they cooperate
    double reward = 3.0;      // both cooperate
    double punishment = 1.0;  // both defect
    double sucker = 0.0;      // I cooperate, they defect

    // Requires temptation > reward > punishment > sucker and
    // 2*reward > temptation + sucker (so alternating exploitation
    // cannot beat sustained cooperation).
    void validate() const;
};

// Payoffs for (a, b) given their simultaneous cooperate/defect choices.
std::pair<double, double> pd_payoff(const PayoffMatrix& m, ActionKind a, ActionKind b);

// Whether an action reads as cooperative in its scenario. Proposing a split
// counts as cooperative (offering a deal is not a betrayal); rejecting,
// defecting, deviating, and staying out do not.
bool cooperation_signal(const ScenarioAction& a);

// positive for cooperative actions, negative otherwise.
Valence action_valence(const ScenarioAction& a);

// Role label a counterpart holds in an encounter, derived from the action it
// took there ("partner" for the matrix game, "participant" for the group
// scenario, investor/trustee for trading).
std::string role_string(ScenarioId scenario, const ScenarioAction& a);

// Human-readable action ("cooperate", "invest 5") for transcripts and prompts.
std::string action_text(const ScenarioAction& a);

// The judging agent `who`'s view of an encounter: names, both actions with
// their valence, roles, and the transcript.
EncounterView make_encounter_view(const Encounter& e, AgentId who);

// --- participation scenario ---

// Standing participation decisions are re-queried every `window` rounds.
bool participation_requery_due(int round, int window);

// --- trading scenario ---

// Running balances, one per agent, starting from `initial`.
struct TradingState {
    std::map<AgentId, double> balance;

    static TradingState init(const std::vector<AgentId>& ids, double initial);
    double of(AgentId id) const;
};

// Completed-trade arithmetic: the investor hands over `invested` (doubled in
// transit), the trustee returns `returned` of the doubled pool. Throws
// ValidationError on conservation or range violations (invested beyond the
// investor's balance, returned outside [0, 2*invested], negative balances).
void settle_trade(TradingState& s, AgentId investor, AgentId trustee,
                  double invested, double returned);

// Checks a trustee's allocation against the doubled pool: in [0, 2*invested].
bool allocation_in_range(double invested, double returned);

} // namespace repunet
