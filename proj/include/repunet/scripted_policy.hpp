#pragma once

// Deterministic judgment policy: a small, hand-checkable rule family that
// stands in for a language model. Same request in, same response out, always.

#include "repunet/judgment.hpp"

namespace repunet {

struct ScriptedPolicyConfig {
    double delta = 0.2;      // per-encounter opinion step
    double first_mu = 0.5;   // magnitude of a first impression
    double edge_threshold = 0.0;         // keep a partner while mu >= this
    double sever_mu = -0.3;              // gossip severs below this ...
    int sever_likert_min = 4;            // ... when rated at least this credible
    double gossip_mu_trigger = 0.6;      // share experiences once |mu| reaches this
    double coop_trust_threshold = 0.3;   // self-interested cooperate at/above this
    double distrust_threshold = -0.3;    // prosocial defect below this
    int stranger_patience = 3;  // exploitations a prosocial agent tolerates before
                                // turning guarded toward strangers (no-reputation play)

    // Throws ValidationError naming the first offending field.
    void validate() const;
};

class ScriptedBackend : public JudgmentBackend {
public:
    ScriptedBackend() = default;
    explicit ScriptedBackend(ScriptedPolicyConfig cfg) : cfg_(cfg) { cfg_.validate(); }

    JudgmentResponse judge(const JudgmentRequest& req) override;
    std::string name() const override { return "scripted"; }

    const ScriptedPolicyConfig& config() const { return cfg_; }

private:
    ScriptedPolicyConfig cfg_;
};

// Shared vocabulary for synthesized opinion text; scenario-aware verb for a
// valence ("cooperated" / "defected" in the base scenario, etc.).
std::string valence_verb(ScenarioId scenario, Valence v);

}  // namespace repunet
