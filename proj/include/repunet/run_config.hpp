#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "repunet/core_model.hpp"
#include "repunet/network_graph.hpp"
#include "repunet/remote_backend.hpp"
#include "repunet/scenarios.hpp"
#include "repunet/scripted_policy.hpp"

namespace repunet {

// Which parts of the two-level machinery a run exercises:
//   full          — reputation databases + gossip + reputation-driven pairing
//   no_gossip     — reputation + reputation-driven pairing, gossip silenced
//   no_reputation — gossip still flows, but no databases and random pairing
//   no_repunet    — neither level: bare agents, random pairing
enum class Ablation { full, no_gossip, no_reputation, no_repunet };
const char* to_string(Ablation a);
Ablation ablation_from_string(const std::string& name);

enum class BackendKind { scripted, remote };
const char* to_string(BackendKind k);
BackendKind backend_kind_from_string(const std::string& name);

// Pairing override: `automatic` follows the ablation (reputation-driven
// whenever reputation is enabled, random otherwise).
enum class PairingChoice { automatic, random, reputation };
const char* to_string(PairingChoice p);
PairingChoice pairing_choice_from_string(const std::string& name);

struct StabilizationConfig {
    int window = 10;      // rounds the cooperation rate is examined over
    double band = 0.05;   // max-min spread that counts as flat
    int min_rounds = 30;  // never declare stability before this many rounds
};

// Raised by RunConfig::validate / from_json; the message names every
// offending field.
class ConfigError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

struct RunConfig {
    int n_agents = 20;
    ScenarioId scenario = ScenarioId::pd;
    std::uint64_t seed = 42;
    BackendKind backend = BackendKind::scripted;
    Ablation ablation = Ablation::full;
    double epsilon = 0.2;  // stranger-exploration probability per agent-round
    int max_rounds = 100;
    StabilizationConfig stabilization;
    double prosocial_fraction = 0.5;  // ceil(fraction * n) agents are prosocial
    PairingChoice pairing = PairingChoice::automatic;
    double initial_balance = 10.0;  // trading scenario opening balance
    int decision_window = 5;        // participation standing re-queried every k rounds
    PayoffMatrix payoff;
    ScriptedPolicyConfig policy;
    RemoteBackendConfig remote;

    bool reputation_enabled() const {
        return ablation == Ablation::full || ablation == Ablation::no_gossip;
    }
    bool gossip_enabled() const {
        return ablation == Ablation::full || ablation == Ablation::no_reputation;
    }
    PairingMode pairing_mode() const;

    // Throws ConfigError listing every invalid field at once.
    void validate() const;

    json to_json() const;
    // Strict: unknown keys are errors (they are almost always typos).
    static RunConfig from_json(const json& j);
    static RunConfig load_file(const std::string& path);
};

} // namespace repunet
