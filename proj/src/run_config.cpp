#include "repunet/run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace repunet {

const char* to_string(Ablation a) {
    switch (a) {
        case Ablation::full: return "full";
        case Ablation::no_gossip: return "no_gossip";
        case Ablation::no_reputation: return "no_reputation";
        case Ablation::no_repunet: return "no_repunet";
    }
    return "full";
}

Ablation ablation_from_string(const std::string& name) {
    if (name == "full") return Ablation::full;
    if (name == "no_gossip") return Ablation::no_gossip;
    if (name == "no_reputation") return Ablation::no_reputation;
    if (name == "no_repunet") return Ablation::no_repunet;
    throw ConfigError("unknown ablation: " + name);
}

const char* to_string(BackendKind k) {
    return k == BackendKind::scripted ? "scripted" : "remote";
}

BackendKind backend_kind_from_string(const std::string& name) {
    if (name == "scripted") return BackendKind::scripted;
    if (name == "remote") return BackendKind::remote;
    throw ConfigError("unknown backend: " + name);
}

const char* to_string(PairingChoice p) {
    switch (p) {
        case PairingChoice::automatic: return "auto";
        case PairingChoice::random: return "random";
        case PairingChoice::reputation: return "reputation";
    }
    return "auto";
}

PairingChoice pairing_choice_from_string(const std::string& name) {
    if (name == "auto") return PairingChoice::automatic;
    if (name == "random") return PairingChoice::random;
    if (name == "reputation") return PairingChoice::reputation;
    throw ConfigError("unknown pairing mode: " + name);
}

PairingMode RunConfig::pairing_mode() const {
    switch (pairing) {
        case PairingChoice::random: return PairingMode::random;
        case PairingChoice::reputation: return PairingMode::reputation;
        case PairingChoice::automatic:
            return reputation_enabled() ? PairingMode::reputation
                                        : PairingMode::random;
    }
    return PairingMode::random;
}

void RunConfig::validate() const {
    std::vector<std::string> bad;
    auto check = [&](bool ok, const char* field, const char* why) {
        if (!ok) bad.push_back(std::string(field) + " (" + why + ")");
    };

    check(n_agents >= 2, "n_agents", "need at least two agents");
    check(std::isfinite(epsilon) && epsilon >= 0.0 && epsilon <= 1.0, "epsilon",
          "must be in [0,1]");
    check(max_rounds >= 1, "max_rounds", "must be >= 1");
    check(stabilization.window >= 1, "stabilization.window", "must be >= 1");
    check(std::isfinite(stabilization.band) && stabilization.band >= 0.0,
          "stabilization.band", "must be >= 0");
    check(stabilization.min_rounds >= stabilization.window,
          "stabilization.min_rounds", "must be >= stabilization.window");
    check(std::isfinite(prosocial_fraction) && prosocial_fraction >= 0.0 &&
              prosocial_fraction <= 1.0,
          "prosocial_fraction", "must be in [0,1]");
    check(std::isfinite(initial_balance) && initial_balance >= 0.0,
          "initial_balance", "must be >= 0");
    check(decision_window >= 1, "decision_window", "must be >= 1");

    try {
        payoff.validate();
    } catch (const ValidationError& e) {
        bad.push_back(std::string("payoff (") + e.what() + ")");
    }
    try {
        policy.validate();
    } catch (const ValidationError& e) {
        bad.push_back(std::string("policy (") + e.what() + ")");
    }
    if (backend == BackendKind::remote) {
        try {
            remote.validate();
        } catch (const ValidationError& e) {
            bad.push_back(std::string("remote (") + e.what() + ")");
        }
    }

    if (!bad.empty()) {
        std::ostringstream msg;
        msg << "invalid config: ";
        for (std::size_t i = 0; i < bad.size(); ++i)
            msg << (i ? "; " : "") << bad[i];
        throw ConfigError(msg.str());
    }
}

json RunConfig::to_json() const {
    return json{
        {"n_agents", n_agents},
        {"scenario", to_string(scenario)},
        {"seed", seed},
        {"backend", to_string(backend)},
        {"ablation", to_string(ablation)},
        {"epsilon", epsilon},
        {"max_rounds", max_rounds},
        {"stabilization",
         json{{"window", stabilization.window},
              {"band", stabilization.band},
              {"min_rounds", stabilization.min_rounds}}},
        {"prosocial_fraction", prosocial_fraction},
        {"pairing", to_string(pairing)},
        {"initial_balance", initial_balance},
        {"decision_window", decision_window},
        {"payoff",
         json{{"temptation", payoff.temptation},
              {"reward", payoff.reward},
              {"punishment", payoff.punishment},
              {"sucker", payoff.sucker}}},
        {"policy",
         json{{"delta", policy.delta},
              {"first_mu", policy.first_mu},
              {"edge_threshold", policy.edge_threshold},
              {"sever_mu", policy.sever_mu},
              {"sever_likert_min", policy.sever_likert_min},
              {"gossip_mu_trigger", policy.gossip_mu_trigger},
              {"coop_trust_threshold", policy.coop_trust_threshold},
              {"distrust_threshold", policy.distrust_threshold},
              {"stranger_patience", policy.stranger_patience}}},
        {"remote",
         json{{"endpoint", remote.endpoint},
              {"model", remote.model},
              {"api_key_env", remote.api_key_env},
              {"template_dir", remote.template_dir},
              {"temperature", remote.temperature},
              {"max_attempts", remote.max_attempts},
              {"timeout_seconds", remote.timeout_seconds},
              {"max_tokens", remote.max_tokens}}},
    };
}

namespace {

// Reads known keys out of `j`, complaining about unknown ones — config typos
// should fail loudly, not silently fall back to defaults.
class StrictReader {
  public:
    StrictReader(const json& j, std::string scope)
        : j_(j), scope_(std::move(scope)) {
        if (!j_.is_object())
            throw ConfigError(scope_.empty() ? "config must be a JSON object"
                                             : scope_ + " must be a JSON object");
    }

    template <typename T>
    void get(const char* key, T& out) {
        seen_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end()) return;
        try {
            out = it->get<T>();
        } catch (const json::exception&) {
            throw ConfigError("config field " + path(key) + " has the wrong type");
        }
    }

    void get_enum(const char* key, std::string& out) { get(key, out); }

    const json* child(const char* key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (seen_.count(it.key()) == 0)
                throw ConfigError("unknown config field: " + path(it.key()));
    }

  private:
    std::string path(const std::string& key) const {
        return scope_.empty() ? key : scope_ + "." + key;
    }

    const json& j_;
    std::string scope_;
    std::set<std::string> seen_;
};

} // namespace

RunConfig RunConfig::from_json(const json& j) {
    RunConfig cfg;
    StrictReader r(j, "");

    r.get("n_agents", cfg.n_agents);
    std::string scenario_name = to_string(cfg.scenario);
    r.get("scenario", scenario_name);
    cfg.scenario = scenario_from_string(scenario_name);
    r.get("seed", cfg.seed);
    std::string backend_name = to_string(cfg.backend);
    r.get("backend", backend_name);
    cfg.backend = backend_kind_from_string(backend_name);
    std::string ablation_name = to_string(cfg.ablation);
    r.get("ablation", ablation_name);
    cfg.ablation = ablation_from_string(ablation_name);
    r.get("epsilon", cfg.epsilon);
    r.get("max_rounds", cfg.max_rounds);
    std::string pairing_name = to_string(cfg.pairing);
    r.get("pairing", pairing_name);
    cfg.pairing = pairing_choice_from_string(pairing_name);
    r.get("prosocial_fraction", cfg.prosocial_fraction);
    r.get("initial_balance", cfg.initial_balance);
    r.get("decision_window", cfg.decision_window);

    if (const json* s = r.child("stabilization")) {
        StrictReader sr(*s, "stabilization");
        sr.get("window", cfg.stabilization.window);
        sr.get("band", cfg.stabilization.band);
        sr.get("min_rounds", cfg.stabilization.min_rounds);
        sr.finish();
    }
    if (const json* p = r.child("payoff")) {
        StrictReader pr(*p, "payoff");
        pr.get("temptation", cfg.payoff.temptation);
        pr.get("reward", cfg.payoff.reward);
        pr.get("punishment", cfg.payoff.punishment);
        pr.get("sucker", cfg.payoff.sucker);
        pr.finish();
    }
    if (const json* p = r.child("policy")) {
        StrictReader pr(*p, "policy");
        pr.get("delta", cfg.policy.delta);
        pr.get("first_mu", cfg.policy.first_mu);
        pr.get("edge_threshold", cfg.policy.edge_threshold);
        pr.get("sever_mu", cfg.policy.sever_mu);
        pr.get("sever_likert_min", cfg.policy.sever_likert_min);
        pr.get("gossip_mu_trigger", cfg.policy.gossip_mu_trigger);
        pr.get("coop_trust_threshold", cfg.policy.coop_trust_threshold);
        pr.get("distrust_threshold", cfg.policy.distrust_threshold);
        pr.get("stranger_patience", cfg.policy.stranger_patience);
        pr.finish();
    }
    if (const json* rm = r.child("remote")) {
        StrictReader rr(*rm, "remote");
        rr.get("endpoint", cfg.remote.endpoint);
        rr.get("model", cfg.remote.model);
        rr.get("api_key_env", cfg.remote.api_key_env);
        rr.get("template_dir", cfg.remote.template_dir);
        rr.get("temperature", cfg.remote.temperature);
        rr.get("max_attempts", cfg.remote.max_attempts);
        rr.get("timeout_seconds", cfg.remote.timeout_seconds);
        rr.get("max_tokens", cfg.remote.max_tokens);
        rr.finish();
    }

    r.finish();
    cfg.validate();
    return cfg;
}

RunConfig RunConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
    }
    return from_json(j);
}

} // namespace repunet
