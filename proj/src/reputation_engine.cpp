#include "repunet/reputation_engine.hpp"

#include "repunet/scenarios.hpp"

namespace repunet {

namespace {

// Role recorded for a target known only through hearsay.
std::string generic_role(ScenarioId s) {
    switch (s) {
        case ScenarioId::pd: return "partner";
        case ScenarioId::participation: return "participant";
        case ScenarioId::trading: return "trading partner";
    }
    throw ValidationError("unhandled scenario");
}

void warn_clamped(EventLog& log, int round, AgentId owner, JudgmentKind kind) {
    log.append(round, EventKind::warning,
               json{{"what", "score clamped into [-1,1]"},
                    {"owner", owner},
                    {"operation", to_string(kind)}});
}

ReputationUpdate store_and_record(RepuDatabase& db, EventLog& log, int round,
                                  const AgentDescription& owner,
                                  std::optional<Reputation> before, Reputation after,
                                  UpdateCause cause, EventSeq cause_seq) {
    if (after.target == owner.id)
        db.set_self_reputation(after);
    else
        db.upsert_peer_reputation(after);

    json payload{{"owner", owner.id},
                 {"cause", to_string(cause)},
                 {"cause_seq", cause_seq},
                 {"after", to_json(after)}};
    if (before) payload["before"] = to_json(*before);

    const SimEvent& ev = log.append(round, EventKind::reputation_update, payload);

    ReputationUpdate upd;
    upd.owner = owner.id;
    upd.before = std::move(before);
    upd.after = std::move(after);
    upd.cause = cause;
    upd.cause_seq = cause_seq;
    upd.event_seq = ev.seq;
    return upd;
}

ReputationUpdate shape_from_encounter(JudgmentBackend& backend, RepuDatabase& db,
                                      const AgentDescription& observer,
                                      const Encounter& enc, EventLog& log,
                                      JudgmentKind kind, bool reputation_enabled,
                                      bool gossip_enabled) {
    const bool about_self = kind == JudgmentKind::shape_repu_self;
    const EncounterView view = make_encounter_view(enc, observer.id);
    const AgentId target = about_self ? observer.id : view.counterpart;

    JudgmentRequest req;
    req.kind = kind;
    req.agent = observer;
    req.scenario = enc.scenario;
    req.round = enc.round;
    req.reputation_enabled = reputation_enabled;
    req.gossip_enabled = gossip_enabled;
    req.encounter = view;
    req.prior = about_self ? db.self_reputation()
                           : db.peer_reputation(target, enc.scenario);

    JudgmentResponse resp = backend.judge(req);
    if (resp.clamped) warn_clamped(log, enc.round, observer.id, kind);

    const EventSeq seq = log.next_seq();
    Reputation after = Reputation::make(
        target, enc.scenario, about_self ? view.own_role : view.counterpart_role,
        resp.content, *resp.mu, seq);
    return store_and_record(db, log, enc.round, observer, req.prior,
                            std::move(after), UpdateCause::direct_encounter,
                            enc.seq);
}

} // namespace

const char* to_string(UpdateCause c) {
    switch (c) {
        case UpdateCause::direct_encounter: return "direct_encounter";
        case UpdateCause::gossip: return "gossip";
    }
    return "?";
}

ReputationUpdate shape_repu_peer(JudgmentBackend& backend, RepuDatabase& db,
                                 const AgentDescription& observer,
                                 const Encounter& enc, EventLog& log,
                                 bool reputation_enabled, bool gossip_enabled) {
    return shape_from_encounter(backend, db, observer, enc, log,
                                JudgmentKind::shape_repu_peer, reputation_enabled,
                                gossip_enabled);
}

ReputationUpdate shape_repu_self(JudgmentBackend& backend, RepuDatabase& db,
                                 const AgentDescription& observer,
                                 const Encounter& enc, EventLog& log,
                                 bool reputation_enabled, bool gossip_enabled) {
    return shape_from_encounter(backend, db, observer, enc, log,
                                JudgmentKind::shape_repu_self, reputation_enabled,
                                gossip_enabled);
}

std::optional<ReputationUpdate> shape_repu_gossip(
    JudgmentBackend& backend, RepuDatabase& db, const AgentDescription& listener,
    const GossipRecord& rec, ScenarioId scenario, int round, EventSeq gossip_seq,
    EventLog& log, bool reputation_enabled, bool gossip_enabled) {
    JudgmentRequest req;
    req.kind = JudgmentKind::shape_repu_gossip;
    req.agent = listener;
    req.scenario = scenario;
    req.round = round;
    req.reputation_enabled = reputation_enabled;
    req.gossip_enabled = gossip_enabled;
    req.prior = db.peer_reputation(rec.target, scenario);

    GossipView view;
    view.target = rec.target;
    view.gossiper = rec.gossiper;
    view.gossiper_name = agent_name(rec.gossiper);
    view.target_name = agent_name(rec.target);
    view.summary = rec.summary;
    view.valence = rec.valence;
    view.credibility = rec.credibility;
    req.gossip = view;

    JudgmentResponse resp = backend.judge(req);
    if (resp.skip) return std::nullopt;
    if (resp.clamped)
        warn_clamped(log, round, listener.id, JudgmentKind::shape_repu_gossip);

    const EventSeq seq = log.next_seq();
    const std::string role =
        req.prior ? req.prior->role : generic_role(scenario);
    Reputation after =
        Reputation::make(rec.target, scenario, role, resp.content, *resp.mu, seq);
    return store_and_record(db, log, round, listener, req.prior, std::move(after),
                            UpdateCause::gossip, gossip_seq);
}

} // namespace repunet
