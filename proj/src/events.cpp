#include "repunet/events.hpp"

#include <sstream>

namespace repunet {

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::encounter: return "encounter";
        case EventKind::reputation_update: return "reputation_update";
        case EventKind::gossip: return "gossip";
        case EventKind::edge_change: return "edge_change";
        case EventKind::decision: return "decision";
        case EventKind::warning: return "warning";
    }
    return "encounter";
}

EventKind event_kind_from_string(const std::string& name) {
    if (name == "encounter") return EventKind::encounter;
    if (name == "reputation_update") return EventKind::reputation_update;
    if (name == "gossip") return EventKind::gossip;
    if (name == "edge_change") return EventKind::edge_change;
    if (name == "decision") return EventKind::decision;
    if (name == "warning") return EventKind::warning;
    throw ValidationError("unknown event kind: '" + name + "'");
}

json SimEvent::to_json() const {
    return json{{"seq", seq}, {"round", round}, {"kind", to_string(kind)}, {"payload", payload}};
}

SimEvent SimEvent::from_json(const json& j) {
    SimEvent e;
    e.seq = j.at("seq").get<EventSeq>();
    e.round = j.at("round").get<int>();
    e.kind = event_kind_from_string(j.at("kind").get<std::string>());
    e.payload = j.at("payload");
    return e;
}

json to_json(const Reputation& r) {
    return json{{"target", r.target},
                {"scenario", to_string(r.scenario)},
                {"role", r.role},
                {"content", r.content},
                {"mu", r.mu},
                {"updated_at", r.updated_at}};
}

Reputation reputation_from_json(const json& j) {
    return Reputation::make(j.at("target").get<AgentId>(),
                            scenario_from_string(j.at("scenario").get<std::string>()),
                            j.at("role").get<std::string>(), j.at("content").get<std::string>(),
                            j.at("mu").get<double>(), j.at("updated_at").get<EventSeq>());
}

json to_json(const GossipRecord& g) {
    return json{{"target", g.target},
                {"gossiper", g.gossiper},
                {"summary", g.summary},
                {"credibility", g.credibility},
                {"valence", to_string(g.valence)},
                {"received_at", g.received_at}};
}

json to_json(const ScenarioAction& a) {
    json j{{"kind", to_string(a.kind)}};
    switch (a.kind) {
        case ActionKind::invest:
        case ActionKind::allocate:
        case ActionKind::deviate:
        case ActionKind::propose:
            j["amount"] = a.amount;
            break;
        default:
            break;
    }
    return j;
}

ScenarioAction scenario_action_from_json(const json& j) {
    ScenarioAction a;
    a.kind = action_kind_from_string(j.at("kind").get<std::string>());
    a.amount = j.value("amount", 0.0);
    return a;
}

json to_json(const RepuDatabase& db) {
    json peers = json::object();
    for (const auto& [key, rep] : db.peer_reputations()) {
        // One run uses one scenario, so keying the JSON object by target id
        // alone is unambiguous; the scenario is still inside each entry.
        peers[std::to_string(key.first)] = to_json(rep);
    }
    json gossip = json::array();
    for (const auto& g : db.gossip_log()) gossip.push_back(to_json(g));
    json edges = json::array();
    for (AgentId t : db.out_edges()) edges.push_back(t);
    json j{{"owner", db.owner()},
           {"peer_reputations", peers},
           {"out_edges", edges},
           {"gossip_log", gossip},
           {"unreliable_fraction", db.unreliable_fraction()}};
    if (db.self_reputation()) j["self_reputation"] = to_json(*db.self_reputation());
    return j;
}

const SimEvent& EventLog::append(int round, EventKind kind, json payload) {
    SimEvent e;
    e.seq = next_++;
    e.round = round;
    e.kind = kind;
    e.payload = std::move(payload);
    events_.push_back(std::move(e));
    const SimEvent& stored = events_.back();
    if (sink_) {
        (*sink_) << stored.to_json().dump() << '\n';
        sink_->flush();  // keep partial logs usable after an aborted run
    }
    return stored;
}

void EventLog::attach_sink(const std::string& path) {
    auto out = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*out) throw ValidationError("EventLog: cannot open sink '" + path + "'");
    sink_ = std::move(out);
    sink_path_ = path;
    for (const auto& e : events_) (*sink_) << e.to_json().dump() << '\n';
    sink_->flush();
}

void EventLog::detach_sink() {
    sink_.reset();
    sink_path_.clear();
}

std::string EventLog::to_jsonl() const {
    std::string out;
    for (const auto& e : events_) {
        out += e.to_json().dump();
        out += '\n';
    }
    return out;
}

std::vector<SimEvent> EventLog::parse_jsonl(const std::string& text) {
    std::vector<SimEvent> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(SimEvent::from_json(json::parse(line)));
    }
    return out;
}

std::vector<SimEvent> EventLog::read_jsonl_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("EventLog: cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_jsonl(buf.str());
}

}  // namespace repunet
