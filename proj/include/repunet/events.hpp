#pragma once

// Append-only simulation event log with JSONL persistence. One JSON object
// per line: {"kind":..,"payload":{..},"round":..,"seq":..}. Everything the
// metrics layer needs is reconstructible from this file alone.

#include <deque>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "repunet/core_model.hpp"

namespace repunet {

using json = nlohmann::json;

enum class EventKind {
    encounter,
    reputation_update,
    gossip,
    edge_change,
    decision,
    warning
};

const char* to_string(EventKind k);
EventKind event_kind_from_string(const std::string& name);

struct SimEvent {
    EventSeq seq = 0;
    int round = 0;
    EventKind kind = EventKind::encounter;
    json payload;

    json to_json() const;
    static SimEvent from_json(const json& j);
};

// JSON helpers for the domain types (stable field names, keys sorted by the
// serializer, doubles emitted with lossless shortest round-trip text).
json to_json(const Reputation& r);
Reputation reputation_from_json(const json& j);
json to_json(const GossipRecord& g);
json to_json(const ScenarioAction& a);
ScenarioAction scenario_action_from_json(const json& j);
json to_json(const RepuDatabase& db);

// Owns the sequence counter. Events are held in memory and, when a sink file
// is attached, streamed out line-by-line so aborted runs keep a usable log.
class EventLog {
public:
    EventLog() = default;

    // Next sequence number that append() will assign.
    EventSeq next_seq() const { return next_; }

    // The returned reference stays valid for the log's lifetime (deque
    // storage: later appends never relocate earlier events).
    const SimEvent& append(int round, EventKind kind, json payload);

    const std::deque<SimEvent>& events() const { return events_; }
    std::size_t size() const { return events_.size(); }

    // Streaming sink: every append is written (and flushed) to this path.
    void attach_sink(const std::string& path);
    void detach_sink();

    std::string to_jsonl() const;
    static std::vector<SimEvent> read_jsonl_file(const std::string& path);
    static std::vector<SimEvent> parse_jsonl(const std::string& text);

private:
    EventSeq next_ = 0;
    std::deque<SimEvent> events_;
    std::string sink_path_;
    std::unique_ptr<std::ofstream> sink_;
};

}  // namespace repunet
