#include "repunet/completion_parser.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

namespace repunet {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// Strips list markers ("-", "*", "1.", ">") and markdown emphasis from the
// start of a line.
std::string strip_lead(const std::string& s) {
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c)) || c == '-' || c == '*' ||
            c == '>' || c == '#' || c == '`') {
            ++i;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            if (j < s.size() && (s[j] == '.' || s[j] == ')')) {
                i = j + 1;
            } else {
                break;  // a bare number is content, not a marker
            }
        } else {
            break;
        }
    }
    return s.substr(i);
}

std::string strip_emphasis(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s)
        if (c != '*' && c != '_' && c != '`') out += c;
    return out;
}

bool parse_number(const std::string& value, double& out) {
    // Accept the first numeric token in the value ("0.7 (went well)").
    const char* p = value.c_str();
    const char* end = p + value.size();
    while (p < end) {
        if (std::isdigit(static_cast<unsigned char>(*p)) || *p == '-' || *p == '+' ||
            *p == '.') {
            char* stop = nullptr;
            const double v = std::strtod(p, &stop);
            if (stop != p) {
                out = v;
                return true;
            }
            ++p;
        } else {
            ++p;
        }
    }
    return false;
}

bool parse_agent_ref(const std::string& value, AgentId& out) {
    const std::string v = lower(value);
    std::size_t pos = v.find("agent");
    if (pos != std::string::npos) {
        pos += 5;
        while (pos < v.size() && !std::isdigit(static_cast<unsigned char>(v[pos]))) {
            if (v[pos] != '-' && v[pos] != ' ' && v[pos] != ':') return false;
            ++pos;
        }
        if (pos >= v.size()) return false;
        out = static_cast<AgentId>(std::strtol(v.c_str() + pos, nullptr, 10));
        return true;
    }
    double d = 0;
    if (!parse_number(value, d)) return false;
    out = static_cast<AgentId>(d);
    return true;
}

bool parse_yes_no(const std::string& value, bool& out) {
    const std::string v = lower(trim(value));
    if (v.rfind("y", 0) == 0 || v.rfind("keep", 0) == 0 || v.rfind("true", 0) == 0) {
        out = true;
        return true;
    }
    if (v.rfind("n", 0) == 0 || v.rfind("cut", 0) == 0 || v.rfind("drop", 0) == 0 ||
        v.rfind("sever", 0) == 0 || v.rfind("false", 0) == 0) {
        out = false;
        return true;
    }
    return false;
}

bool is_skip_word(const std::string& value) {
    const std::string v = lower(trim(value));
    return v == "unchanged" || v == "none" || v == "skip" || v == "no change" ||
           v == "no-one" || v == "nobody" || v == "no one";
}

[[noreturn]] void bad(const std::string& msg) { throw BackendError(msg, true); }

const std::string& require(const std::map<std::string, std::string>& kv,
                           const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) bad("completion lacks a \"" + key + ":\" line");
    return it->second;
}

ActionKind parse_action_word(const std::string& value) {
    const std::string v = lower(trim(value));
    auto starts = [&](const char* w) { return v.rfind(w, 0) == 0; };
    if (starts("cooperate")) return ActionKind::cooperate;
    if (starts("defect")) return ActionKind::defect;
    if (starts("not_participate") || starts("not participate") || starts("sit") ||
        starts("stay out") || starts("stay_out") || starts("abstain") ||
        starts("withdraw"))
        return ActionKind::not_participate;
    if (starts("participate") || starts("join")) return ActionKind::participate;
    if (starts("invest") || starts("accept")) return ActionKind::invest;
    if (starts("reject") || starts("decline")) return ActionKind::reject;
    if (starts("allocate") || starts("return") || starts("honor") || starts("honour"))
        return ActionKind::allocate;
    if (starts("deviate")) return ActionKind::deviate;
    if (starts("propose") || starts("offer")) return ActionKind::propose;
    bad("unrecognized action word: \"" + value + "\"");
}

} // namespace

std::map<std::string, std::string> completion_key_values(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const std::string body = strip_lead(line);
        const std::size_t colon = body.find(':');
        if (colon == std::string::npos || colon == 0) continue;
        std::string key = lower(trim(strip_emphasis(body.substr(0, colon))));
        if (key.empty() || key.size() > 24) continue;  // long "keys" are prose
        if (key.find(' ') != std::string::npos &&
            key != "no change")  // multi-word prefixes are prose, not keys
            continue;
        std::string value = trim(strip_emphasis(body.substr(colon + 1)));
        kv.emplace(key, value);  // first occurrence wins
    }
    return kv;
}

JudgmentResponse parse_completion(JudgmentKind kind, const std::string& text) {
    if (trim(text).empty()) bad("empty completion");
    const auto kv = completion_key_values(text);
    JudgmentResponse resp;
    resp.kind = kind;

    switch (kind) {
        case JudgmentKind::shape_repu_peer:
        case JudgmentKind::shape_repu_self:
        case JudgmentKind::shape_repu_gossip: {
            const std::string& raw = require(kv, "score");
            if (kind == JudgmentKind::shape_repu_gossip && is_skip_word(raw)) {
                resp.skip = true;
                return resp;
            }
            double mu = 0;
            if (!parse_number(raw, mu)) bad("unparseable score: \"" + raw + "\"");
            resp.mu = mu;
            resp.content = require(kv, "content");
            break;
        }
        case JudgmentKind::gossip_will:
        case JudgmentKind::interact_edge_shape:
        case JudgmentKind::gossip_edge_shape: {
            bool yes = false;
            const std::string& raw = require(kv, "decision");
            if (!parse_yes_no(raw, yes)) bad("unparseable decision: \"" + raw + "\"");
            resp.decision = yes ? EdgeDecision::yes : EdgeDecision::no;
            break;
        }
        case JudgmentKind::gossip_choice: {
            AgentId id = 0;
            const std::string& raw = require(kv, "listener");
            if (!parse_agent_ref(raw, id)) bad("unparseable listener: \"" + raw + "\"");
            resp.chosen = id;
            break;
        }
        case JudgmentKind::gossip_identify: {
            const std::string& raw = require(kv, "target");
            if (is_skip_word(raw)) {
                resp.skip = true;
                return resp;
            }
            AgentId id = 0;
            if (!parse_agent_ref(raw, id)) bad("unparseable target: \"" + raw + "\"");
            resp.chosen = id;
            const std::string v = lower(trim(require(kv, "valence")));
            if (v.rfind("pos", 0) == 0)
                resp.valence = Valence::positive;
            else if (v.rfind("neg", 0) == 0)
                resp.valence = Valence::negative;
            else if (v.rfind("neu", 0) == 0)
                resp.valence = Valence::neutral;
            else
                bad("unparseable valence: \"" + v + "\"");
            resp.summary = require(kv, "summary");
            if (resp.summary.empty()) bad("empty gossip summary");
            break;
        }
        case JudgmentKind::gossip_evaluate: {
            double c = 0;
            const std::string& raw = require(kv, "credibility");
            if (!parse_number(raw, c)) bad("unparseable credibility: \"" + raw + "\"");
            resp.likert = static_cast<int>(c);
            break;
        }
        case JudgmentKind::scenario_action: {
            const ActionKind act = parse_action_word(require(kv, "action"));
            if (act == ActionKind::invest || act == ActionKind::allocate ||
                act == ActionKind::deviate || act == ActionKind::propose) {
                double amt = 0;
                const auto it = kv.find("amount");
                if (it == kv.end() || !parse_number(it->second, amt))
                    bad("action requires an \"amount:\" line");
                resp.action = ScenarioAction::with_amount(act, amt);
            } else {
                resp.action = ScenarioAction::simple(act);
            }
            break;
        }
    }
    return resp;
}

} // namespace repunet
