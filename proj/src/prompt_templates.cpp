#include "repunet/prompt_templates.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "repunet/scenarios.hpp"

namespace repunet {

namespace {

std::string fmt_mu(double mu) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", mu);
    return buf;
}

std::string opinion_text(const std::optional<Reputation>& prior) {
    if (!prior) return "you have no stored opinion of them yet";
    return "your stored opinion of them is " + fmt_mu(prior->mu) + " (" +
           prior->content + ")";
}

} // namespace

const std::vector<std::string>& TemplateSet::required_names() {
    static const std::vector<std::string> names = {
        "shape_repu_peer_first",   "shape_repu_peer_update",
        "shape_repu_self_first",   "shape_repu_self_update",
        "shape_repu_gossip_first", "shape_repu_gossip_update",
        "interact_edge_first",     "interact_edge_update",
        "gossip_edge",             "gossip_will",
        "gossip_choice",           "gossip_identify",
        "gossip_evaluate",         "scenario_action",
    };
    return names;
}

TemplateSet TemplateSet::load_dir(const std::string& dir) {
    TemplateSet set;
    for (const auto& name : required_names()) {
        const std::string path = dir + "/" + name + ".txt";
        std::ifstream in(path);
        if (!in) throw TemplateError("missing template file: " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        set.texts_[name] = buf.str();
    }
    return set;
}

TemplateSet TemplateSet::from_map(std::map<std::string, std::string> texts) {
    TemplateSet set;
    set.texts_ = std::move(texts);
    return set;
}

bool TemplateSet::has(const std::string& name) const {
    return texts_.count(name) != 0;
}

const std::string& TemplateSet::text_for(const std::string& name) const {
    auto it = texts_.find(name);
    if (it == texts_.end()) throw TemplateError("unknown template: " + name);
    return it->second;
}

std::string template_name_for(const JudgmentRequest& req) {
    const bool has_prior = req.prior.has_value();
    switch (req.kind) {
        case JudgmentKind::shape_repu_peer:
            return has_prior ? "shape_repu_peer_update" : "shape_repu_peer_first";
        case JudgmentKind::shape_repu_self:
            return has_prior ? "shape_repu_self_update" : "shape_repu_self_first";
        case JudgmentKind::shape_repu_gossip:
            return has_prior ? "shape_repu_gossip_update" : "shape_repu_gossip_first";
        case JudgmentKind::interact_edge_shape:
            return has_prior ? "interact_edge_update" : "interact_edge_first";
        case JudgmentKind::gossip_edge_shape: return "gossip_edge";
        case JudgmentKind::gossip_will: return "gossip_will";
        case JudgmentKind::gossip_choice: return "gossip_choice";
        case JudgmentKind::gossip_identify: return "gossip_identify";
        case JudgmentKind::gossip_evaluate: return "gossip_evaluate";
        case JudgmentKind::scenario_action: return "scenario_action";
    }
    throw TemplateError("unhandled judgment kind");
}

std::map<std::string, std::string> placeholder_values(const JudgmentRequest& req) {
    std::map<std::string, std::string> v;
    v["agent_name"] = req.agent.name;
    v["agent_id"] = std::to_string(req.agent.id);
    v["persona"] = req.agent.persona_text;
    v["disposition"] = to_string(req.agent.disposition);
    v["scenario"] = to_string(req.scenario);
    v["round"] = std::to_string(req.round);
    v["opinion_text"] = opinion_text(req.prior);

    if (req.prior) {
        v["prior_mu"] = fmt_mu(req.prior->mu);
        v["prior_content"] = req.prior->content;
    }

    if (req.encounter) {
        const auto& e = *req.encounter;
        v["counterpart_name"] = e.counterpart_name;
        v["own_action"] = action_text(e.own_action);
        v["counterpart_action"] = action_text(e.counterpart_action);
        v["own_role"] = e.own_role;
        v["counterpart_role"] = e.counterpart_role;
        v["encounter_summary"] = e.summary;
    }

    if (req.gossip) {
        const auto& g = *req.gossip;
        v["gossiper_name"] = g.gossiper_name;
        v["target_name"] = g.target_name;
        v["gossip_summary"] = g.summary;
        v["gossip_valence"] = to_string(g.valence);
        if (g.credibility)
            v["gossip_credibility"] = std::to_string(*g.credibility);
        v["gossiper_opinion"] = opinion_text(req.gossiper_reputation);
    }

    if (req.unreliable_fraction) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.0f%%", *req.unreliable_fraction * 100.0);
        v["unreliable_percent"] = buf;
    }

    if (!req.candidates.empty()) {
        std::string list;
        for (const auto& [id, mu] : req.candidates) {
            if (!list.empty()) list += "\n";
            list += "- " + agent_name(id) + ": ";
            list += mu ? "your opinion " + fmt_mu(*mu) : "no stored opinion";
        }
        v["candidates"] = list;
    }

    if (!req.conversation.empty()) v["conversation"] = req.conversation;

    {
        const auto& m = req.memory;
        std::string s;
        if (m.positive_about_counterpart && m.negative_about_counterpart)
            s = "you hold both good and bad impressions of them";
        else if (m.positive_about_counterpart)
            s = "what you have seen and heard of them is positive";
        else if (m.negative_about_counterpart)
            s = "what you have seen and heard of them is negative";
        else
            s = "you know nothing about them";
        v["memory_summary"] = s;
        v["times_exploited"] = std::to_string(m.suffered_exploitations);
    }

    {
        const auto& t = req.trade;
        switch (t.point) {
            case TradePoint::propose: v["trade_point"] = "propose"; break;
            case TradePoint::accept: v["trade_point"] = "accept"; break;
            case TradePoint::allocate: v["trade_point"] = "allocate"; break;
            case TradePoint::none: v["trade_point"] = "none"; break;
        }
        v["trade_split"] = fmt_mu(t.split);
        v["trade_invested"] = fmt_mu(t.invested);
        v["balance"] = fmt_mu(t.balance);
    }

    return v;
}

std::string substitute_placeholders(const std::string& text,
                                    const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t open = text.find("{{", pos);
        if (open == std::string::npos) {
            out.append(text, pos, std::string::npos);
            break;
        }
        out.append(text, pos, open - pos);
        const std::size_t close = text.find("}}", open + 2);
        if (close == std::string::npos)
            throw TemplateError("unterminated placeholder near offset " +
                                std::to_string(open));
        const std::string key = text.substr(open + 2, close - open - 2);
        auto it = values.find(key);
        if (it == values.end())
            throw TemplateError("unresolved placeholder: " + key);
        out += it->second;
        pos = close + 2;
    }
    return out;
}

std::string render_prompt(const TemplateSet& set, const JudgmentRequest& req) {
    if (req.agent.persona_text.empty())
        throw TemplateError("agent persona is empty for " + req.agent.name);
    const std::string name = template_name_for(req);
    return substitute_placeholders(set.text_for(name), placeholder_values(req));
}

} // namespace repunet
