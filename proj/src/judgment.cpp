#include "repunet/judgment.hpp"

#include <algorithm>

namespace repunet {

const char* to_string(JudgmentKind k) {
    switch (k) {
        case JudgmentKind::shape_repu_peer: return "shape_repu_peer";
        case JudgmentKind::shape_repu_self: return "shape_repu_self";
        case JudgmentKind::shape_repu_gossip: return "shape_repu_gossip";
        case JudgmentKind::gossip_will: return "gossip_will";
        case JudgmentKind::gossip_choice: return "gossip_choice";
        case JudgmentKind::gossip_identify: return "gossip_identify";
        case JudgmentKind::gossip_evaluate: return "gossip_evaluate";
        case JudgmentKind::interact_edge_shape: return "interact_edge_shape";
        case JudgmentKind::gossip_edge_shape: return "gossip_edge_shape";
        case JudgmentKind::scenario_action: return "scenario_action";
    }
    return "scenario_action";
}

void validate_response(const JudgmentRequest& req, JudgmentResponse& resp) {
    if (resp.kind != req.kind)
        throw BackendError("response kind does not match request", /*retryable=*/false);
    switch (req.kind) {
        case JudgmentKind::shape_repu_peer:
        case JudgmentKind::shape_repu_self:
        case JudgmentKind::shape_repu_gossip: {
            if (resp.skip) {
                if (req.kind != JudgmentKind::shape_repu_gossip)
                    throw BackendError("only gossip-driven updates may be skipped", true);
                break;
            }
            if (!resp.mu) throw BackendError("missing score for reputation update", true);
            if (!std::isfinite(*resp.mu))
                throw BackendError("non-finite score for reputation update", true);
            if (*resp.mu < -1.0 || *resp.mu > 1.0) {
                resp.mu = clamp_mu(*resp.mu);
                resp.clamped = true;
            }
            if (resp.content.empty()) throw BackendError("missing content for reputation update", true);
            break;
        }
        case JudgmentKind::gossip_will:
        case JudgmentKind::interact_edge_shape:
        case JudgmentKind::gossip_edge_shape: {
            if (!resp.decision) throw BackendError("missing Y/N decision", true);
            break;
        }
        case JudgmentKind::gossip_choice: {
            if (!resp.chosen) throw BackendError("missing listener choice", true);
            bool ok = std::any_of(req.candidates.begin(), req.candidates.end(),
                                  [&](const auto& c) { return c.first == *resp.chosen; });
            if (!ok) throw BackendError("chosen listener is not an eligible candidate", true);
            break;
        }
        case JudgmentKind::gossip_identify: {
            if (resp.skip) break;  // conversation identified nobody; exchange is dropped
            if (resp.summary.empty()) throw BackendError("missing gossip summary", true);
            if (!resp.valence) throw BackendError("missing gossip valence", true);
            if (!resp.chosen) throw BackendError("missing identified target", true);
            break;
        }
        case JudgmentKind::gossip_evaluate: {
            if (!resp.likert) throw BackendError("missing credibility rating", true);
            if (*resp.likert < 1 || *resp.likert > 5) {
                resp.likert = std::clamp(*resp.likert, 1, 5);
                resp.clamped = true;
            }
            break;
        }
        case JudgmentKind::scenario_action: {
            if (!resp.action) throw BackendError("missing scenario action", true);
            break;
        }
    }
}

}  // namespace repunet
