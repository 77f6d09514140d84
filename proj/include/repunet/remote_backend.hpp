#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "repunet/judgment.hpp"
#include "repunet/prompt_templates.hpp"

namespace repunet {

// Connection settings for a chat-completion HTTP endpoint. The request format
// is the widely used chat-completions shape: POST {model, temperature,
// messages:[{role,content}]} -> {choices:[{message:{content}}]}.
struct RemoteBackendConfig {
    std::string endpoint = "http://localhost:8080/v1/chat/completions";
    std::string model = "default";
    std::string api_key_env = "REPUNET_API_KEY";  // env var holding the bearer token
    std::string template_dir = "templates";
    double temperature = 0.0;  // deterministic decoding by default
    int max_attempts = 3;      // per judgment, counting the first try
    int timeout_seconds = 30;
    int max_tokens = 512;

    void validate() const;  // throws ValidationError naming the bad field
};

// Judgment backend that renders a prompt template for each request, sends it
// to a chat-completion endpoint, and parses the completion. Malformed
// completions and transient transport errors are retried up to
// `max_attempts`; exhaustion raises a non-retryable BackendError (the engine
// aborts the run).
class RemoteBackend : public JudgmentBackend {
  public:
    explicit RemoteBackend(RemoteBackendConfig cfg);
    RemoteBackend(RemoteBackendConfig cfg, TemplateSet templates);

    JudgmentResponse judge(const JudgmentRequest& req) override;
    std::string name() const override { return "remote"; }

    // The JSON body that would be POSTed for `req`. Exposed for tests.
    nlohmann::json request_payload(const JudgmentRequest& req) const;

  private:
    std::string post_once(const std::string& body);  // returns completion text

    RemoteBackendConfig cfg_;
    TemplateSet templates_;
    std::string scheme_, host_, path_;
    int port_ = 0;
};

} // namespace repunet
