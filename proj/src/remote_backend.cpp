#include "repunet/remote_backend.hpp"

#include <cstdlib>

#include <httplib.h>

#include "repunet/completion_parser.hpp"

namespace repunet {

namespace {

struct ParsedUrl {
    std::string scheme, host, path;
    int port = 0;
};

ParsedUrl parse_url(const std::string& url) {
    ParsedUrl u;
    const std::size_t sep = url.find("://");
    if (sep == std::string::npos)
        throw ValidationError("endpoint must start with http:// or https://: " + url);
    u.scheme = url.substr(0, sep);
    if (u.scheme != "http" && u.scheme != "https")
        throw ValidationError("unsupported endpoint scheme: " + u.scheme);
    std::string rest = url.substr(sep + 3);
    const std::size_t slash = rest.find('/');
    std::string hostport = slash == std::string::npos ? rest : rest.substr(0, slash);
    u.path = slash == std::string::npos ? "/" : rest.substr(slash);
    const std::size_t colon = hostport.find(':');
    if (colon != std::string::npos) {
        u.host = hostport.substr(0, colon);
        u.port = std::atoi(hostport.c_str() + colon + 1);
        if (u.port <= 0 || u.port > 65535)
            throw ValidationError("bad endpoint port in " + url);
    } else {
        u.host = hostport;
        u.port = u.scheme == "https" ? 443 : 80;
    }
    if (u.host.empty()) throw ValidationError("endpoint has no host: " + url);
    return u;
}

} // namespace

void RemoteBackendConfig::validate() const {
    parse_url(endpoint);
    if (model.empty()) throw ValidationError("remote.model must be non-empty");
    if (api_key_env.empty())
        throw ValidationError("remote.api_key_env must be non-empty");
    if (!(temperature >= 0.0) || temperature > 2.0)
        throw ValidationError("remote.temperature must be in [0,2]");
    if (max_attempts < 1) throw ValidationError("remote.max_attempts must be >= 1");
    if (timeout_seconds < 1)
        throw ValidationError("remote.timeout_seconds must be >= 1");
    if (max_tokens < 1) throw ValidationError("remote.max_tokens must be >= 1");
}

RemoteBackend::RemoteBackend(RemoteBackendConfig cfg)
    : RemoteBackend(cfg, TemplateSet::load_dir(cfg.template_dir)) {}

RemoteBackend::RemoteBackend(RemoteBackendConfig cfg, TemplateSet templates)
    : cfg_(std::move(cfg)), templates_(std::move(templates)) {
    cfg_.validate();
    const ParsedUrl u = parse_url(cfg_.endpoint);
    scheme_ = u.scheme;
    host_ = u.host;
    path_ = u.path;
    port_ = u.port;
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (scheme_ == "https")
        throw ValidationError("built without TLS support; use an http:// endpoint");
#endif
}

nlohmann::json RemoteBackend::request_payload(const JudgmentRequest& req) const {
    const std::string prompt = render_prompt(templates_, req);
    return nlohmann::json{
        {"model", cfg_.model},
        {"temperature", cfg_.temperature},
        {"max_tokens", cfg_.max_tokens},
        {"messages", nlohmann::json::array({nlohmann::json{
                         {"role", "user"}, {"content", prompt}}})},
    };
}

std::string RemoteBackend::post_once(const std::string& body) {
    httplib::Headers headers;
    if (const char* key = std::getenv(cfg_.api_key_env.c_str());
        key != nullptr && key[0] != '\0') {
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    auto handle = [&](auto& client) -> std::string {
        client.set_connection_timeout(cfg_.timeout_seconds, 0);
        client.set_read_timeout(cfg_.timeout_seconds, 0);
        auto res = client.Post(path_, headers, body, "application/json");
        if (!res)
            throw BackendError("transport failure contacting " + host_ + ": " +
                                   httplib::to_string(res.error()),
                               true);
        if (res->status == 429 || res->status == 408 || res->status >= 500)
            throw BackendError("endpoint returned status " +
                                   std::to_string(res->status),
                               true);
        if (res->status < 200 || res->status >= 300)
            throw BackendError("endpoint returned status " +
                                   std::to_string(res->status) + ": " + res->body,
                               false);
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception& e) {
            throw BackendError(std::string("response is not JSON: ") + e.what(), true);
        }
        try {
            return doc.at("choices").at(0).at("message").at("content")
                .get<std::string>();
        } catch (const nlohmann::json::exception&) {
            throw BackendError("response lacks choices[0].message.content", true);
        }
    };

#ifdef CPPHTTPLIB_OPENSSL_SUPPORT
    if (scheme_ == "https") {
        httplib::SSLClient client(host_, port_);
        return handle(client);
    }
#endif
    httplib::Client client(host_, port_);
    return handle(client);
}

JudgmentResponse RemoteBackend::judge(const JudgmentRequest& req) {
    const std::string body = request_payload(req).dump();
    std::string last_error;
    for (int attempt = 1; attempt <= cfg_.max_attempts; ++attempt) {
        try {
            const std::string completion = post_once(body);
            JudgmentResponse resp = parse_completion(req.kind, completion);
            validate_response(req, resp);
            return resp;
        } catch (const BackendError& e) {
            if (!e.retryable()) throw;
            last_error = e.what();
        }
    }
    throw BackendError("remote backend gave no usable answer for " +
                           std::string(to_string(req.kind)) + " after " +
                           std::to_string(cfg_.max_attempts) +
                           " attempts; last error: " + last_error,
                       false);
}

} // namespace repunet
