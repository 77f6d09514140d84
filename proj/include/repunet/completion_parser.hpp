#pragma once

#include <map>
#include <string>

#include "repunet/judgment.hpp"

namespace repunet {

// Extracts "key: value" lines from a model completion. Keys are lowercased
// and trimmed; leading list markers (-, *, digits.) are ignored; the first
// occurrence of a key wins. Exposed for tests.
std::map<std::string, std::string> completion_key_values(const std::string& text);

// Interprets a raw chat completion as a response to `kind`. Tolerant of
// surrounding prose as long as the expected "key: value" lines are present.
// Unusable text (missing or unparseable required fields) raises BackendError
// with retryable=true so the caller may re-query. Range checking/clamping is
// left to validate_response.
JudgmentResponse parse_completion(JudgmentKind kind, const std::string& text);

} // namespace repunet
