#pragma once

#include <map>
#include <string>

#include "repunet/core_model.hpp"
#include "repunet/judgment.hpp"

namespace repunet {

// Raised when a template file is missing, a placeholder cannot be resolved,
// or a required context value is empty.
class TemplateError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

// A set of prompt templates loaded from a directory of .txt files. Templates
// contain {{placeholder}} markers that are substituted at render time from
// the judgment request. One file per (operation, prior-variant) combination.
class TemplateSet {
  public:
    // Loads every template listed by required_names() from `dir`.
    // Throws TemplateError naming the first missing file.
    static TemplateSet load_dir(const std::string& dir);

    // Builds a set from in-memory texts (used by tests).
    static TemplateSet from_map(std::map<std::string, std::string> texts);

    // File stems (without .txt) that load_dir expects to find.
    static const std::vector<std::string>& required_names();

    const std::string& text_for(const std::string& name) const;
    bool has(const std::string& name) const;

  private:
    std::map<std::string, std::string> texts_;
};

// Selects the template name for a request: operation plus, for the
// reputation-shaping and interaction-edge operations, whether a prior
// reputation entry exists ("first" vs "update" variant).
std::string template_name_for(const JudgmentRequest& req);

// Builds the placeholder map for a request. Exposed for tests.
std::map<std::string, std::string> placeholder_values(const JudgmentRequest& req);

// Substitutes {{placeholder}} markers in `text` from `values`.
// Throws TemplateError naming any marker without a value.
std::string substitute_placeholders(const std::string& text,
                                    const std::map<std::string, std::string>& values);

// Full pipeline: pick template, build values, substitute.
// Throws TemplateError if the agent persona is empty or a marker is
// unresolved.
std::string render_prompt(const TemplateSet& set, const JudgmentRequest& req);

} // namespace repunet
