// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#pragma once

#include "authorrag/corpus.hpp"
#include "authorrag/retrieval.hpp"

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace authorrag {

struct PromptBundle {
    Task task = Task::LaMP4;
    std::string role;
    /// Rank order, best first. Must be non-empty.
    std::vector<ProfileDocument> profile_examples;
    std::optional<std::string> feature_text;
    std::optional<ContrastiveSet> contrastive;
    std::string query_input;
    std::string instruction;

    /// role and instruction filled from the task defaults.
    static PromptBundle for_task(Task task);
};

std::string_view task_instruction(Task task) noexcept;

inline constexpr std::string_view kProfileMarker = "### Past writings of this author";
inline constexpr std::string_view kFeatureMarker = "### Writing style of this author";
inline constexpr std::string_view kContrastiveMarker = "### Writings of OTHER authors (not this author)";
inline constexpr std::string_view kQueryMarker = "### Input";

class TokenCounter {
  public:
    virtual ~TokenCounter() = default;
    virtual std::size_t count(std::string_view text) const = 0;
    virtual std::string name() const = 0;
};

/// ceil(code points / 4).
class CharProxyCounter final : public TokenCounter {
  public:
    std::size_t count(std::string_view text) const override;
    std::string name() const override { return "chars/4"; }
};

enum class DropPolicy { ProfileFirst, ContrastiveFirst };

std::string_view drop_policy_name(DropPolicy p) noexcept;
DropPolicy parse_drop_policy(std::string_view name);

/// Plain-text template with placeholders {role}, {explanation}, {examples},
/// {features}, {contrastive}, {query}, {instruction}. A line consisting only
/// of a placeholder whose value is empty is removed together with one
/// following blank line.
class PromptTemplate {
  public:
    /// Throws ConfigError for unknown or missing mandatory placeholders.
    explicit PromptTemplate(std::string text);

    static PromptTemplate load(const std::filesystem::path& path);
    /// data/templates/prompt.txt
    static PromptTemplate builtin();

    const std::string& text() const noexcept { return text_; }
    std::string digest() const;

    struct Values {
        std::string role, explanation, examples, features, contrastive, query, instruction;
    };
    std::string render(const Values& values) const;

  private:
    std::string text_;
};

struct PromptOptions {
    /// No limit when unset.
    std::optional<std::size_t> budget;
    DropPolicy policy = DropPolicy::ProfileFirst;
    std::shared_ptr<const TokenCounter> counter = std::make_shared<CharProxyCounter>();
};

struct BuiltPrompt {
    std::string text;
    std::size_t tokens = 0;
    std::size_t profile_kept = 0;
    std::size_t contrastive_kept = 0;
    std::size_t feature_lines = 0;
};

/// Sections in fixed order: role, explanation, profile examples, features,
/// contrastive examples, query, instruction. Over budget, whole documents are
/// dropped from the tail; the top profile example, features and query stay.
/// Throws PromptBudgetError when even the mandatory sections do not fit.
BuiltPrompt build_prompt(const PromptTemplate& tmpl, const PromptBundle& bundle, const PromptOptions& options = {});

std::string render_profile_examples(Task task, const std::vector<ProfileDocument>& docs, std::size_t count);
std::string render_contrastive_examples(Task task, const std::vector<ContrastiveEntry>& entries, std::size_t count);
std::string explanation_text(Task task, bool has_features, bool has_contrastive);

} // namespace authorrag
