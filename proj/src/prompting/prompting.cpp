// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#include "authorrag/prompting.hpp"

#include "authorrag/digest.hpp"
#include "authorrag/error.hpp"
#include "authorrag/resources.hpp"
#include "authorrag/text.hpp"

#include <array>
#include <set>

namespace authorrag {
namespace {

constexpr std::array<std::string_view, 7> kPlaceholders = {"role",        "explanation", "examples",   "features",
                                                           "contrastive", "query",       "instruction"};
constexpr std::array<std::string_view, 4> kRequired = {"role", "examples", "query", "instruction"};

const std::string& value_of(const PromptTemplate::Values& v, std::string_view name) {
    if (name == "role") return v.role;
    if (name == "explanation") return v.explanation;
    if (name == "examples") return v.examples;
    if (name == "features") return v.features;
    if (name == "contrastive") return v.contrastive;
    if (name == "query") return v.query;
    return v.instruction;
}

bool is_placeholder(std::string_view name) {
    for (const auto p : kPlaceholders) {
        if (p == name) {
            return true;
        }
    }
    return false;
}

// Placeholder name when `line` is exactly one placeholder, else empty.
std::string_view sole_placeholder(std::string_view line) {
    const auto t = text::trim(line);
    if (t.size() > 2 && t.front() == '{' && t.back() == '}' && is_placeholder(t.substr(1, t.size() - 2))) {
        return t.substr(1, t.size() - 2);
    }
    return {};
}

struct Labels {
    std::string_view input;
    std::string_view output; // empty when the document is its own output
};

Labels labels_for(Task task) {
    switch (task) {
    case Task::LaMP4:
        return {"Article", "Headline"};
    case Task::LaMP5:
        return {"Abstract", "Title"};
    case Task::LaMP7:
        return {"Tweet", ""};
    }
    return {"Text", "Output"};
}

void append_document(std::string& out, Task task, const ProfileDocument& doc) {
    const auto labels = labels_for(task);
    if (labels.output.empty()) {
        out.append(labels.input).append(": ").append(doc.output_text).append("\n");
        return;
    }
    out.append(labels.input).append(": ").append(doc.input_text).append("\n");
    out.append(labels.output).append(": ").append(doc.output_text).append("\n");
}

std::size_t line_count(std::string_view s) {
    if (text::trim(s).empty()) {
        return 0;
    }
    std::size_t n = 1;
    for (const char c : text::trim(s)) {
        n += c == '\n' ? 1 : 0;
    }
    return n;
}

} // namespace

PromptBundle PromptBundle::for_task(Task task) {
    PromptBundle b;
    b.task = task;
    b.role = std::string(task_role(task));
    b.instruction = std::string(task_instruction(task));
    return b;
}

std::string_view task_instruction(Task task) noexcept {
    switch (task) {
    case Task::LaMP4:
        return "Write a headline for the article in the input, in this author's style. Reply with the headline only.";
    case Task::LaMP5:
        return "Write a title for the abstract in the input, in this author's style. Reply with the title only.";
    case Task::LaMP7:
        return "Paraphrase the tweet in the input in this author's style. Reply with the paraphrased tweet only.";
    }
    return "";
}

std::size_t CharProxyCounter::count(std::string_view s) const { return (text::codepoint_count(s) + 3) / 4; }

std::string_view drop_policy_name(DropPolicy p) noexcept {
    return p == DropPolicy::ProfileFirst ? "profile_first" : "contrastive_first";
}

DropPolicy parse_drop_policy(std::string_view name) {
    if (name == "profile_first") {
        return DropPolicy::ProfileFirst;
    }
    if (name == "contrastive_first") {
        return DropPolicy::ContrastiveFirst;
    }
    throw ConfigError("unknown drop policy '" + std::string(name) + "' (profile_first, contrastive_first)");
}

PromptTemplate::PromptTemplate(std::string text) : text_(std::move(text)) {
    std::set<std::string_view> seen;
    std::string_view rest = text_;
    while (true) {
        const auto open = rest.find('{');
        if (open == std::string_view::npos) {
            break;
        }
        const auto close = rest.find('}', open);
        if (close == std::string_view::npos) {
            break;
        }
        const auto name = rest.substr(open + 1, close - open - 1);
        if (!is_placeholder(name)) {
            throw ConfigError("prompt template has unknown placeholder {" + std::string(name) + "}");
        }
        seen.insert(name);
        rest.remove_prefix(close + 1);
    }
    for (const auto r : kRequired) {
        if (seen.count(r) == 0) {
            throw ConfigError("prompt template lacks the {" + std::string(r) + "} placeholder");
        }
    }
}

PromptTemplate PromptTemplate::load(const std::filesystem::path& path) { return PromptTemplate(read_file(path)); }

PromptTemplate PromptTemplate::builtin() { return load(data_file("templates/prompt.txt")); }

std::string PromptTemplate::digest() const { return sha256_hex(text_); }

std::string PromptTemplate::render(const Values& values) const {
    std::string out;
    std::string_view rest = text_;
    bool skip_blank = false;
    while (!rest.empty()) {
        const auto nl = rest.find('\n');
        const auto line = rest.substr(0, nl);
        const bool has_nl = nl != std::string_view::npos;
        rest.remove_prefix(has_nl ? nl + 1 : rest.size());

        if (skip_blank && text::trim(line).empty()) {
            skip_blank = false;
            continue;
        }
        skip_blank = false;
        if (const auto name = sole_placeholder(line); !name.empty() && value_of(values, name).empty()) {
            skip_blank = true;
            continue;
        }
        for (std::size_t i = 0; i < line.size();) {
            if (line[i] == '{') {
                const auto close = line.find('}', i);
                if (close != std::string_view::npos && is_placeholder(line.substr(i + 1, close - i - 1))) {
                    out += value_of(values, line.substr(i + 1, close - i - 1));
                    i = close + 1;
                    continue;
                }
            }
            out += line[i++];
        }
        if (has_nl) {
            out += '\n';
        }
    }
    return out;
}

std::string explanation_text(Task task, bool has_features, bool has_contrastive) {
    std::string out;
    switch (task) {
    case Task::LaMP4:
        out = "Below are news articles this author wrote earlier, each with the headline the author gave it.";
        break;
    case Task::LaMP5:
        out = "Below are paper abstracts this author wrote earlier, each with the title the author gave it.";
        break;
    case Task::LaMP7:
        out = "Below are tweets this author wrote earlier.";
        break;
    }
    if (has_features) {
        out += " After them comes a description of the author's writing style.";
    }
    if (has_contrastive) {
        out += " Then come writings by other authors. Their style is not this author's style and should not be "
               "imitated.";
    }
    out += " Last comes the input to work on.";
    return out;
}

std::string render_profile_examples(Task task, const std::vector<ProfileDocument>& docs, std::size_t count) {
    std::string out(kProfileMarker);
    out += "\n";
    for (std::size_t i = 0; i < count && i < docs.size(); ++i) {
        out += (i == 0 ? "" : "\n");
        out += "[" + std::to_string(i + 1) + "]\n";
        append_document(out, task, docs[i]);
    }
    out.pop_back();
    return out;
}

std::string render_contrastive_examples(Task task, const std::vector<ContrastiveEntry>& entries, std::size_t count) {
    if (count == 0 || entries.empty()) {
        return {};
    }
    std::string out(kContrastiveMarker);
    out += "\n";
    std::size_t author_no = 0;
    std::size_t doc_no = 0;
    for (std::size_t i = 0; i < count && i < entries.size(); ++i) {
        if (i == 0 || entries[i].author_id != entries[i - 1].author_id) {
            ++author_no;
            doc_no = 0;
        }
        ++doc_no;
        out += (i == 0 ? "" : "\n");
        out += "[Other author " + std::to_string(author_no) + ", writing " + std::to_string(doc_no) + "]\n";
        append_document(out, task, entries[i].document);
    }
    out.pop_back();
    return out;
}

BuiltPrompt build_prompt(const PromptTemplate& tmpl, const PromptBundle& bundle, const PromptOptions& options) {
    if (bundle.profile_examples.empty()) {
        throw PreconditionError("a prompt needs at least one profile example");
    }
    if (text::trim(bundle.query_input).empty()) {
        throw PreconditionError("a prompt needs a query input");
    }
    if (!options.counter) {
        throw PreconditionError("prompt options need a token counter");
    }
    const bool has_features = bundle.feature_text && !text::trim(*bundle.feature_text).empty();
    const std::vector<ContrastiveEntry> no_entries;
    const auto& entries = bundle.contrastive ? bundle.contrastive->entries : no_entries;

    PromptTemplate::Values values;
    values.role = bundle.role;
    values.features = has_features ? std::string(kFeatureMarker) + "\n" + *bundle.feature_text : std::string();
    values.query = std::string(kQueryMarker) + "\n" + bundle.query_input;
    values.instruction = bundle.instruction;

    auto assemble = [&](std::size_t n_profile, std::size_t n_contrastive) {
        values.explanation = explanation_text(bundle.task, has_features, n_contrastive > 0);
        values.examples = render_profile_examples(bundle.task, bundle.profile_examples, n_profile);
        values.contrastive = render_contrastive_examples(bundle.task, entries, n_contrastive);
        BuiltPrompt p;
        p.text = tmpl.render(values);
        p.tokens = options.counter->count(p.text);
        p.profile_kept = n_profile;
        p.contrastive_kept = n_contrastive;
        p.feature_lines = has_features ? line_count(*bundle.feature_text) : 0;
        return p;
    };

    if (options.budget) {
        const auto minimal = assemble(1, 0);
        if (minimal.tokens > *options.budget) {
            throw PromptBudgetError(minimal.tokens, *options.budget);
        }
    }
    std::size_t n_profile = bundle.profile_examples.size();
    std::size_t n_contrastive = entries.size();
    auto prompt = assemble(n_profile, n_contrastive);
    while (options.budget && prompt.tokens > *options.budget) {
        const bool drop_profile = options.policy == DropPolicy::ProfileFirst ? n_profile > 1 : n_contrastive == 0;
        if (drop_profile) {
            --n_profile;
        } else {
            --n_contrastive;
        }
        prompt = assemble(n_profile, n_contrastive);
    }
    return prompt;
}

} // namespace authorrag
