// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#include "authorrag/corpus.hpp"

#include "authorrag/error.hpp"
#include "authorrag/resources.hpp"
#include "authorrag/text.hpp"

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <map>
#include <set>
#include <sstream>

namespace authorrag {

using nlohmann::json;

std::string_view task_name(Task task) noexcept {
    switch (task) {
    case Task::LaMP4:
        return "LaMP_4";
    case Task::LaMP5:
        return "LaMP_5";
    case Task::LaMP7:
        return "LaMP_7";
    }
    return "LaMP_4";
}

Task parse_task(std::string_view name) {
    std::string key;
    for (char ch : text::to_lower_ascii(name)) {
        if (ch != '_' && ch != '-' && ch != ' ') {
            key += ch;
        }
    }
    if (key == "lamp4" || key == "4") {
        return Task::LaMP4;
    }
    if (key == "lamp5" || key == "5") {
        return Task::LaMP5;
    }
    if (key == "lamp7" || key == "7") {
        return Task::LaMP7;
    }
    throw ConfigError("unknown task '" + std::string(name) + "' (expected LaMP_4, LaMP_5 or LaMP_7)");
}

std::string_view split_name(Split split) noexcept {
    switch (split) {
    case Split::Train:
        return "train";
    case Split::Validation:
        return "validation";
    case Split::Test:
        return "test";
    }
    return "validation";
}

Split parse_split(std::string_view name) {
    const auto key = text::to_lower_ascii(name);
    if (key == "train") {
        return Split::Train;
    }
    if (key == "validation" || key == "dev" || key == "val") {
        return Split::Validation;
    }
    if (key == "test") {
        return Split::Test;
    }
    throw ConfigError("unknown split '" + std::string(name) + "'");
}

bool is_title_task(Task task) noexcept { return task == Task::LaMP4 || task == Task::LaMP5; }

std::string_view task_role(Task task) noexcept {
    switch (task) {
    case Task::LaMP4:
        return "You are a news editor who writes headlines for the news articles you publish.";
    case Task::LaMP5:
        return "You are a scholar who writes titles for the research papers you author.";
    case Task::LaMP7:
        return "You are a social media user who writes your own tweets and paraphrases them in your personal style.";
    }
    return "";
}

// --- Corpus -----------------------------------------------------------------

Corpus::Corpus(Task task, Split split, std::vector<TaskInstance> instances)
    : task_(task), split_(split), instances_(std::move(instances)) {
    std::set<std::string> ids;
    std::map<std::string, const AuthorProfile*> authors;
    for (const auto& inst : instances_) {
        if (inst.task != task_) {
            throw IngestionError(inst.instance_id, "instance task " + std::string(task_name(inst.task)) +
                                                       " does not match corpus task " + std::string(task_name(task_)));
        }
        if (!ids.insert(inst.instance_id).second) {
            throw IngestionError(inst.instance_id, "duplicate instance id");
        }
        if (text::trim(inst.query_input).empty()) {
            throw IngestionError(inst.instance_id, "empty input");
        }
        if (split_ != Split::Test && !inst.gold_output) {
            throw IngestionError(inst.instance_id, "missing gold output for " + std::string(split_name(split_)) +
                                                       " split");
        }
        if (inst.profile.documents.empty()) {
            throw IngestionError(inst.instance_id, "empty profile");
        }
        std::set<std::string> doc_ids;
        for (const auto& doc : inst.profile.documents) {
            if (!doc_ids.insert(doc.doc_id).second) {
                throw IngestionError(inst.instance_id, "duplicate profile document id '" + doc.doc_id + "'");
            }
            if (text::trim(doc.input_text).empty()) {
                throw IngestionError(inst.instance_id, "empty profile document '" + doc.doc_id + "'");
            }
        }
        auto [it, inserted] = authors.emplace(inst.profile.author_id, &inst.profile);
        if (!inserted && !(*it->second == inst.profile)) {
            throw IngestionError(inst.instance_id,
                                 "author '" + inst.profile.author_id + "' appears with two different profiles");
        }
    }
}

std::optional<std::size_t> Corpus::find(std::string_view instance_id) const {
    for (std::size_t i = 0; i < instances_.size(); ++i) {
        if (instances_[i].instance_id == instance_id) {
            return i;
        }
    }
    return std::nullopt;
}

// --- LaMP ingestion ---------------------------------------------------------

namespace {

void require_utf8(std::string_view raw, const std::string& label) {
    if (!text::is_valid_utf8(raw)) {
        // Locate the first bad byte for the message.
        std::size_t lo = 0;
        std::size_t hi = raw.size();
        while (hi - lo > 1) {
            const auto mid = lo + (hi - lo) / 2;
            if (text::is_valid_utf8(raw.substr(0, mid))) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        throw IngestionError(label, "invalid UTF-8 near byte offset " + std::to_string(lo));
    }
}

std::string id_string(const json& value) {
    if (value.is_string()) {
        return value.get<std::string>();
    }
    if (value.is_number_integer()) {
        return std::to_string(value.get<long long>());
    }
    if (value.is_number_unsigned()) {
        return std::to_string(value.get<unsigned long long>());
    }
    return {};
}

std::optional<std::string> string_field(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) {
        return std::nullopt;
    }
    return it->get<std::string>();
}

struct ProfileKeys {
    const char* input;
    const char* output; // nullptr = self-paired
};

ProfileKeys profile_keys(Task task) {
    switch (task) {
    case Task::LaMP4:
        return {"text", "title"};
    case Task::LaMP5:
        return {"abstract", "title"};
    case Task::LaMP7:
        return {"text", nullptr};
    }
    return {"text", "title"};
}

json parse_json(std::string_view raw, const std::string& label) {
    require_utf8(raw, label);
    try {
        return json::parse(raw);
    } catch (const json::parse_error& e) {
        throw IngestionError(label, std::string("malformed JSON: ") + e.what());
    }
}

} // namespace

Corpus ingest_json(std::string_view questions_json, std::optional<std::string_view> outputs_json, Task task,
                   Split split) {
    const auto questions = parse_json(questions_json, "<questions>");
    if (!questions.is_array()) {
        throw IngestionError("<questions>", "expected a JSON array of question records");
    }
    const auto keys = profile_keys(task);

    std::vector<TaskInstance> instances;
    instances.reserve(questions.size());
    std::map<std::string, std::size_t> index_by_id;

    for (std::size_t r = 0; r < questions.size(); ++r) {
        const auto& rec = questions[r];
        std::string id = rec.is_object() && rec.contains("id") ? id_string(rec["id"]) : std::string{};
        if (id.empty()) {
            throw IngestionError("#" + std::to_string(r), "record has no id");
        }
        auto input = string_field(rec, "input");
        if (!input) {
            throw IngestionError(id, "missing 'input' field");
        }
        auto trimmed_input = std::string(text::trim(*input));
        if (trimmed_input.empty()) {
            throw IngestionError(id, "empty 'input' field");
        }
        auto prof_it = rec.find("profile");
        if (prof_it == rec.end() || !prof_it->is_array()) {
            throw IngestionError(id, "missing 'profile' array");
        }

        AuthorProfile profile;
        profile.author_id = rec.contains("user_id") ? id_string(rec["user_id"]) : id;
        if (profile.author_id.empty()) {
            profile.author_id = id;
        }
        for (std::size_t p = 0; p < prof_it->size(); ++p) {
            const auto& entry = (*prof_it)[p];
            if (!entry.is_object()) {
                throw IngestionError(id, "profile entry " + std::to_string(p) + " is not an object");
            }
            std::string doc_id = entry.contains("id") ? id_string(entry["id"]) : std::string{};
            if (doc_id.empty()) {
                doc_id = id + "#" + std::to_string(p);
            }
            auto in = string_field(entry, keys.input);
            if (!in) {
                throw IngestionError(id, "profile entry '" + doc_id + "' lacks '" + keys.input + "'");
            }
            ProfileDocument doc;
            doc.doc_id = doc_id;
            doc.input_text = std::string(text::trim(*in));
            if (keys.output != nullptr) {
                auto out = string_field(entry, keys.output);
                if (!out) {
                    throw IngestionError(id, "profile entry '" + doc_id + "' lacks '" + keys.output + "'");
                }
                doc.output_text = std::string(text::trim(*out));
            } else {
                doc.output_text = doc.input_text;
            }
            if (doc.input_text.empty()) {
                spdlog::warn("record {}: dropping empty profile entry '{}'", id, doc_id);
                continue;
            }
            profile.documents.push_back(std::move(doc));
        }
        if (profile.documents.empty()) {
            throw IngestionError(id, "profile has no non-empty documents");
        }

        if (index_by_id.count(id) != 0) {
            throw IngestionError(id, "duplicate question id");
        }
        index_by_id.emplace(id, instances.size());
        TaskInstance inst;
        inst.instance_id = id;
        inst.task = task;
        inst.query_input = std::move(trimmed_input);
        inst.profile = std::move(profile);
        instances.push_back(std::move(inst));
    }

    if (outputs_json) {
        const auto outputs = parse_json(*outputs_json, "<outputs>");
        const json* golds = nullptr;
        if (outputs.is_object() && outputs.contains("golds") && outputs["golds"].is_array()) {
            golds = &outputs["golds"];
            if (auto t = string_field(outputs, "task"); t && parse_task(*t) != task) {
                throw JoinError("outputs file is for task " + *t + ", expected " + std::string(task_name(task)));
            }
        } else if (outputs.is_array()) {
            golds = &outputs;
        } else {
            throw IngestionError("<outputs>", "expected {\"task\", \"golds\": [...]}");
        }
        for (const auto& g : *golds) {
            std::string gid = g.is_object() && g.contains("id") ? id_string(g["id"]) : std::string{};
            auto out = g.is_object() ? string_field(g, "output") : std::nullopt;
            if (gid.empty() || !out) {
                throw IngestionError(gid.empty() ? "<outputs>" : gid, "gold record needs 'id' and 'output'");
            }
            auto it = index_by_id.find(gid);
            if (it == index_by_id.end()) {
                throw JoinError("gold output '" + gid + "' has no matching question");
            }
            instances[it->second].gold_output = std::string(text::trim(*out));
        }
    }

    return Corpus(task, split, std::move(instances));
}

Corpus ingest(const std::filesystem::path& questions_path, const std::optional<std::filesystem::path>& outputs_path,
              Task task, std::optional<Split> split) {
    if (!std::filesystem::exists(questions_path)) {
        throw IngestionError(questions_path.string(), "questions file does not exist");
    }
    Split resolved = outputs_path ? Split::Validation : Split::Test;
    if (split) {
        resolved = *split;
    } else {
        const auto name = text::to_lower_ascii(questions_path.filename().string());
        if (name.find("train") != std::string::npos) {
            resolved = Split::Train;
        } else if (name.find("dev") != std::string::npos || name.find("val") != std::string::npos) {
            resolved = Split::Validation;
        } else if (name.find("test") != std::string::npos) {
            resolved = Split::Test;
        }
    }
    const auto questions = read_file(questions_path);
    std::optional<std::string> outputs;
    if (outputs_path) {
        outputs = read_file(*outputs_path);
    }
    return ingest_json(questions, outputs ? std::optional<std::string_view>(*outputs) : std::nullopt, task, resolved);
}

// --- normalized serialization ---------------------------------------------

std::string serialize_corpus(const Corpus& corpus) {
    std::ostringstream out;
    json header = {{"schema", kCorpusSchema},
                   {"task", task_name(corpus.task())},
                   {"split", split_name(corpus.split())},
                   {"count", corpus.size()}};
    out << header.dump() << '\n';
    for (const auto& inst : corpus.instances()) {
        json docs = json::array();
        for (const auto& d : inst.profile.documents) {
            docs.push_back({{"id", d.doc_id}, {"input", d.input_text}, {"output", d.output_text}});
        }
        json rec = {{"id", inst.instance_id},
                    {"author_id", inst.profile.author_id},
                    {"input", inst.query_input},
                    {"gold", inst.gold_output ? json(*inst.gold_output) : json(nullptr)},
                    {"profile", std::move(docs)}};
        out << rec.dump() << '\n';
    }
    return out.str();
}

Corpus deserialize_corpus(std::string_view jsonl) {
    require_utf8(jsonl, "<corpus>");
    std::istringstream in{std::string(jsonl)};
    std::string line;
    if (!std::getline(in, line)) {
        throw IngestionError("<corpus>", "empty corpus file");
    }
    const auto header = json::parse(line);
    if (header.value("schema", "") != kCorpusSchema) {
        throw IngestionError("<corpus>", "unsupported schema '" + header.value("schema", "") + "'");
    }
    const Task task = parse_task(header.at("task").get<std::string>());
    const Split split = parse_split(header.at("split").get<std::string>());
    std::vector<TaskInstance> instances;
    while (std::getline(in, line)) {
        if (text::trim(line).empty()) {
            continue;
        }
        const auto rec = json::parse(line);
        TaskInstance inst;
        inst.instance_id = rec.at("id").get<std::string>();
        inst.task = task;
        inst.query_input = rec.at("input").get<std::string>();
        if (!rec.at("gold").is_null()) {
            inst.gold_output = rec.at("gold").get<std::string>();
        }
        inst.profile.author_id = rec.at("author_id").get<std::string>();
        for (const auto& d : rec.at("profile")) {
            inst.profile.documents.push_back(
                {d.at("id").get<std::string>(), d.at("input").get<std::string>(), d.at("output").get<std::string>()});
        }
        instances.push_back(std::move(inst));
    }
    if (instances.size() != header.at("count").get<std::size_t>()) {
        throw IngestionError("<corpus>", "record count does not match header");
    }
    return Corpus(task, split, std::move(instances));
}

void write_corpus(const std::filesystem::path& path, const Corpus& corpus) {
    write_file_atomic(path, serialize_corpus(corpus));
}

Corpus read_corpus(const std::filesystem::path& path) { return deserialize_corpus(read_file(path)); }

} // namespace authorrag
