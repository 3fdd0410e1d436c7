// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace authorrag {

enum class Task { LaMP4, LaMP5, LaMP7 };

enum class Split { Train, Validation, Test };

/// "LaMP_4", the name used by the benchmark's files.
std::string_view task_name(Task task) noexcept;

/// Accepts "LaMP_4", "LaMP-4", "lamp4", "LAMP4" and "4".
Task parse_task(std::string_view name);

std::string_view split_name(Split split) noexcept;
Split parse_split(std::string_view name);

/// True for the title-generation tasks (LaMP-4, LaMP-5).
bool is_title_task(Task task) noexcept;

/// Fixed persona line that opens every prompt for `task`.
std::string_view task_role(Task task) noexcept;

struct ProfileDocument {
    std::string doc_id;
    std::string input_text;
    /// Title for LaMP-4/5; the tweet itself for LaMP-7.
    std::string output_text;

    /// The authored text that features are computed on.
    const std::string& feature_text() const noexcept { return output_text.empty() ? input_text : output_text; }

    bool operator==(const ProfileDocument&) const = default;
};

struct AuthorProfile {
    std::string author_id;
    std::vector<ProfileDocument> documents;

    bool operator==(const AuthorProfile&) const = default;
};

struct TaskInstance {
    std::string instance_id;
    Task task = Task::LaMP4;
    std::string query_input;
    std::optional<std::string> gold_output;
    AuthorProfile profile;

    bool operator==(const TaskInstance&) const = default;
};

/// Immutable, validated set of instances for one task and split.
class Corpus {
  public:
    /// Throws IngestionError on any broken invariant (empty profile, duplicate
    /// ids, task mismatch, missing gold on train/validation).
    Corpus(Task task, Split split, std::vector<TaskInstance> instances);

    Task task() const noexcept { return task_; }
    Split split() const noexcept { return split_; }
    const std::vector<TaskInstance>& instances() const noexcept { return instances_; }
    std::size_t size() const noexcept { return instances_.size(); }
    const TaskInstance& operator[](std::size_t i) const { return instances_[i]; }

    /// Index of the instance with this id, if any.
    std::optional<std::size_t> find(std::string_view instance_id) const;

    bool operator==(const Corpus&) const = default;

  private:
    Task task_;
    Split split_;
    std::vector<TaskInstance> instances_;
};

/// Loads a LaMP questions file and optional outputs (golds) file.
/// When `split` is not given it is inferred from the questions file name
/// ("train", "dev"/"val", "test"), falling back to validation when golds are
/// given and test otherwise.
Corpus ingest(const std::filesystem::path& questions_path, const std::optional<std::filesystem::path>& outputs_path,
              Task task, std::optional<Split> split = std::nullopt);

/// In-memory variants of ingest, used by tests and by the file loader.
Corpus ingest_json(std::string_view questions_json, std::optional<std::string_view> outputs_json, Task task,
                   Split split);

inline constexpr std::string_view kCorpusSchema = "authorrag.corpus/1";

/// Normalized one-record-per-line serialization with a schema header line.
std::string serialize_corpus(const Corpus& corpus);
Corpus deserialize_corpus(std::string_view jsonl);

void write_corpus(const std::filesystem::path& path, const Corpus& corpus);
Corpus read_corpus(const std::filesystem::path& path);

} // namespace authorrag
