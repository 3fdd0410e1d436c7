// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#pragma once

#include "authorrag/annotate.hpp"
#include "authorrag/corpus.hpp"
#include "authorrag/evaluation.hpp"
#include "authorrag/features.hpp"
#include "authorrag/generation.hpp"
#include "authorrag/prompting.hpp"
#include "authorrag/retrieval.hpp"

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace authorrag {

struct EmbeddingConfig {
    std::string backend = "stub"; // stub | http
    std::size_t dimension = 0; // 0: 64 for stub, learned from the first response for http
    std::string base_url;
    std::string model;
    std::string api_key;
    std::size_t batch_size = 64;

    bool operator==(const EmbeddingConfig&) const = default;
};

struct GenerationConfig {
    std::string backend = "mock"; // mock | openai
    GenerationParams params{0.7, 128, "mock-echo"};
    std::string base_url;
    std::string api_key;
    std::size_t max_in_flight = 4;
    int max_attempts = 3;
    int backoff_ms = 500;
    int timeout_seconds = 120;
    bool clean_titles = true;
    std::size_t mock_echo_tokens = 5;

    bool operator==(const GenerationConfig&) const = default;
};

struct AnnotationConfig {
    std::string backend = "builtin"; // builtin | preannotated
    std::optional<std::filesystem::path> file;

    bool operator==(const AnnotationConfig&) const = default;
};

struct PromptConfig {
    std::optional<std::filesystem::path> template_file;
    std::optional<std::size_t> budget = 8000;
    DropPolicy drop_policy = DropPolicy::ProfileFirst;

    bool operator==(const PromptConfig&) const = default;
};

struct SweepVariation {
    std::string name;
    FeatureSet features;
    std::size_t n_contrastive_authors = 0;

    bool operator==(const SweepVariation&) const = default;
};

/// "SP", "WF+DPF", "CE(3)", "WF+DPF+CE(3)"; "baseline" when empty.
std::string variation_name(const FeatureSet& features, std::size_t n_contrastive);
/// Each feature alone, then CE(1), CE(3), CE(5).
std::vector<SweepVariation> ablation_axes();

struct ExperimentConfig {
    std::string run_name;
    Task task = Task::LaMP4;
    Split split = Split::Validation;
    std::filesystem::path questions;
    std::optional<std::filesystem::path> outputs;
    FeatureSet features;
    std::size_t top_k = kDefaultTopK;
    RetrievalConfig retrieval;
    EmbeddingConfig embedding;
    GenerationConfig generation;
    AnnotationConfig annotation;
    PromptConfig prompt;
    std::filesystem::path cache_dir = ".authorrag-cache";
    std::filesystem::path output_dir = "runs";
    std::optional<std::size_t> limit;
    std::size_t workers = 4;
    bool save_prompts = false;
    double max_failure_rate = 0.05;
    std::vector<SweepVariation> sweep;

    /// Throws ConfigError.
    void validate() const;
    std::filesystem::path run_dir() const { return output_dir / run_name; }

    bool operator==(const ExperimentConfig&) const = default;
};

/// Expands ${VAR} and ${VAR:-default}. Throws ConfigError for an unset
/// variable without a default.
std::string interpolate_env(std::string_view input,
                            const std::function<std::optional<std::string>(const std::string&)>& lookup = {});

/// Unknown keys are rejected. Missing keys take task defaults.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Secrets are replaced by "***" when `redact` is set.
nlohmann::json config_to_json(const ExperimentConfig& config, bool redact = true);

struct InstanceRecord {
    std::string instance_id;
    std::string prompt_sha256;
    std::string prediction;
    bool cached = false;
    int attempts = 0;
    std::size_t profile_kept = 0;
    std::size_t contrastive_kept = 0;
    std::size_t feature_lines = 0;
    std::vector<std::string> contrastive_authors;
    double latency_seconds = 0.0;
    std::string error;
    std::optional<std::string> prompt;

    bool operator==(const InstanceRecord&) const = default;
};

struct RunRecord {
    nlohmann::json config;
    std::vector<InstanceRecord> instances;
    std::optional<MetricsReport> metrics;
    std::string status; // ok | failed
    std::size_t failed = 0;
    std::size_t generation_backend_calls = 0;
    std::size_t embedding_backend_calls = 0;
    double wall_seconds = 0.0;
};

/// Backends and caches shared by every run of a process (and, through the
/// cache directory, across processes).
class Services {
  public:
    explicit Services(const ExperimentConfig& config);

    Embedder& embedder() { return *embedder_; }
    Generator& generator() { return *generator_; }
    const Annotator* annotator() const { return annotator_.get(); }
    const PreannotatedStore* preannotated() const { return preannotated_.get(); }
    std::string annotation_version() const;
    const std::filesystem::path& cache_dir() const { return cache_dir_; }

    /// Annotation of `text`, cached on disk by (annotator version, text digest).
    AnnotatedDocument annotate_cached(const std::string& text) const;

  private:
    std::filesystem::path cache_dir_;
    std::unique_ptr<Embedder> embedder_;
    std::unique_ptr<Generator> generator_;
    std::unique_ptr<Annotator> annotator_;
    std::unique_ptr<PreannotatedStore> preannotated_;
};

/// Runs one experiment and writes its artifacts to config.run_dir():
/// resolved_config.json, predictions.json, records.jsonl, metrics.json (when
/// golds exist) and run.json. `force` allows reusing a run name whose stored
/// config differs.
RunRecord run_experiment(const ExperimentConfig& config, Services& services, bool force = false);
RunRecord run_experiment(const ExperimentConfig& config, bool force = false);

/// Reads the artifacts written by run_experiment.
RunRecord load_run_record(const std::filesystem::path& run_dir);

struct SweepResult {
    std::vector<std::pair<std::string, RunRecord>> runs; // baseline first
    std::vector<MetricsReport> report;
    std::string table;
    std::string chart;
};

/// Baseline plus one run per variation, each as <output_dir>/<run_name>/<variation>.
/// Throws PreconditionError when there are no variations.
SweepResult run_sweep(const ExperimentConfig& base, const std::vector<SweepVariation>& axes, bool force = false);

/// Per-instance scores of finished runs, compared against `baseline` (a run directory name).
SweepResult report_runs(const std::vector<std::filesystem::path>& run_dirs, const std::string& baseline);

} // namespace authorrag
