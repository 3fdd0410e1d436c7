// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

// authorrag: run, sweep, report and cache maintenance for personalized RAG experiments.

#include "authorrag/error.hpp"
#include "authorrag/experiment.hpp"
#include "authorrag/resources.hpp"
#include "authorrag/text.hpp"

#include <CLI11.hpp>
#include <iostream>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

namespace {

using authorrag::ExperimentConfig;
using nlohmann::json;

constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRunFailed = 3;

struct Overrides {
    std::string run_name;
    std::string questions;
    std::string outputs;
    std::string features;
    std::string cache_dir;
    std::string output_dir;
    std::optional<std::size_t> limit;
    std::optional<std::size_t> workers;
    std::optional<std::size_t> contrastive;
    std::optional<std::size_t> k_profile;
    std::optional<std::uint64_t> seed;
    bool save_prompts = false;
    bool no_features = false;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--run-name", o.run_name, "Run name (output subdirectory)");
    cmd->add_option("--questions", o.questions, "LaMP questions file");
    cmd->add_option("--outputs", o.outputs, "LaMP outputs (golds) file");
    cmd->add_option("--features", o.features, "Comma-separated features, e.g. WF,DPF");
    cmd->add_flag("--no-features", o.no_features, "Baseline RAG without author features");
    cmd->add_option("--contrastive", o.contrastive, "Number of contrastive authors");
    cmd->add_option("--k-profile", o.k_profile, "Profile documents to retrieve");
    cmd->add_option("--seed", o.seed, "Contrastive sampling seed");
    cmd->add_option("--cache-dir", o.cache_dir, "Shared cache directory");
    cmd->add_option("--output-dir", o.output_dir, "Directory holding run directories");
    cmd->add_option("--limit", o.limit, "Process only the first N instances");
    cmd->add_option("--workers", o.workers, "Worker threads");
    cmd->add_flag("--save-prompts", o.save_prompts, "Store full prompts in records.jsonl");
}

void apply(const Overrides& o, ExperimentConfig& c) {
    if (!o.run_name.empty()) c.run_name = o.run_name;
    if (!o.questions.empty()) c.questions = o.questions;
    if (!o.outputs.empty()) c.outputs = o.outputs;
    if (o.no_features) c.features.clear();
    if (!o.features.empty()) {
        c.features.clear();
        for (auto name : authorrag::text::split_whitespace(authorrag::text::replace_all(o.features, ",", " "))) {
            try {
                c.features.insert(authorrag::parse_feature(name));
            } catch (const authorrag::PreconditionError& e) {
                throw authorrag::ConfigError(e.what());
            }
        }
    }
    if (o.contrastive) c.retrieval.n_contrastive_authors = *o.contrastive;
    if (o.k_profile) c.retrieval.k_profile = *o.k_profile;
    if (o.seed) c.retrieval.seed = *o.seed;
    if (!o.cache_dir.empty()) c.cache_dir = o.cache_dir;
    if (!o.output_dir.empty()) c.output_dir = o.output_dir;
    if (o.limit) c.limit = *o.limit;
    if (o.workers) c.workers = *o.workers;
    if (o.save_prompts) c.save_prompts = true;
    c.validate();
}

json run_summary(const std::string& name, const authorrag::RunRecord& r) {
    json j = {{"run", name},
              {"status", r.status},
              {"instances", r.instances.size()},
              {"failed", r.failed},
              {"generation_backend_calls", r.generation_backend_calls},
              {"embedding_backend_calls", r.embedding_backend_calls}};
    if (r.metrics) {
        j["rouge1"] = r.metrics->mean_rouge1;
        j["rougeL"] = r.metrics->mean_rougeL;
    }
    return j;
}

std::uintmax_t tree_stats(const std::filesystem::path& dir, std::size_t& files) {
    std::uintmax_t bytes = 0;
    std::error_code ec;
    if (!std::filesystem::exists(dir, ec)) {
        return 0;
    }
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) {
            ++files;
            bytes += e.file_size();
        }
    }
    return bytes;
}

json inspect_cache(const std::filesystem::path& dir) {
    json out = {{"cache_dir", dir.string()}};
    for (const char* kind : {"embeddings", "annotations", "features"}) {
        std::size_t files = 0;
        const auto bytes = tree_stats(dir / kind, files);
        out[kind] = {{"entries", files}, {"bytes", bytes}};
    }
    std::size_t records = 0;
    std::uintmax_t bytes = 0;
    std::error_code ec;
    if (std::filesystem::exists(dir / "generations.jsonl", ec)) {
        const auto contents = authorrag::read_file(dir / "generations.jsonl");
        bytes = contents.size();
        records = static_cast<std::size_t>(std::count(contents.begin(), contents.end(), '\n'));
    }
    out["generations"] = {{"entries", records}, {"bytes", bytes}};
    return out;
}

void clear_cache(const std::filesystem::path& dir, const std::string& kind) {
    std::error_code ec;
    const bool all = kind == "all";
    for (const char* k : {"embeddings", "annotations", "features"}) {
        if (all || kind == k) {
            std::filesystem::remove_all(dir / k, ec);
        }
    }
    if (all || kind == "generations") {
        std::filesystem::remove(dir / "generations.jsonl", ec);
    }
}

int fail(const std::exception& e, int code) {
    std::cout << json{{"status", "error"}, {"error", {{"kind", authorrag::error_kind(e)}, {"message", e.what()}}}}.dump()
              << std::endl;
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Personalized retrieval-augmented generation experiments"};
    app.require_subcommand(1);
    bool verbose = false;
    bool quiet = false;
    app.add_flag("-v,--verbose", verbose, "Debug logging");
    app.add_flag("-q,--quiet", quiet, "Only warnings and errors");

    std::string config_path;
    bool force = false;
    Overrides overrides;

    auto* run = app.add_subcommand("run", "Run one experiment");
    run->add_option("-c,--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_flag("--force", force, "Reuse a run name whose stored config differs");
    add_overrides(run, overrides);

    bool ablation = false;
    auto* sweep = app.add_subcommand("sweep", "Baseline plus one run per variation");
    sweep->add_option("-c,--config", config_path, "Base experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sweep->add_flag("--ablation", ablation, "Each feature alone plus CE(1), CE(3), CE(5)");
    sweep->add_flag("--force", force, "Reuse run names whose stored config differs");
    add_overrides(sweep, overrides);

    std::vector<std::string> run_dirs;
    std::string baseline;
    std::string report_out;
    auto* report = app.add_subcommand("report", "Compare finished runs against a baseline run");
    report->add_option("runs", run_dirs, "Run directories")->required()->check(CLI::ExistingDirectory);
    report->add_option("-b,--baseline", baseline, "Name of the baseline run directory")->required();
    report->add_option("-o,--out", report_out, "Write the JSON report here");

    std::string cache_dir = ".authorrag-cache";
    std::string kind = "all";
    auto* cache = app.add_subcommand("cache", "Inspect or clear the shared cache");
    cache->require_subcommand(1);
    auto* inspect = cache->add_subcommand("inspect", "Entry counts and sizes");
    inspect->add_option("--cache-dir", cache_dir, "Cache directory");
    auto* clear = cache->add_subcommand("clear", "Delete cached entries");
    clear->add_option("--cache-dir", cache_dir, "Cache directory");
    clear->add_option("--kind", kind, "embeddings, annotations, features, generations or all")
        ->check(CLI::IsMember({"embeddings", "annotations", "features", "generations", "all"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }
    spdlog::set_level(verbose ? spdlog::level::debug : quiet ? spdlog::level::warn : spdlog::level::info);
    spdlog::set_default_logger(spdlog::default_logger());

    try {
        if (*run) {
            auto config = authorrag::load_config(config_path);
            apply(overrides, config);
            const auto record = authorrag::run_experiment(config, force);
            std::cout << run_summary(config.run_name, record).dump() << std::endl;
            return record.status == "ok" ? 0 : kExitRunFailed;
        }
        if (*sweep) {
            auto config = authorrag::load_config(config_path);
            apply(overrides, config);
            const auto axes = ablation ? authorrag::ablation_axes() : config.sweep;
            const auto result = authorrag::run_sweep(config, axes, force);
            std::cerr << result.table << '\n' << result.chart;
            json runs = json::array();
            bool ok = true;
            for (const auto& [name, record] : result.runs) {
                runs.push_back(run_summary(name, record));
                ok = ok && record.status == "ok";
            }
            std::cout << json{{"status", ok ? "ok" : "failed"}, {"runs", runs}}.dump() << std::endl;
            return ok ? 0 : kExitRunFailed;
        }
        if (*report) {
            std::vector<std::filesystem::path> dirs(run_dirs.begin(), run_dirs.end());
            const auto result = authorrag::report_runs(dirs, baseline);
            std::cout << result.table << '\n' << result.chart;
            if (!report_out.empty()) {
                json out = json::array();
                for (const auto& r : result.report) {
                    out.push_back(authorrag::to_json(r, false));
                }
                authorrag::write_file_atomic(report_out, json{{"runs", out}}.dump(2) + "\n");
            }
            return 0;
        }
        if (*inspect) {
            std::cout << inspect_cache(cache_dir).dump(2) << std::endl;
            return 0;
        }
        if (*clear) {
            clear_cache(cache_dir, kind);
            std::cout << inspect_cache(cache_dir).dump() << std::endl;
            return 0;
        }
    } catch (const authorrag::ConfigError& e) {
        return fail(e, kExitConfig);
    } catch (const std::exception& e) {
        return fail(e, kExitError);
    }
    return 0;
}
