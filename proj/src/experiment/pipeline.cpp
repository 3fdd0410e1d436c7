// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#include "authorrag/digest.hpp"
#include "authorrag/error.hpp"
#include "authorrag/experiment.hpp"
#include "authorrag/resources.hpp"

#include <atomic>
#include <chrono>
#include <map>
#include <spdlog/spdlog.h>
#include <sstream>
#include <thread>

namespace authorrag {
namespace {

using nlohmann::json;

std::string slug(std::string_view s) {
    std::string out;
    for (const char c : s) {
        out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' ? c : '_');
    }
    return out;
}

json record_json(const InstanceRecord& r) {
    json j = {{"id", r.instance_id},
              {"prompt_sha256", r.prompt_sha256},
              {"prediction", r.prediction},
              {"cached", r.cached},
              {"attempts", r.attempts},
              {"profile_kept", r.profile_kept},
              {"contrastive_kept", r.contrastive_kept},
              {"feature_lines", r.feature_lines},
              {"contrastive_authors", r.contrastive_authors},
              {"latency_seconds", r.latency_seconds},
              {"error", r.error}};
    if (r.prompt) {
        j["prompt"] = *r.prompt;
    }
    return j;
}

InstanceRecord record_from_json(const json& j) {
    InstanceRecord r;
    r.instance_id = j.at("id").get<std::string>();
    r.prompt_sha256 = j.at("prompt_sha256").get<std::string>();
    r.prediction = j.at("prediction").get<std::string>();
    r.cached = j.at("cached").get<bool>();
    r.attempts = j.at("attempts").get<int>();
    r.profile_kept = j.at("profile_kept").get<std::size_t>();
    r.contrastive_kept = j.at("contrastive_kept").get<std::size_t>();
    r.feature_lines = j.at("feature_lines").get<std::size_t>();
    r.contrastive_authors = j.at("contrastive_authors").get<std::vector<std::string>>();
    r.latency_seconds = j.at("latency_seconds").get<double>();
    r.error = j.at("error").get<std::string>();
    if (j.contains("prompt")) {
        r.prompt = j.at("prompt").get<std::string>();
    }
    return r;
}

std::shared_ptr<EmbeddingBackend> make_embedding_backend(const EmbeddingConfig& c) {
    if (c.backend == "http") {
        HttpEmbeddingBackend::Options o;
        o.base_url = c.base_url;
        o.model = c.model;
        o.api_key = c.api_key;
        o.dimension = c.dimension;
        o.batch_size = c.batch_size;
        return std::make_shared<HttpEmbeddingBackend>(std::move(o));
    }
    return std::make_shared<StubEmbeddingBackend>(c.dimension == 0 ? 64 : c.dimension);
}

std::shared_ptr<LlmBackend> make_llm_backend(const GenerationConfig& c) {
    if (c.backend == "openai") {
        return std::make_shared<OpenAiChatBackend>(OpenAiChatBackend::Options{c.base_url, c.api_key, c.timeout_seconds});
    }
    return std::make_shared<MockEchoBackend>(c.mock_echo_tokens, std::string(kQueryMarker));
}

// Everything one run needs that is the same for all of its instances.
struct RunContext {
    const ExperimentConfig& config;
    Services& services;
    const Corpus& corpus;
    PromptTemplate tmpl;
    FeatureCache feature_cache;
    std::map<std::string, const AuthorProfile*, std::less<>> profiles;
};

AuthorFeatures features_for(RunContext& ctx, const AuthorProfile& profile) {
    const auto& cfg = ctx.config;
    const auto key = FeatureCache::key(profile.author_id, cfg.features, ctx.services.annotation_version(), cfg.top_k);
    if (auto cached = ctx.feature_cache.get(key)) {
        return *cached;
    }
    AuthorFeatures features;
    if (const auto* store = ctx.services.preannotated()) {
        features = compute_features(
            profile, [&](const ProfileDocument& d) { return store->find(profile.author_id, d.doc_id); }, cfg.features,
            cfg.top_k);
    } else {
        std::map<std::string, AnnotatedDocument, std::less<>> docs;
        for (const auto& d : profile.documents) {
            docs.emplace(d.doc_id, ctx.services.annotate_cached(d.feature_text()));
        }
        features = compute_features(
            profile,
            [&](const ProfileDocument& d) -> const AnnotatedDocument* {
                const auto it = docs.find(d.doc_id);
                return it == docs.end() ? nullptr : &it->second;
            },
            cfg.features, cfg.top_k);
    }
    ctx.feature_cache.put(key, features);
    return features;
}

InstanceRecord process_instance(RunContext& ctx, const TaskInstance& inst) {
    const auto& cfg = ctx.config;
    InstanceRecord rec;
    rec.instance_id = inst.instance_id;

    auto bundle = PromptBundle::for_task(cfg.task);
    bundle.query_input = inst.query_input;
    bundle.profile_examples =
        retrieve_profile(ctx.services.embedder(), inst.query_input, inst.profile, cfg.retrieval.k_profile);
    if (!cfg.features.empty()) {
        bundle.feature_text = render_feature_sentences(features_for(ctx, inst.profile));
    }
    if (cfg.retrieval.n_contrastive_authors > 0) {
        std::vector<const TaskInstance*> pool;
        for (const auto& other : ctx.corpus.instances()) {
            if (other.profile.author_id != inst.profile.author_id) {
                pool.push_back(&other);
            }
        }
        rec.contrastive_authors =
            select_contrastive_authors(ctx.services.embedder(), inst, pool, cfg.retrieval.n_contrastive_authors);
        bundle.contrastive = sample_contrastive(
            rec.contrastive_authors,
            [&](const std::string& id) -> const AuthorProfile* {
                const auto it = ctx.profiles.find(id);
                return it == ctx.profiles.end() ? nullptr : it->second;
            },
            cfg.retrieval.samples_per_author, cfg.retrieval.seed);
    }

    PromptOptions options;
    options.budget = cfg.prompt.budget;
    options.policy = cfg.prompt.drop_policy;
    const auto prompt = build_prompt(ctx.tmpl, bundle, options);
    rec.prompt_sha256 = sha256_hex(prompt.text);
    rec.profile_kept = prompt.profile_kept;
    rec.contrastive_kept = prompt.contrastive_kept;
    rec.feature_lines = prompt.feature_lines;
    if (cfg.save_prompts) {
        rec.prompt = prompt.text;
    }

    const auto result = ctx.services.generator().generate(prompt.text, cfg.generation.params);
    rec.prediction = postprocess_output(cfg.task, result.text, cfg.generation.clean_titles);
    rec.cached = result.cached;
    rec.attempts = result.attempts;
    rec.latency_seconds = result.latency.count();
    return rec;
}

std::string jsonl(const std::vector<InstanceRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        out += record_json(r).dump() + "\n";
    }
    return out;
}

} // namespace

Services::Services(const ExperimentConfig& config) : cache_dir_(config.cache_dir) {
    embedder_ = std::make_unique<Embedder>(make_embedding_backend(config.embedding), cache_dir_ / "embeddings");
    Generator::Options g;
    g.max_attempts = config.generation.max_attempts;
    g.backoff = std::chrono::milliseconds(config.generation.backoff_ms);
    g.max_in_flight = config.generation.max_in_flight;
    g.cache_file = cache_dir_ / "generations.jsonl";
    generator_ = std::make_unique<Generator>(make_llm_backend(config.generation), g);
    if (config.annotation.backend == "preannotated") {
        preannotated_ = std::make_unique<PreannotatedStore>(PreannotatedStore::load(*config.annotation.file));
    } else {
        annotator_ = std::make_unique<BuiltinAnnotator>();
    }
}

std::string Services::annotation_version() const {
    return preannotated_ ? "pre:" + preannotated_->version() : annotator_->version();
}

AnnotatedDocument Services::annotate_cached(const std::string& text) const {
    if (!annotator_) {
        throw PreconditionError("no annotator configured");
    }
    const auto digest = sha256_hex(text);
    const auto path = cache_dir_ / "annotations" / slug(annotator_->version()) / digest.substr(0, 2) / (digest + ".json");
    std::error_code ec;
    if (std::filesystem::exists(path, ec)) {
        try {
            return annotated_document_from_json(json::parse(read_file(path)));
        } catch (const std::exception& e) {
            spdlog::warn("re-annotating after unreadable cache entry {}: {}", path.string(), e.what());
        }
    }
    auto doc = annotator_->annotate(text);
    write_file_atomic(path, to_json(doc).dump());
    return doc;
}

RunRecord run_experiment(const ExperimentConfig& config, bool force) {
    Services services(config);
    return run_experiment(config, services, force);
}

RunRecord run_experiment(const ExperimentConfig& config, Services& services, bool force) {
    config.validate();
    const auto started = std::chrono::steady_clock::now();
    const auto run_dir = config.run_dir();
    const auto snapshot = config_to_json(config, true);
    const auto snapshot_path = run_dir / "resolved_config.json";
    std::error_code ec;
    if (!force && std::filesystem::exists(snapshot_path, ec)) {
        const auto previous = json::parse(read_file(snapshot_path));
        if (previous != snapshot) {
            throw ConfigError("run name '" + config.run_name + "' is already used in " + run_dir.string() +
                              " with a different config (use --force to overwrite)");
        }
    }
    std::filesystem::create_directories(run_dir);
    write_file_atomic(snapshot_path, snapshot.dump(2) + "\n");

    const auto corpus = ingest(config.questions, config.outputs, config.task, config.split);
    const auto n = config.limit ? std::min(*config.limit, corpus.size()) : corpus.size();
    spdlog::info("run {}: {} of {} instances, features [{}], CE({})", config.run_name, n, corpus.size(),
                 feature_set_name(config.features), config.retrieval.n_contrastive_authors);

    RunContext ctx{config,
                   services,
                   corpus,
                   config.prompt.template_file ? PromptTemplate::load(*config.prompt.template_file)
                                               : PromptTemplate::builtin(),
                   FeatureCache(services.cache_dir() / "features"),
                   {}};
    for (const auto& inst : corpus.instances()) {
        ctx.profiles.emplace(inst.profile.author_id, &inst.profile);
    }

    const auto gen_calls_before = services.generator().backend_calls();
    const auto emb_calls_before = services.embedder().backend_calls();
    if (config.retrieval.n_contrastive_authors > 0 && n > 0) {
        std::vector<std::string> inputs;
        for (const auto& inst : corpus.instances()) {
            inputs.push_back(inst.query_input);
        }
        services.embedder().embed(inputs);
    }

    std::vector<InstanceRecord> records(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (auto i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            const auto& inst = corpus[i];
            try {
                records[i] = process_instance(ctx, inst);
            } catch (const std::exception& e) {
                records[i] = InstanceRecord{};
                records[i].instance_id = inst.instance_id;
                records[i].error = error_kind(e) + ": " + e.what();
                spdlog::warn("instance {} failed: {}", inst.instance_id, records[i].error);
            }
        }
    };
    std::vector<std::thread> threads;
    for (std::size_t t = 1; t < std::min(config.workers, n); ++t) {
        threads.emplace_back(worker);
    }
    worker();
    for (auto& t : threads) {
        t.join();
    }

    RunRecord run;
    run.config = snapshot;
    run.instances = std::move(records);
    for (const auto& r : run.instances) {
        run.failed += r.error.empty() ? 0 : 1;
    }
    run.status = n > 0 && static_cast<double>(run.failed) > config.max_failure_rate * static_cast<double>(n)
                     ? "failed"
                     : "ok";
    run.generation_backend_calls = services.generator().backend_calls() - gen_calls_before;
    run.embedding_backend_calls = services.embedder().backend_calls() - emb_calls_before;

    bool all_gold = n > 0;
    for (std::size_t i = 0; i < n; ++i) {
        all_gold = all_gold && corpus[i].gold_output.has_value();
    }
    if (all_gold) {
        std::vector<ScoredPrediction> scores;
        for (std::size_t i = 0; i < n; ++i) {
            scores.push_back(score_prediction(corpus[i].instance_id, run.instances[i].prediction, *corpus[i].gold_output));
        }
        run.metrics = build_report({{config.run_name, std::move(scores)}}, config.run_name).front();
    }
    run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    std::vector<std::pair<std::string, std::string>> predictions;
    for (const auto& r : run.instances) {
        predictions.emplace_back(r.instance_id, r.prediction);
    }
    write_file_atomic(run_dir / "predictions.json", predictions_json(config.task, predictions));
    write_file_atomic(run_dir / "records.jsonl", jsonl(run.instances));
    if (run.metrics) {
        write_file_atomic(run_dir / "metrics.json", to_json(*run.metrics).dump(2) + "\n");
    } else {
        std::filesystem::remove(run_dir / "metrics.json", ec);
    }
    const json summary = {{"run", config.run_name},
                          {"status", run.status},
                          {"instances", n},
                          {"failed", run.failed},
                          {"generation_backend_calls", run.generation_backend_calls},
                          {"embedding_backend_calls", run.embedding_backend_calls},
                          {"wall_seconds", run.wall_seconds}};
    write_file_atomic(run_dir / "run.json", summary.dump(2) + "\n");
    spdlog::info("run {} {}: {} failed, {} generation calls, {:.1f}s", config.run_name, run.status, run.failed,
                 run.generation_backend_calls, run.wall_seconds);
    return run;
}

RunRecord load_run_record(const std::filesystem::path& run_dir) {
    RunRecord run;
    try {
        run.config = json::parse(read_file(run_dir / "resolved_config.json"));
        std::istringstream in(read_file(run_dir / "records.jsonl"));
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty()) {
                run.instances.push_back(record_from_json(json::parse(line)));
            }
        }
        std::error_code ec;
        if (std::filesystem::exists(run_dir / "metrics.json", ec)) {
            run.metrics = metrics_report_from_json(json::parse(read_file(run_dir / "metrics.json")));
        }
        const auto summary = json::parse(read_file(run_dir / "run.json"));
        run.status = summary.at("status").get<std::string>();
        run.failed = summary.at("failed").get<std::size_t>();
        run.generation_backend_calls = summary.at("generation_backend_calls").get<std::size_t>();
        run.embedding_backend_calls = summary.at("embedding_backend_calls").get<std::size_t>();
        run.wall_seconds = summary.at("wall_seconds").get<double>();
    } catch (const json::exception& e) {
        throw Error("unreadable run directory " + run_dir.string() + ": " + e.what());
    }
    return run;
}

} // namespace authorrag
