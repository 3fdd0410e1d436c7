// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#include "authorrag/error.hpp"
#include "authorrag/experiment.hpp"
#include "authorrag/resources.hpp"

#include <cstdlib>
#include <set>

namespace authorrag {
namespace {

using nlohmann::json;

// Reads fields from one JSON object and rejects keys nobody asked for.
class Fields {
  public:
    Fields(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) {
            throw ConfigError(where_ + " must be a JSON object");
        }
    }

    ~Fields() noexcept(false) {
        if (std::uncaught_exceptions() > 0) {
            return;
        }
        for (const auto& [key, value] : j_.items()) {
            if (used_.count(key) == 0) {
                throw ConfigError("unknown key '" + key + "' in " + where_);
            }
        }
    }

    const json* find(const std::string& key) {
        used_.insert(key);
        const auto it = j_.find(key);
        return it == j_.end() || it->is_null() ? nullptr : &*it;
    }

    template <typename T>
    void get(const std::string& key, T& out) {
        if (const auto* v = find(key)) {
            try {
                out = v->get<T>();
            } catch (const json::exception&) {
                throw ConfigError(where_ + "." + key + " has the wrong type");
            }
        }
    }

    void get_path(const std::string& key, std::filesystem::path& out) {
        std::string s;
        get(key, s);
        if (!s.empty()) {
            out = s;
        }
    }

    void get_path(const std::string& key, std::optional<std::filesystem::path>& out) {
        std::string s;
        get(key, s);
        if (!s.empty()) {
            out = s;
        }
    }

    Fields object(const std::string& key) {
        static const json empty = json::object();
        const auto* v = find(key);
        return Fields(v ? *v : empty, where_ + "." + key);
    }

    const std::string& where() const { return where_; }

  private:
    const json& j_;
    std::string where_;
    std::set<std::string> used_;
};

void interpolate_tree(json& j, const std::function<std::optional<std::string>(const std::string&)>& lookup) {
    if (j.is_string()) {
        j = interpolate_env(j.get<std::string>(), lookup);
    } else if (j.is_structured()) {
        for (auto& child : j) {
            interpolate_tree(child, lookup);
        }
    }
}

FeatureSet parse_features(const json& j, const std::string& where) {
    FeatureSet set;
    if (!j.is_array()) {
        throw ConfigError(where + " must be an array of feature names");
    }
    for (const auto& f : j) {
        if (!f.is_string()) {
            throw ConfigError(where + " must contain feature names");
        }
        try {
            set.insert(parse_feature(f.get<std::string>()));
        } catch (const PreconditionError& e) {
            throw ConfigError(std::string(e.what()) + " in " + where);
        }
    }
    return set;
}

json features_json(const FeatureSet& set) {
    json out = json::array();
    for (const auto f : set) {
        out.push_back(feature_name(f));
    }
    return out;
}

// Programmatically built JSON stores small literals as signed integers.
bool non_negative_integer(const json& j) {
    return j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0);
}

std::string path_string(const std::optional<std::filesystem::path>& p) { return p ? p->string() : std::string(); }

} // namespace

std::string interpolate_env(std::string_view input,
                            const std::function<std::optional<std::string>(const std::string&)>& lookup) {
    auto get = [&](const std::string& name) -> std::optional<std::string> {
        if (lookup) {
            return lookup(name);
        }
        const char* v = std::getenv(name.c_str());
        return v == nullptr ? std::nullopt : std::optional<std::string>(v);
    };
    std::string out;
    for (std::size_t i = 0; i < input.size();) {
        if (input.compare(i, 2, "${") != 0) {
            out += input[i++];
            continue;
        }
        const auto close = input.find('}', i + 2);
        if (close == std::string_view::npos) {
            throw ConfigError("unterminated ${ in '" + std::string(input) + "'");
        }
        const auto body = input.substr(i + 2, close - i - 2);
        const auto sep = body.find(":-");
        const auto name = std::string(body.substr(0, sep));
        if (name.empty()) {
            throw ConfigError("empty variable name in '" + std::string(input) + "'");
        }
        const auto value = get(name);
        if (value && !value->empty()) {
            out += *value;
        } else if (sep != std::string_view::npos) {
            out += body.substr(sep + 2);
        } else if (value) {
            out += *value;
        } else {
            throw ConfigError("environment variable " + name + " is not set");
        }
        i = close + 1;
    }
    return out;
}

std::string variation_name(const FeatureSet& features, std::size_t n_contrastive) {
    std::string name = features.empty() ? std::string() : feature_set_name(features);
    if (n_contrastive > 0) {
        name += (name.empty() ? "" : "+") + std::string("CE(") + std::to_string(n_contrastive) + ")";
    }
    return name.empty() ? "baseline" : name;
}

std::vector<SweepVariation> ablation_axes() {
    std::vector<SweepVariation> axes;
    for (const auto f : kAllFeatures) {
        axes.push_back({variation_name({f}, 0), {f}, 0});
    }
    for (const std::size_t n : {1, 3, 5}) {
        axes.push_back({variation_name({}, n), {}, n});
    }
    return axes;
}

void ExperimentConfig::validate() const {
    if (run_name.empty()) {
        throw ConfigError("run_name is required");
    }
    const std::filesystem::path name(run_name);
    if (name.is_absolute() || run_name.find("..") != std::string::npos) {
        throw ConfigError("run_name must be a relative name without '..'");
    }
    if (questions.empty()) {
        throw ConfigError("data.questions is required");
    }
    retrieval.validate();
    generation.params.validate();
    if (top_k < 1) {
        throw ConfigError("top_k must be at least 1");
    }
    if (workers < 1) {
        throw ConfigError("workers must be at least 1");
    }
    if (!(max_failure_rate >= 0.0 && max_failure_rate <= 1.0)) {
        throw ConfigError("max_failure_rate must lie in [0, 1]");
    }
    if (embedding.backend == "http") {
        if (embedding.base_url.empty() || embedding.model.empty()) {
            throw ConfigError("embedding backend 'http' needs base_url and model");
        }
    } else if (embedding.backend != "stub") {
        throw ConfigError("unknown embedding backend '" + embedding.backend + "' (stub, http)");
    }
    if (generation.backend == "openai") {
        if (generation.base_url.empty()) {
            throw ConfigError("generation backend 'openai' needs base_url");
        }
    } else if (generation.backend != "mock") {
        throw ConfigError("unknown generation backend '" + generation.backend + "' (mock, openai)");
    }
    if (generation.max_in_flight < 1 || generation.max_attempts < 1 || generation.backoff_ms < 0 ||
        generation.timeout_seconds < 1) {
        throw ConfigError("generation.max_in_flight, max_attempts and timeout_seconds must be positive");
    }
    if (annotation.backend == "preannotated") {
        if (!annotation.file) {
            throw ConfigError("annotation backend 'preannotated' needs a file");
        }
    } else if (annotation.backend != "builtin") {
        throw ConfigError("unknown annotation backend '" + annotation.backend + "' (builtin, preannotated)");
    }
    if (prompt.budget && *prompt.budget == 0) {
        throw ConfigError("prompt.budget must be positive (use null for no limit)");
    }
}

ExperimentConfig config_from_json(const json& raw) {
    ExperimentConfig c;
    Fields top(raw, "config");
    top.get("run_name", c.run_name);

    std::string task;
    top.get("task", task);
    if (task.empty()) {
        throw ConfigError("task is required");
    }
    try {
        c.task = parse_task(task);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    std::string split = "validation";
    top.get("split", split);
    try {
        c.split = parse_split(split);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    {
        auto data = top.object("data");
        data.get_path("questions", c.questions);
        data.get_path("outputs", c.outputs);
    }
    if (const auto* f = top.find("features")) {
        c.features = parse_features(*f, "config.features");
    }
    top.get("top_k", c.top_k);

    c.retrieval = RetrievalConfig::defaults_for(c.task);
    {
        auto r = top.object("retrieval");
        r.get("k_profile", c.retrieval.k_profile);
        r.get("n_contrastive_authors", c.retrieval.n_contrastive_authors);
        r.get("samples_per_author", c.retrieval.samples_per_author);
        r.get("seed", c.retrieval.seed);
    }
    {
        auto e = top.object("embedding");
        e.get("backend", c.embedding.backend);
        e.get("dimension", c.embedding.dimension);
        e.get("base_url", c.embedding.base_url);
        e.get("model", c.embedding.model);
        e.get("api_key", c.embedding.api_key);
        e.get("batch_size", c.embedding.batch_size);
    }
    {
        auto g = top.object("generation");
        g.get("backend", c.generation.backend);
        g.get("model", c.generation.params.model_tag);
        g.get("temperature", c.generation.params.temperature);
        g.get("max_new_tokens", c.generation.params.max_new_tokens);
        g.get("base_url", c.generation.base_url);
        g.get("api_key", c.generation.api_key);
        g.get("max_in_flight", c.generation.max_in_flight);
        g.get("max_attempts", c.generation.max_attempts);
        g.get("backoff_ms", c.generation.backoff_ms);
        g.get("timeout_seconds", c.generation.timeout_seconds);
        g.get("clean_titles", c.generation.clean_titles);
        g.get("mock_echo_tokens", c.generation.mock_echo_tokens);
    }
    {
        auto a = top.object("annotation");
        a.get("backend", c.annotation.backend);
        a.get_path("file", c.annotation.file);
    }
    {
        auto p = top.object("prompt");
        p.get_path("template", c.prompt.template_file);
        const auto* budget = p.find("budget");
        if (raw.contains("prompt") && raw.at("prompt").contains("budget") && budget == nullptr) {
            c.prompt.budget.reset();
        } else if (budget != nullptr) {
            if (!non_negative_integer(*budget)) {
                throw ConfigError("config.prompt.budget must be a positive integer or null");
            }
            c.prompt.budget = budget->get<std::size_t>();
        }
        std::string policy;
        p.get("drop_policy", policy);
        if (!policy.empty()) {
            c.prompt.drop_policy = parse_drop_policy(policy);
        }
    }
    top.get_path("cache_dir", c.cache_dir);
    top.get_path("output_dir", c.output_dir);
    if (const auto* limit = top.find("limit")) {
        if (!non_negative_integer(*limit)) {
            throw ConfigError("config.limit must be a non-negative integer or null");
        }
        c.limit = limit->get<std::size_t>();
    }
    top.get("workers", c.workers);
    top.get("save_prompts", c.save_prompts);
    top.get("max_failure_rate", c.max_failure_rate);
    if (const auto* sweep = top.find("sweep")) {
        if (sweep->is_string()) {
            if (sweep->get<std::string>() != "ablation") {
                throw ConfigError("config.sweep must be \"ablation\" or a list of variations");
            }
            c.sweep = ablation_axes();
        } else if (sweep->is_array()) {
            for (std::size_t i = 0; i < sweep->size(); ++i) {
                Fields v((*sweep)[i], "config.sweep[" + std::to_string(i) + "]");
                SweepVariation var;
                if (const auto* f = v.find("features")) {
                    var.features = parse_features(*f, v.where() + ".features");
                }
                v.get("contrastive", var.n_contrastive_authors);
                v.get("name", var.name);
                if (var.name.empty()) {
                    var.name = variation_name(var.features, var.n_contrastive_authors);
                }
                c.sweep.push_back(std::move(var));
            }
        } else {
            throw ConfigError("config.sweep must be \"ablation\" or a list of variations");
        }
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    interpolate_tree(j, {});
    return config_from_json(j);
}

json config_to_json(const ExperimentConfig& c, bool redact) {
    auto secret = [redact](const std::string& s) { return redact && !s.empty() ? std::string("***") : s; };
    json sweep = json::array();
    for (const auto& v : c.sweep) {
        sweep.push_back({{"name", v.name}, {"features", features_json(v.features)}, {"contrastive", v.n_contrastive_authors}});
    }
    json j = {
        {"run_name", c.run_name},
        {"task", task_name(c.task)},
        {"split", split_name(c.split)},
        {"data", {{"questions", c.questions.string()}, {"outputs", path_string(c.outputs)}}},
        {"features", features_json(c.features)},
        {"top_k", c.top_k},
        {"retrieval",
         {{"k_profile", c.retrieval.k_profile},
          {"n_contrastive_authors", c.retrieval.n_contrastive_authors},
          {"samples_per_author", c.retrieval.samples_per_author},
          {"seed", c.retrieval.seed}}},
        {"embedding",
         {{"backend", c.embedding.backend},
          {"dimension", c.embedding.dimension},
          {"base_url", c.embedding.base_url},
          {"model", c.embedding.model},
          {"api_key", secret(c.embedding.api_key)},
          {"batch_size", c.embedding.batch_size}}},
        {"generation",
         {{"backend", c.generation.backend},
          {"model", c.generation.params.model_tag},
          {"temperature", c.generation.params.temperature},
          {"max_new_tokens", c.generation.params.max_new_tokens},
          {"base_url", c.generation.base_url},
          {"api_key", secret(c.generation.api_key)},
          {"max_in_flight", c.generation.max_in_flight},
          {"max_attempts", c.generation.max_attempts},
          {"backoff_ms", c.generation.backoff_ms},
          {"timeout_seconds", c.generation.timeout_seconds},
          {"clean_titles", c.generation.clean_titles},
          {"mock_echo_tokens", c.generation.mock_echo_tokens}}},
        {"annotation", {{"backend", c.annotation.backend}, {"file", path_string(c.annotation.file)}}},
        {"prompt",
         {{"template", path_string(c.prompt.template_file)},
          {"budget", c.prompt.budget ? json(*c.prompt.budget) : json(nullptr)},
          {"drop_policy", drop_policy_name(c.prompt.drop_policy)}}},
        {"cache_dir", c.cache_dir.string()},
        {"output_dir", c.output_dir.string()},
        {"limit", c.limit ? json(*c.limit) : json(nullptr)},
        {"workers", c.workers},
        {"save_prompts", c.save_prompts},
        {"max_failure_rate", c.max_failure_rate},
        {"sweep", std::move(sweep)},
    };
    return j;
}

} // namespace authorrag
