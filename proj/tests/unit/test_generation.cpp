// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#include "authorrag/error.hpp"
#include "authorrag/generation.hpp"
#include "authorrag/retrieval.hpp"
#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <httplib.h>

#include <thread>

using namespace authorrag;
using nlohmann::json;

namespace {

GenerationParams params(std::string model = "m") { return {0.7, 128, std::move(model)}; }

Generator::Options fast_options(std::optional<std::filesystem::path> cache = std::nullopt) {
    Generator::Options o;
    o.backoff = std::chrono::milliseconds(1);
    o.cache_file = std::move(cache);
    return o;
}

// Scripted backend: throws the queued errors first, then answers.
class ScriptedBackend final : public LlmBackend {
  public:
    enum class Fail { Transport, Overflow, Other };

    explicit ScriptedBackend(std::vector<Fail> failures = {}, std::chrono::milliseconds delay = {})
        : failures_(std::move(failures)), delay_(delay) {}

    std::string complete(const std::string& prompt, const GenerationParams&) override {
        const auto now = ++active;
        for (auto seen = peak.load(); now > seen && !peak.compare_exchange_weak(seen, now);) {
        }
        std::this_thread::sleep_for(delay_);
        --active;
        const auto n = calls++;
        if (n < static_cast<int>(failures_.size())) {
            switch (failures_[n]) {
            case Fail::Transport: throw TransportError("connection reset");
            case Fail::Overflow: throw ContextOverflowError("too long");
            case Fail::Other: throw GenerationError("bad request");
            }
        }
        return "reply to " + prompt;
    }
    std::string name() const override { return "scripted"; }

    std::atomic<int> calls{0};
    std::atomic<int> active{0};
    std::atomic<int> peak{0};

  private:
    std::vector<Fail> failures_;
    std::chrono::milliseconds delay_;
};

// Local HTTP server on an ephemeral port for the duration of a test.
class LocalServer {
  public:
    LocalServer() {
        port_ = server.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~LocalServer() {
        server.stop();
        thread_.join();
    }
    std::string url(const std::string& prefix = "/v1") const {
        return "http://127.0.0.1:" + std::to_string(port_) + prefix;
    }

    httplib::Server server;

  private:
    int port_ = 0;
    std::thread thread_;
};

} // namespace

TEST_CASE("mock echo returns the first tokens after the anchor", "[generation]") {
    MockEchoBackend plain(3);
    CHECK(plain.complete("a b  c d e", params()) == "a b c");
    MockEchoBackend anchored(2, "### Input");
    CHECK(anchored.complete("x ### Input y\n### Input\n  hello there world", params()) == "hello there");
    CHECK(anchored.complete("no anchor here", params()) == "no anchor");
}

TEST_CASE("generation parameters validate and digest", "[generation]") {
    CHECK_NOTHROW(params().validate());
    CHECK_THROWS_AS((GenerationParams{-0.1, 128, "m"}.validate()), ConfigError);
    CHECK_THROWS_AS((GenerationParams{0.7, 0, "m"}.validate()), ConfigError);
    CHECK(params().digest() == params().digest());
    CHECK(params().digest() != GenerationParams{0.8, 128, "m"}.digest());
    CHECK(ResponseCache::key("p", params()) != ResponseCache::key("p", params("other")));
    CHECK(ResponseCache::key("p", params()) != ResponseCache::key("q", params()));
}

TEST_CASE("response cache persists and skips a torn final line", "[generation]") {
    testing::TempDir dir;
    const auto file = dir / "gen.jsonl";
    const auto key = ResponseCache::key("prompt", params());
    {
        ResponseCache cache(file);
        CHECK_FALSE(cache.get(key));
        cache.put(key, "prompt", params(), "answer");
        CHECK(cache.get(key)->text == "answer");
    }
    {
        std::ofstream out(file, std::ios::app);
        out << R"({"key": "abc", "text": "trunc)";
    }
    ResponseCache reloaded(file);
    CHECK(reloaded.size() == 1);
    CHECK(reloaded.get(key)->text == "answer");
    CHECK(reloaded.get(key)->model_tag == "m");
}

TEST_CASE("generator caches, and a second generator reads the same file", "[generation]") {
    testing::TempDir dir;
    auto backend = std::make_shared<ScriptedBackend>();
    Generator g(backend, fast_options(dir / "gen.jsonl"));
    const auto first = g.generate("hello", params());
    CHECK(first.text == "reply to hello");
    CHECK_FALSE(first.cached);
    CHECK(first.attempts == 1);
    const auto second = g.generate("hello", params());
    CHECK(second.cached);
    CHECK(second.text == first.text);
    CHECK(backend->calls == 1);

    Generator other(backend, fast_options(dir / "gen.jsonl"));
    CHECK(other.generate("hello", params()).cached);
    CHECK(backend->calls == 1);
    CHECK_THROWS_AS(g.generate("  ", params()), PreconditionError);
}

TEST_CASE("transport failures are retried up to the attempt cap", "[generation]") {
    using F = ScriptedBackend::Fail;
    auto twice = std::make_shared<ScriptedBackend>(std::vector<F>{F::Transport, F::Transport});
    Generator g(twice, fast_options());
    const auto r = g.generate("p", params());
    CHECK(r.attempts == 3);
    CHECK(g.backend_calls() == 3);

    auto thrice = std::make_shared<ScriptedBackend>(std::vector<F>{F::Transport, F::Transport, F::Transport});
    Generator g2(thrice, fast_options());
    CHECK_THROWS_AS(g2.generate("p", params()), GenerationError);
    CHECK(thrice->calls == 3);

    auto overflow = std::make_shared<ScriptedBackend>(std::vector<F>{F::Overflow});
    Generator g3(overflow, fast_options());
    CHECK_THROWS_AS(g3.generate("p", params()), ContextOverflowError);
    CHECK(overflow->calls == 1);

    auto rejected = std::make_shared<ScriptedBackend>(std::vector<F>{F::Other});
    Generator g4(rejected, fast_options());
    CHECK_THROWS_AS(g4.generate("p", params()), GenerationError);
    CHECK(rejected->calls == 1);
}

TEST_CASE("in-flight requests are capped and identical ones coalesce", "[generation]") {
    auto backend = std::make_shared<ScriptedBackend>(std::vector<ScriptedBackend::Fail>{},
                                                     std::chrono::milliseconds(20));
    auto options = fast_options();
    options.max_in_flight = 2;
    Generator g(backend, options);
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&g, t] { g.generate("prompt " + std::to_string(t % 4), params()); });
    }
    for (auto& t : threads) {
        t.join();
    }
    CHECK(backend->peak <= 2);
    CHECK(backend->calls <= 4);
    CHECK(backend->calls >= 1);
}

TEST_CASE("chat backend speaks the OpenAI wire format", "[generation][http]") {
    LocalServer srv;
    json seen;
    std::string auth;
    srv.server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        seen = json::parse(req.body);
        auth = req.get_header_value("Authorization");
        res.set_content(R"({"choices": [{"message": {"role": "assistant", "content": "A headline"}}]})",
                        "application/json");
    });
    OpenAiChatBackend backend({srv.url(), "sk-test", 5});
    CHECK(backend.complete("the prompt", {0.7, 128, "gemma"}) == "A headline");
    CHECK(seen["model"] == "gemma");
    CHECK(seen["temperature"] == 0.7);
    CHECK(seen["max_tokens"] == 128);
    CHECK(seen["messages"].size() == 2);
    CHECK(seen["messages"][1]["role"] == "user");
    CHECK(seen["messages"][1]["content"] == "the prompt");
    CHECK(auth == "Bearer sk-test");
}

TEST_CASE("chat backend maps HTTP failures onto the error types", "[generation][http]") {
    LocalServer srv;
    int status = 500;
    std::string body = "oops";
    srv.server.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
        res.status = status;
        res.set_content(body, "application/json");
    });
    OpenAiChatBackend backend({srv.url(), "", 5});
    CHECK_THROWS_AS(backend.complete("p", params()), TransportError);
    status = 429;
    CHECK_THROWS_AS(backend.complete("p", params()), TransportError);
    status = 400;
    body = R"({"error": {"message": "This model's maximum context length is 8192 tokens"}})";
    CHECK_THROWS_AS(backend.complete("p", params()), ContextOverflowError);
    body = R"({"error": {"message": "bad temperature"}})";
    try {
        backend.complete("p", params());
        FAIL("expected a GenerationError");
    } catch (const TransportError&) {
        FAIL("a plain 400 is not retryable");
    } catch (const ContextOverflowError&) {
        FAIL("not an overflow");
    } catch (const GenerationError&) {
    }
    status = 200;
    body = R"({"choices": []})";
    CHECK_THROWS_AS(backend.complete("p", params()), GenerationError);

    OpenAiChatBackend unreachable({"http://127.0.0.1:1/v1", "", 1});
    CHECK_THROWS_AS(unreachable.complete("p", params()), TransportError);
    CHECK_THROWS_AS(OpenAiChatBackend({"ftp://example.com", "", 1}), ConfigError);
}

TEST_CASE("generator retries a flaky HTTP backend", "[generation][http]") {
    LocalServer srv;
    std::atomic<int> hits{0};
    srv.server.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
        if (hits++ < 2) {
            res.status = 503;
            return;
        }
        res.set_content(R"({"choices": [{"message": {"content": "ok"}}]})", "application/json");
    });
    Generator g(std::make_shared<OpenAiChatBackend>(OpenAiChatBackend::Options{srv.url(), "", 5}), fast_options());
    const auto r = g.generate("p", params());
    CHECK(r.text == "ok");
    CHECK(r.attempts == 3);
}

TEST_CASE("HTTP embedding backend batches and learns the dimension", "[retrieval][http]") {
    LocalServer srv;
    std::vector<std::size_t> batch_sizes;
    srv.server.Post("/v1/embeddings", [&](const httplib::Request& req, httplib::Response& res) {
        const auto body = json::parse(req.body);
        batch_sizes.push_back(body["input"].size());
        json data = json::array();
        // Reply out of order; the index field decides placement.
        for (std::size_t i = body["input"].size(); i-- > 0;) {
            const auto text = body["input"][i].get<std::string>();
            data.push_back({{"index", i}, {"embedding", {static_cast<double>(text.size()), 1.0, 0.5}}});
        }
        res.set_content(json{{"data", data}, {"model", body["model"]}}.dump(), "application/json");
    });
    HttpEmbeddingBackend::Options o;
    o.base_url = srv.url();
    o.model = "contriever";
    o.batch_size = 2;
    auto backend = std::make_shared<HttpEmbeddingBackend>(o);
    const auto out = backend->embed_batch({"a", "bbb", "cc"});
    REQUIRE(out.size() == 3);
    CHECK(out[0][0] == 1.0);
    CHECK(out[1][0] == 3.0);
    CHECK(out[2][0] == 2.0);
    CHECK(batch_sizes == std::vector<std::size_t>{2, 1});
    CHECK(backend->dimension() == 3);
    CHECK(backend->model_tag() == "contriever");
}

TEST_CASE("title outputs are cleaned, tweets are only trimmed", "[generation]") {
    CHECK(postprocess_output(Task::LaMP4, "\n\n  Title: \"Storm Hits Coast\"\nExplanation: ...") ==
          "Storm Hits Coast");
    CHECK(postprocess_output(Task::LaMP4, "**Headline: Markets Rally**") == "Markets Rally");
    CHECK(postprocess_output(Task::LaMP5, "\xE2\x80\x9C" "Deep Retrieval" "\xE2\x80\x9D") == "Deep Retrieval");
    CHECK(postprocess_output(Task::LaMP5, "'Quoted'", false) == "'Quoted'");
    CHECK(postprocess_output(Task::LaMP7, "  \"so happy\"\nsecond line ") == "\"so happy\"\nsecond line");
    CHECK(postprocess_output(Task::LaMP4, "") == "");
}
