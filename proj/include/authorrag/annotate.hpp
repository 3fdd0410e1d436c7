// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace authorrag {

/// Universal Dependencies coarse part-of-speech tags.
enum class Pos { ADJ, ADP, ADV, AUX, CCONJ, DET, INTJ, NOUN, NUM, PART, PRON, PROPN, PUNCT, SCONJ, SYM, VERB, X };

std::string_view pos_name(Pos pos) noexcept;
/// Accepts UD names; anything unrecognized maps to X.
Pos parse_pos(std::string_view name) noexcept;

struct Token {
    std::string surface;
    std::string lemma;
    Pos pos = Pos::X;
    /// Penn Treebank tag from the tagger; empty for pre-annotated input that lacks it.
    std::string tag;
    bool is_alpha = false;
    bool is_stopword = false;
    int syllables = 0;

    bool operator==(const Token&) const = default;
};

/// Half-open token range [begin, end).
struct SentenceSpan {
    std::size_t begin = 0;
    std::size_t end = 0;

    bool operator==(const SentenceSpan&) const = default;
};

struct EntityMention {
    std::string surface;
    /// PERSON, ORG, GPE, DATE or MISC for the built-in backend.
    std::string label;

    bool operator==(const EntityMention&) const = default;
};

struct DependencyArc {
    std::size_t child = 0;
    std::size_t head = 0;
    std::string relation;

    bool operator==(const DependencyArc&) const = default;
};

struct AnnotatedDocument {
    std::vector<Token> tokens;
    std::vector<SentenceSpan> sentences;
    std::vector<EntityMention> entities;
    /// One arc per non-root token; each sentence has exactly one root.
    std::vector<DependencyArc> arcs;
    double polarity = 0.0;
    double subjectivity = 0.0;

    bool operator==(const AnnotatedDocument&) const = default;

    /// Throws AnnotationError naming the first broken invariant.
    void validate() const;
};

nlohmann::json to_json(const AnnotatedDocument& doc);
AnnotatedDocument annotated_document_from_json(const nlohmann::json& j);

/// Result of the lexicon-based sentiment scorer.
struct SentimentScore {
    double polarity = 0.0;
    double subjectivity = 0.0;
    /// Number of lexicon assessments that contributed.
    std::size_t matches = 0;
};

/// Word-level polarity/subjectivity/intensity lexicon with the
/// averaging, modifier and negation rules of pattern.en.
class SentimentLexicon {
  public:
    struct Entry {
        double polarity = 0.0;
        double subjectivity = 0.0;
        double intensity = 1.0;
    };

    /// Loads the tab-separated lexicon (form, pos, polarity, subjectivity, intensity).
    static SentimentLexicon load(const std::filesystem::path& tsv);

    /// Scores a sequence of tokens (any case; lowercased internally).
    SentimentScore score(const std::vector<std::string>& tokens) const;

    /// Sense-averaged entry used when no part of speech is known.
    const Entry* lookup(std::string_view word) const;
    bool is_modifier(std::string_view word) const;
    std::size_t size() const noexcept { return words_.size(); }

  private:
    struct WordSenses {
        Entry any;
        bool has_adverb = false;
    };
    std::map<std::string, WordSenses, std::less<>> words_;
};

/// Lexicons shared (read-only) by every annotator instance.
class LanguageResources {
  public:
    static std::shared_ptr<const LanguageResources> load(const std::filesystem::path& dir);
    /// Loaded once from data_dir()/lexicon.
    static std::shared_ptr<const LanguageResources> shared();

    struct EntityPattern {
        std::vector<std::string> words;
        std::string label; // "-PERS", "-LOC", "-ORG" or ""
    };

    std::map<std::string, std::string, std::less<>> lexicon;
    std::vector<std::vector<std::string>> morphology_rules;
    std::vector<std::vector<std::string>> context_rules;
    std::map<std::string, std::vector<EntityPattern>, std::less<>> entities;
    std::map<std::string, int, std::less<>> stopwords; // value unused
    SentimentLexicon sentiment;
    /// Digest over every loaded file; part of annotation cache keys.
    std::string fingerprint;

    bool is_stopword(std::string_view lower) const { return stopwords.find(lower) != stopwords.end(); }
    const std::string* lexicon_tag(std::string_view word) const;
};

/// Pattern-style tokenizer: returns sentences of tokens.
std::vector<std::vector<std::string>> tokenize_sentences(std::string_view text);

/// Penn Treebank tags for one sentence (lexicon, morphology, context and entity rules).
std::vector<std::string> tag_sentence(const LanguageResources& res, const std::vector<std::string>& tokens);

Pos penn_to_universal(std::string_view penn_tag, std::string_view word) noexcept;

/// Vowel-group syllable estimate; 0 for tokens without letters, >= 1 otherwise.
int count_syllables(std::string_view word);

std::string lemmatize(std::string_view word, std::string_view penn_tag);

/// Named-entity spans over a tagged sentence.
std::vector<EntityMention> find_entities(const std::vector<Token>& tokens, SentenceSpan sentence);

/// Heuristic dependency tree over one sentence; arcs use absolute token indices.
std::vector<DependencyArc> parse_dependencies(const std::vector<Token>& tokens, SentenceSpan sentence);

/// Annotation backend contract. Implementations are used by one worker at a time.
class Annotator {
  public:
    virtual ~Annotator() = default;
    /// Throws PreconditionError for text that is empty after trimming.
    virtual AnnotatedDocument annotate(std::string_view text) const = 0;
    /// Identifies backend + resource versions; changes invalidate caches.
    virtual std::string version() const = 0;
};

class BuiltinAnnotator final : public Annotator {
  public:
    explicit BuiltinAnnotator(std::shared_ptr<const LanguageResources> resources = LanguageResources::shared());

    AnnotatedDocument annotate(std::string_view text) const override;
    std::string version() const override;

    /// Texts longer than this are annotated in chunks split at whitespace.
    static constexpr std::size_t kChunkBytes = 200'000;

  private:
    AnnotatedDocument annotate_chunk(std::string_view text) const;

    std::shared_ptr<const LanguageResources> res_;
};

/// Offline annotations keyed by (author_id, doc_id), loaded from JSONL records
/// {"author_id", "doc_id", "annotation": {...}}.
class PreannotatedStore {
  public:
    static PreannotatedStore load(const std::filesystem::path& jsonl);

    void put(std::string author_id, std::string doc_id, AnnotatedDocument doc);
    const AnnotatedDocument* find(std::string_view author_id, std::string_view doc_id) const;
    void save(const std::filesystem::path& jsonl) const;

    std::string version() const { return version_; }
    void set_version(std::string v) { version_ = std::move(v); }
    std::size_t size() const noexcept { return docs_.size(); }

  private:
    std::map<std::pair<std::string, std::string>, AnnotatedDocument, std::less<>> docs_;
    std::string version_ = "preannotated";
};

/// Scores text with the shared sentiment lexicon. Precondition: non-empty after trim.
double polarity_of(std::string_view text);
double subjectivity_of(std::string_view text);

} // namespace authorrag
