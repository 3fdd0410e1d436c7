// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#include "authorrag/annotate.hpp"
#include "authorrag/error.hpp"
#include "authorrag/resources.hpp"
#include "authorrag/text.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <sstream>

namespace authorrag {
namespace {

constexpr std::array<std::string_view, 4> kNegations = {"no", "not", "n't", "never"};

struct EmoticonGroup {
    double polarity;
    std::vector<std::string_view> faces; // lowercase
};

const std::vector<EmoticonGroup>& emoticon_groups() {
    static const std::vector<EmoticonGroup> groups = {
        {+1.00, {"<3", "♥"}},
        {+1.00, {">:d", ":-d", ":d", "=-d", "=d", "x-d", "xd", "8-d"}},
        {+0.75, {">:p", ":-p", ":p", ":-b", ":b", ":c)", ":o)", ":^)"}},
        {+0.50, {">:)", ":-)", ":)", "=)", "=]", ":]", ":}", ":>", ":3", "8)", "8-)"}},
        {+0.25, {">;]", ";-)", ";)", ";-]", ";]", ";d", ";^)", "*-)", "*)"}},
        {+0.05, {">:o", ":-o", ":o", "o_o", "o.o", "°o°"}},
        {-0.25, {">:/", ":-/", ":/", ":\\", ">:\\", ":-.", ":-s", ":s", ">.>"}},
        {-0.75, {">:[", ":-(", ":(", "=(", ":-[", ":[", ":{", ":-<", ":c", ":-c", "=/"}},
        {-1.00, {":'(", ":'''(", ";'("}},
    };
    return groups;
}

constexpr std::string_view kPunctuationChars = ".,;:!?()[]{}`''\"@#$^&*+-|=~_";

double clamp1(double v) { return std::max(-1.0, std::min(v, 1.0)); }

bool is_negation(std::string_view w) {
    return std::find(kNegations.begin(), kNegations.end(), w) != kNegations.end();
}

std::string strip_apostrophes(std::string_view w) {
    while (!w.empty() && w.front() == '\'') w.remove_prefix(1);
    while (!w.empty() && w.back() == '\'') w.remove_suffix(1);
    return std::string(w);
}

bool is_alpha_py(std::string_view w) {
    // str.isalpha(): non-empty and every code point a letter. Non-ASCII
    // code points are treated as letters except the degree sign.
    if (w.empty()) {
        return false;
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
        const auto c = static_cast<unsigned char>(w[i]);
        if (c < 0x80) {
            if (std::isalpha(c) == 0) {
                return false;
            }
        } else if (w.compare(i, 2, "°") == 0 || w.compare(i, 3, "♥") == 0) {
            return false;
        }
    }
    return true;
}

struct Assessment {
    double p;
    double s;
    double i;
    bool negated = false;
};

} // namespace

SentimentLexicon SentimentLexicon::load(const std::filesystem::path& tsv) {
    struct Sense {
        std::string pos;
        double p, s, i;
    };
    std::vector<std::string> order;
    std::map<std::string, std::vector<Sense>, std::less<>> senses;
    std::istringstream in(read_file(tsv));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::starts_with(line, ";;;") || text::trim(line).empty()) {
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;) {
            const auto tab = line.find('\t', start);
            fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (fields.size() != 5) {
            throw AnnotationError("sentiment lexicon " + tsv.string() + ":" + std::to_string(line_no) +
                                  ": expected 5 tab-separated fields");
        }
        auto [it, inserted] = senses.try_emplace(fields[0]);
        if (inserted) {
            order.push_back(fields[0]);
        }
        it->second.push_back({fields[1], std::stod(fields[2]), std::stod(fields[3]), std::stod(fields[4])});
    }

    SentimentLexicon lex;
    std::map<std::string, std::map<std::string, Entry>, std::less<>> by_pos;
    for (const auto& word : order) {
        // Average senses per part of speech (in first-seen order), then the
        // part-of-speech averages into the entry used without a tag.
        std::vector<std::string> pos_order;
        std::map<std::string, std::vector<const Sense*>> groups;
        for (const auto& sense : senses[word]) {
            if (groups.find(sense.pos) == groups.end()) pos_order.push_back(sense.pos);
            groups[sense.pos].push_back(&sense);
        }
        auto& entries = by_pos[word];
        for (const auto& pos : pos_order) {
            Entry e{0.0, 0.0, 0.0};
            for (const auto* s : groups[pos]) {
                e.polarity += s->p;
                e.subjectivity += s->s;
                e.intensity += s->i;
            }
            const auto n = static_cast<double>(groups[pos].size());
            e.polarity /= n;
            e.subjectivity /= n;
            e.intensity /= n;
            entries[pos] = e;
        }
        Entry any{0.0, 0.0, 0.0};
        for (const auto& pos : pos_order) {
            any.polarity += entries[pos].polarity;
            any.subjectivity += entries[pos].subjectivity;
            any.intensity += entries[pos].intensity;
        }
        const auto n = static_cast<double>(pos_order.size());
        any.polarity /= n;
        any.subjectivity /= n;
        any.intensity /= n;
        auto& ws = lex.words_[word];
        ws.any = any;
        ws.has_adverb = entries.count("RB") > 0;
    }
    // Derived adverbs: "terrible" -> "terribly", "happy" -> "happily".
    for (const auto& word : order) {
        const auto& entries = by_pos[word];
        const auto jj = entries.find("JJ");
        if (jj == entries.end()) {
            continue;
        }
        std::string w = word;
        if (text::ends_with(w, "y")) {
            w.back() = 'i';
        }
        if (text::ends_with(w, "le")) {
            w.resize(w.size() - 2);
        }
        auto& ws = lex.words_[w + "ly"];
        ws.any = jj->second;
        ws.has_adverb = true;
    }
    return lex;
}

const SentimentLexicon::Entry* SentimentLexicon::lookup(std::string_view word) const {
    const auto it = words_.find(word);
    return it == words_.end() ? nullptr : &it->second.any;
}

bool SentimentLexicon::is_modifier(std::string_view word) const {
    const auto it = words_.find(word);
    return it != words_.end() && it->second.has_adverb;
}

SentimentScore SentimentLexicon::score(const std::vector<std::string>& tokens) const {
    std::vector<Assessment> a;
    std::optional<std::string> m; // pending modifier word
    std::optional<std::string> n; // pending negation word
    for (const auto& token : tokens) {
        const std::string w = text::to_lower_ascii(token);
        if (const Entry* e = lookup(w)) {
            if (m.has_value() && !a.empty()) {
                auto& last = a.back();
                last.p = clamp1(e->polarity * last.i);
                last.s = clamp1(e->subjectivity * last.i);
                last.i = e->intensity;
            } else {
                a.push_back({e->polarity, e->subjectivity, e->intensity});
            }
            if (n.has_value() && !a.empty()) {
                a.back().i = 1.0 / a.back().i;
                a.back().negated = true;
            }
            m.reset();
            n.reset();
            if (is_modifier(w)) {
                m = w;
            }
            if (is_negation(w)) {
                n = w;
            }
        } else {
            if (is_negation(w)) {
                n = w;
            } else if (n.has_value() && strip_apostrophes(w).size() > 1) {
                n.reset();
            }
            if (n.has_value() && m.has_value() && text::ends_with(*m, "ly") && !a.empty()) {
                a.back().negated = true;
                n.reset();
            } else if (m.has_value() && w.size() > 2) {
                m.reset();
            }
            if (w == "!" && !a.empty()) {
                a.back().p = clamp1(a.back().p * 1.25);
            }
            if (w == "(!)") {
                a.push_back({0.0, 1.0, 1.0});
            }
            if (!is_alpha_py(w) && text::codepoint_count(w) <= 5 && kPunctuationChars.find(w) == std::string_view::npos) {
                for (const auto& group : emoticon_groups()) {
                    if (std::find(group.faces.begin(), group.faces.end(), w) != group.faces.end()) {
                        a.push_back({group.polarity, 1.0, 1.0});
                        break;
                    }
                }
            }
        }
    }
    SentimentScore out;
    out.matches = a.size();
    if (a.empty()) {
        return out;
    }
    double p = 0.0;
    double s = 0.0;
    for (const auto& x : a) {
        p += x.negated ? x.p * -0.5 : x.p;
        s += x.s;
    }
    out.polarity = std::clamp(p / static_cast<double>(a.size()), -1.0, 1.0);
    out.subjectivity = std::clamp(s / static_cast<double>(a.size()), 0.0, 1.0);
    return out;
}

namespace {

SentimentScore score_text(std::string_view text) {
    if (text::trim(text).empty()) {
        throw PreconditionError("sentiment of empty text");
    }
    std::vector<std::string> tokens;
    for (auto& sentence : tokenize_sentences(text)) {
        tokens.insert(tokens.end(), sentence.begin(), sentence.end());
    }
    return LanguageResources::shared()->sentiment.score(tokens);
}

} // namespace

double polarity_of(std::string_view text) { return score_text(text).polarity; }

double subjectivity_of(std::string_view text) { return score_text(text).subjectivity; }

} // namespace authorrag
