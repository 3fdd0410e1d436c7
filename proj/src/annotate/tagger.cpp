// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#include "authorrag/annotate.hpp"
#include "authorrag/text.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>

namespace authorrag {
namespace {

using Tagged = std::vector<std::pair<std::string, std::string>>;

bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_lower(char c) { return std::islower(static_cast<unsigned char>(c)) != 0; }

// str.istitle() for ASCII letters; other bytes count as uncased.
bool is_title(std::string_view w) {
    bool cased = false;
    bool prev_cased = false;
    for (char c : w) {
        if (is_upper(c)) {
            if (prev_cased) {
                return false;
            }
            prev_cased = cased = true;
        } else if (is_lower(c)) {
            if (!prev_cased) {
                return false;
            }
            prev_cased = cased = true;
        } else {
            prev_cased = false;
        }
    }
    return cased;
}

bool is_cardinal(std::string_view w) {
    if (w.empty()) {
        return false;
    }
    return std::all_of(w.begin(), w.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c)) != 0 || std::string_view("-,.:/%$").find(c) != std::string_view::npos;
    });
}

// Headline-style capitalization: every longer word is capitalized. Lexicon
// lookups then use the lowercase form so "Stocks Rise" is not read as names.
bool is_title_cased(const std::vector<std::string>& tokens) {
    int long_words = 0;
    for (const auto& t : tokens) {
        if (t.size() >= 4 && text::is_ascii_alpha(t)) {
            if (!is_title(t)) {
                return false;
            }
            ++long_words;
        }
    }
    return long_words >= 2;
}

bool is_morphology_command(std::string_view c) {
    static const std::vector<std::string_view> cmds = {
        "char",  "haspref",  "hassuf",  "addpref",  "addsuf",  "deletepref",  "deletesuf",  "goodleft",  "goodright",
        "fchar", "fhaspref", "fhassuf", "faddpref", "faddsuf", "fdeletepref", "fdeletesuf", "fgoodleft", "fgoodright"};
    return std::find(cmds.begin(), cmds.end(), c) != cmds.end();
}

std::string apply_morphology(const LanguageResources& res, const std::string& w, std::string tag,
                             const std::string* prev_word, const std::string* next_word) {
    bool f = false;
    std::string x;
    std::string pos;
    std::string cmd;
    for (const auto& r : res.morphology_rules) {
        if (r.size() < 4) {
            continue;
        }
        if (is_morphology_command(r[1])) {
            f = false;
            x = r[0];
            pos = r[r.size() - 2];
            cmd = text::to_lower_ascii(r[1]);
        }
        if (is_morphology_command(r[2])) {
            f = true;
            x = r[1];
            pos = r[r.size() - 2];
            cmd = text::to_lower_ascii(r[2]);
            cmd.erase(0, cmd.find_first_not_of('f'));
        }
        if (cmd.empty() || (f && tag != r[0])) {
            continue;
        }
        bool hit = false;
        if (cmd == "char") {
            hit = w.find(x) != std::string::npos;
        } else if (cmd == "haspref") {
            hit = text::starts_with(w, x);
        } else if (cmd == "hassuf") {
            hit = text::ends_with(w, x);
        } else if (cmd == "addpref") {
            hit = res.lexicon.count(x + w) > 0;
        } else if (cmd == "addsuf") {
            hit = res.lexicon.count(w + x) > 0;
        } else if (cmd == "deletepref") {
            hit = text::starts_with(w, x) && res.lexicon.count(w.substr(x.size())) > 0;
        } else if (cmd == "deletesuf") {
            hit = text::ends_with(w, x) && res.lexicon.count(w.substr(0, w.size() - x.size())) > 0;
        } else if (cmd == "goodleft") {
            hit = next_word != nullptr && x == *next_word;
        } else if (cmd == "goodright") {
            hit = prev_word != nullptr && x == *prev_word;
        }
        if (hit) {
            tag = pos;
        }
    }
    return tag;
}

bool context_matches(const std::vector<std::string>& r, const Tagged& t, std::size_t i) {
    const std::string cmd = text::to_lower_ascii(r[2]);
    const std::string& x = r[3];
    const std::string y = r.size() > 4 ? r[4] : std::string();
    auto tag = [&](int off) -> const std::string& { return t[i + off].second; };
    auto word = [&](int off) -> const std::string& { return t[i + off].first; };
    if (cmd == "prevtag") return x == tag(-1);
    if (cmd == "nexttag") return x == tag(1);
    if (cmd == "prev2tag") return x == tag(-2);
    if (cmd == "next2tag") return x == tag(2);
    if (cmd == "prev1or2tag") return x == tag(-1) || x == tag(-2);
    if (cmd == "next1or2tag") return x == tag(1) || x == tag(2);
    if (cmd == "prev1or2or3tag") return x == tag(-1) || x == tag(-2) || x == tag(-3);
    if (cmd == "next1or2or3tag") return x == tag(1) || x == tag(2) || x == tag(3);
    if (cmd == "surroundtag") return x == tag(-1) && y == tag(1);
    if (cmd == "curwd") return x == word(0);
    if (cmd == "prevwd") return x == word(-1);
    if (cmd == "nextwd") return x == word(1);
    if (cmd == "prev1or2wd") return x == word(-1) || x == word(-2);
    if (cmd == "next1or2wd") return x == word(1) || x == word(2);
    if (cmd == "prevwdtag") return x == word(-1) && y == tag(-1);
    if (cmd == "nextwdtag") return x == word(1) && y == tag(1);
    if (cmd == "wdprevtag") return x == tag(-1) && y == word(0);
    if (cmd == "wdnexttag") return x == word(0) && y == tag(1);
    if (cmd == "wdand2aft") return x == word(0) && y == word(2);
    if (cmd == "wdand2tagbfr") return x == tag(-2) && y == word(0);
    if (cmd == "wdand2tagaft") return x == word(0) && y == tag(2);
    if (cmd == "lbigram") return x == word(-1) && y == word(0);
    if (cmd == "rbigram") return x == word(0) && y == word(1);
    if (cmd == "prevbigram") return x == tag(-2) && y == tag(-1);
    if (cmd == "nextbigram") return x == tag(1) && y == tag(2);
    return false;
}

void apply_context(const LanguageResources& res, Tagged& tagged) {
    static const std::pair<std::string, std::string> pad{"STAART", "STAART"};
    Tagged t;
    t.reserve(tagged.size() + 6);
    t.insert(t.end(), 3, pad);
    t.insert(t.end(), tagged.begin(), tagged.end());
    t.insert(t.end(), 3, pad);
    for (std::size_t i = 3; i + 3 < t.size(); ++i) {
        // Every rule is tested against the tag the token had before this
        // position was visited; neighbours already reflect earlier rewrites.
        const std::string original = t[i].second;
        for (const auto& r : res.context_rules) {
            if (r.size() < 4 || (original != r[0] && r[0] != "*")) {
                continue;
            }
            if (context_matches(r, t, i)) {
                t[i].second = r[1];
            }
        }
    }
    std::copy(t.begin() + 3, t.end() - 3, tagged.begin());
}

void apply_entities(const LanguageResources& res, Tagged& tokens) {
    static const std::regex url(R"(^http://)");
    static const std::regex www(R"(^www\..*?\.[com|orgnetduk]$)");
    static const std::regex email(R"(^[\w\-\.\+]+@(\w[\w\-]+\.)+[\w\-]+$)");
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string w = text::to_lower_ascii(tokens[i].first);
        if (std::regex_search(w, url) || std::regex_match(w, www) || std::regex_match(w, email)) {
            tokens[i].second = "NNP";
        }
        const auto it = res.entities.find(w);
        if (it == res.entities.end()) {
            continue;
        }
        for (const auto& e : it->second) {
            bool match = true;
            for (std::size_t j = 0; j < e.words.size(); ++j) {
                if (i + j >= tokens.size() || text::to_lower_ascii(tokens[i + j].first) != e.words[j]) {
                    match = false;
                    break;
                }
            }
            if (match) {
                for (std::size_t j = 0; j < e.words.size(); ++j) {
                    auto& tag = tokens[i + j].second;
                    tag = (tag == "NNPS" ? std::string("NNPS") : std::string("NNP")) + e.label;
                }
                i += e.words.size() - 1;
                break;
            }
        }
    }
}

} // namespace

const std::string* LanguageResources::lexicon_tag(std::string_view word) const {
    const auto it = lexicon.find(word);
    return it == lexicon.end() ? nullptr : &it->second;
}

std::vector<std::string> tag_sentence(const LanguageResources& res, const std::vector<std::string>& tokens) {
    const bool title_cased = is_title_cased(tokens);
    Tagged tagged;
    tagged.reserve(tokens.size());
    std::vector<bool> known(tokens.size(), false);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string* tag = nullptr;
        const std::string lower = text::to_lower_ascii(tokens[i]);
        if (title_cased) {
            tag = res.lexicon_tag(lower);
            if (tag == nullptr) {
                tag = res.lexicon_tag(tokens[i]);
            }
        } else {
            tag = res.lexicon_tag(tokens[i]);
            if (tag == nullptr && i == 0) {
                tag = res.lexicon_tag(lower);
            }
        }
        known[i] = tag != nullptr;
        tagged.emplace_back(tokens[i], tag != nullptr ? *tag : std::string());
    }
    for (std::size_t i = 0; i < tagged.size(); ++i) {
        if (known[i]) {
            continue;
        }
        const auto& w = tagged[i].first;
        if (is_title(w)) {
            tagged[i].second = "NNP";
        } else if (is_cardinal(w)) {
            tagged[i].second = "CD";
        } else {
            const std::string* prev = i > 0 ? &tagged[i - 1].first : nullptr;
            const std::string* next = i + 1 < tagged.size() ? &tagged[i + 1].first : nullptr;
            tagged[i].second = apply_morphology(res, w, "NN", prev, next);
        }
    }
    apply_context(res, tagged);
    apply_entities(res, tagged);
    std::vector<std::string> tags;
    tags.reserve(tagged.size());
    for (auto& [w, t] : tagged) {
        tags.push_back(std::move(t));
    }
    return tags;
}

Pos penn_to_universal(std::string_view tag, std::string_view word) noexcept {
    const bool has_alnum = std::any_of(word.begin(), word.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) != 0 || static_cast<unsigned char>(c) >= 0x80;
    });
    const std::string lower = text::to_lower_ascii(word);
    if (!has_alnum && tag != "CC") {
        if (tag == "SYM" && lower != "(!)") {
            return Pos::SYM;
        }
        if (lower.size() == 1 && std::string_view("$%&@#+=<>*^~|").find(lower[0]) != std::string_view::npos) {
            return Pos::SYM;
        }
        return Pos::PUNCT;
    }
    if (text::starts_with(tag, "NNP")) return Pos::PROPN;
    if (tag == "NN" || tag == "NNS") return Pos::NOUN;
    if (tag == "MD") return Pos::AUX;
    if (text::starts_with(tag, "VB")) {
        static const std::vector<std::string_view> be = {"be", "is", "are", "was", "were", "been", "being", "am", "'m", "'re"};
        if (std::find(be.begin(), be.end(), lower) != be.end() || (lower == "'s" && tag == "VBZ")) {
            return Pos::AUX;
        }
        return Pos::VERB;
    }
    if (tag == "JJ" || tag == "JJR" || tag == "JJS") return Pos::ADJ;
    if (tag == "RB" || tag == "RBR" || tag == "RBS") {
        return lower == "not" || lower == "n't" ? Pos::PART : Pos::ADV;
    }
    if (tag == "WRB") return Pos::ADV;
    if (tag == "RP") return Pos::ADP;
    if (tag == "DT" || tag == "PDT" || tag == "WDT") return Pos::DET;
    if (tag == "PRP" || tag == "PRP$" || tag == "WP" || tag == "WP$" || tag == "EX") return Pos::PRON;
    if (tag == "CD") return Pos::NUM;
    if (tag == "CC") return Pos::CCONJ;
    if (tag == "IN") {
        static const std::vector<std::string_view> subordinators = {"because", "although", "though", "whether",
                                                                    "unless",  "whereas",  "if",     "while"};
        return std::find(subordinators.begin(), subordinators.end(), lower) != subordinators.end() ? Pos::SCONJ
                                                                                                    : Pos::ADP;
    }
    if (tag == "TO" || tag == "POS") return Pos::PART;
    if (tag == "UH") return Pos::INTJ;
    if (tag == "SYM" || tag == "$" || tag == "#") return Pos::SYM;
    if (tag == "FW" || tag == "LS") return Pos::X;
    return Pos::X;
}

namespace {

bool is_vowel(char c) { return std::string_view("aeiou").find(c) != std::string_view::npos; }

// Restores a silent final e after stripping an inflection: "mak" -> "make".
std::string restore_stem(std::string stem) {
    const auto n = stem.size();
    if (n >= 3 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) && std::string_view("lsz").find(stem[n - 1]) == std::string_view::npos) {
        stem.pop_back();
        return stem;
    }
    if (n >= 1 && (stem.back() == 'v' || text::ends_with(stem, "iz") || (n >= 5 && text::ends_with(stem, "at")))) {
        return stem + "e";
    }
    if (n == 3 && !is_vowel(stem[0]) && is_vowel(stem[1]) && !is_vowel(stem[2]) &&
        std::string_view("wxy").find(stem[2]) == std::string_view::npos) {
        return stem + "e";
    }
    return stem;
}

const std::map<std::string, std::string, std::less<>>& irregular_verbs() {
    static const std::map<std::string, std::string, std::less<>> m = {
        {"was", "be"},        {"were", "be"},      {"been", "be"},       {"being", "be"},     {"is", "be"},
        {"are", "be"},        {"am", "be"},        {"'m", "be"},         {"'re", "be"},       {"'s", "be"},
        {"had", "have"},      {"has", "have"},     {"'ve", "have"},      {"did", "do"},       {"does", "do"},
        {"done", "do"},       {"went", "go"},      {"gone", "go"},       {"goes", "go"},      {"said", "say"},
        {"made", "make"},     {"took", "take"},    {"taken", "take"},    {"came", "come"},    {"saw", "see"},
        {"seen", "see"},      {"got", "get"},      {"gotten", "get"},    {"gave", "give"},    {"given", "give"},
        {"found", "find"},    {"thought", "think"}, {"told", "tell"},    {"became", "become"}, {"left", "leave"},
        {"felt", "feel"},     {"brought", "bring"}, {"began", "begin"},  {"begun", "begin"},  {"kept", "keep"},
        {"held", "hold"},     {"wrote", "write"},  {"written", "write"}, {"stood", "stand"},  {"heard", "hear"},
        {"meant", "mean"},    {"met", "meet"},     {"ran", "run"},       {"paid", "pay"},     {"sat", "sit"},
        {"spoke", "speak"},   {"spoken", "speak"}, {"led", "lead"},      {"grew", "grow"},    {"grown", "grow"},
        {"lost", "lose"},     {"fell", "fall"},    {"fallen", "fall"},   {"sent", "send"},    {"built", "build"},
        {"understood", "understand"}, {"drew", "draw"}, {"drawn", "draw"}, {"broke", "break"}, {"broken", "break"},
        {"spent", "spend"},   {"rose", "rise"},    {"risen", "rise"},    {"drove", "drive"},  {"driven", "drive"},
        {"bought", "buy"},    {"wore", "wear"},    {"chose", "choose"},  {"chosen", "choose"}, {"ate", "eat"},
        {"eaten", "eat"},     {"knew", "know"},    {"known", "know"},    {"shown", "show"},   {"won", "win"},
        {"sold", "sell"},     {"taught", "teach"}, {"caught", "catch"},  {"fought", "fight"}, {"sought", "seek"},
        {"flew", "fly"},      {"flown", "fly"},    {"threw", "throw"},   {"thrown", "throw"}, {"hid", "hide"},
        {"'d", "would"},      {"'ll", "will"},     {"wo", "will"},       {"ca", "can"},       {"n't", "not"}};
    return m;
}

} // namespace

std::string lemmatize(std::string_view word, std::string_view tag) {
    if (text::starts_with(tag, "NNP")) {
        return std::string(word);
    }
    std::string w = text::to_lower_ascii(word);
    if (w == "i" && tag == "PRP") {
        return "I";
    }
    if (text::starts_with(tag, "VB") || tag == "MD" || tag == "RB") {
        const auto it = irregular_verbs().find(w);
        if (it != irregular_verbs().end()) {
            return it->second;
        }
    }
    if (tag == "NNS" || tag == "NNPS") {
        static const std::map<std::string, std::string, std::less<>> plurals = {
            {"men", "man"}, {"women", "woman"}, {"children", "child"}, {"feet", "foot"},
            {"teeth", "tooth"}, {"mice", "mouse"}, {"geese", "goose"}};
        if (const auto it = plurals.find(w); it != plurals.end()) {
            return it->second;
        }
        if (w.size() > 4 && text::ends_with(w, "ies")) {
            return w.substr(0, w.size() - 3) + "y";
        }
        for (std::string_view suffix : {"sses", "xes", "ches", "shes", "zes"}) {
            if (text::ends_with(w, suffix)) {
                return w.substr(0, w.size() - 2);
            }
        }
        if (w.size() > 2 && w.back() == 's' && !text::ends_with(w, "ss") && !text::ends_with(w, "us") &&
            !text::ends_with(w, "is")) {
            w.pop_back();
        }
        return w;
    }
    if (tag == "VBZ") {
        if (w.size() > 4 && text::ends_with(w, "ies")) {
            return w.substr(0, w.size() - 3) + "y";
        }
        for (std::string_view suffix : {"sses", "xes", "ches", "shes", "zes", "oes"}) {
            if (text::ends_with(w, suffix)) {
                return w.substr(0, w.size() - 2);
            }
        }
        if (w.size() > 2 && w.back() == 's' && !text::ends_with(w, "ss")) {
            w.pop_back();
        }
        return w;
    }
    if (tag == "VBD" || tag == "VBN") {
        if (w.size() > 4 && text::ends_with(w, "ied")) {
            return w.substr(0, w.size() - 3) + "y";
        }
        if (text::ends_with(w, "eed")) {
            return w.substr(0, w.size() - 1);
        }
        if (w.size() > 3 && text::ends_with(w, "ed")) {
            return restore_stem(w.substr(0, w.size() - 2));
        }
        return w;
    }
    if (tag == "VBG") {
        if (w.size() > 4 && text::ends_with(w, "ing")) {
            return restore_stem(w.substr(0, w.size() - 3));
        }
        return w;
    }
    if (tag == "JJR" || tag == "JJS") {
        static const std::map<std::string, std::string, std::less<>> irregular = {
            {"better", "good"}, {"best", "good"}, {"worse", "bad"}, {"worst", "bad"}};
        if (const auto it = irregular.find(w); it != irregular.end()) {
            return it->second;
        }
        const std::string_view suffix = tag == "JJR" ? "er" : "est";
        if (w.size() > suffix.size() + 2 && text::ends_with(w, suffix)) {
            std::string stem = w.substr(0, w.size() - suffix.size());
            if (stem.back() == 'i') {
                stem.back() = 'y';
                return stem;
            }
            if (stem.size() >= 3 && stem[stem.size() - 1] == stem[stem.size() - 2]) {
                stem.pop_back();
            }
            return stem;
        }
    }
    return w;
}

} // namespace authorrag
