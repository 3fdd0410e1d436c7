// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#include "authorrag/evaluation.hpp"

#include <functional>
#include <map>

namespace authorrag {
namespace {

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_consonant(std::string_view w, std::size_t i) {
    if (is_vowel(w[i])) {
        return false;
    }
    if (w[i] == 'y') {
        bool negate = false;
        while (i > 0 && w[i] == 'y') {
            negate = !negate;
            --i;
        }
        return !is_vowel(w[i]) != negate;
    }
    return true;
}

std::vector<bool> consonant_flags(std::string_view w) {
    std::vector<bool> flags(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (is_vowel(w[i])) {
            flags[i] = false;
        } else if (w[i] == 'y') {
            flags[i] = i == 0 ? true : !flags[i - 1];
        } else {
            flags[i] = true;
        }
    }
    return flags;
}

int measure(std::string_view stem) {
    const auto flags = consonant_flags(stem);
    int m = 0;
    for (std::size_t i = 1; i < flags.size(); ++i) {
        m += (!flags[i - 1] && flags[i]) ? 1 : 0;
    }
    return m;
}

bool positive_measure(std::string_view stem) { return measure(stem) > 0; }

bool contains_vowel(std::string_view stem) {
    for (const bool c : consonant_flags(stem)) {
        if (!c) {
            return true;
        }
    }
    return false;
}

bool ends_double_consonant(std::string_view w) {
    return w.size() >= 2 && w[w.size() - 1] == w[w.size() - 2] && is_consonant(w, w.size() - 1);
}

bool ends_cvc(std::string_view w) {
    const auto n = w.size();
    if (n >= 3 && is_consonant(w, n - 3) && !is_consonant(w, n - 2) && is_consonant(w, n - 1) && w[n - 1] != 'w' &&
        w[n - 1] != 'x' && w[n - 1] != 'y') {
        return true;
    }
    return n == 2 && !is_consonant(w, 0) && is_consonant(w, 1);
}

using Condition = std::function<bool(std::string_view)>;

struct Rule {
    std::string_view suffix; // "*d" = any double consonant
    std::string replacement;
    Condition condition;
};

std::string apply_rules(const std::string& word, const std::vector<Rule>& rules) {
    for (const auto& rule : rules) {
        if (rule.suffix == "*d" && ends_double_consonant(word)) {
            const auto stem = std::string_view(word).substr(0, word.size() - 2);
            return !rule.condition || rule.condition(stem) ? std::string(stem) + rule.replacement : word;
        }
        if (ends_with(word, rule.suffix)) {
            const auto stem = std::string_view(word).substr(0, word.size() - rule.suffix.size());
            return !rule.condition || rule.condition(stem) ? std::string(stem) + rule.replacement : word;
        }
    }
    return word;
}

std::string replace_suffix(const std::string& word, std::string_view suffix, std::string_view replacement) {
    return word.substr(0, word.size() - suffix.size()) + std::string(replacement);
}

std::string step1a(const std::string& w) {
    if (ends_with(w, "ies") && w.size() == 4) {
        return replace_suffix(w, "ies", "ie");
    }
    return apply_rules(w, {{"sses", "ss", {}}, {"ies", "i", {}}, {"ss", "ss", {}}, {"s", "", {}}});
}

std::string step1b(const std::string& w) {
    if (ends_with(w, "ied")) {
        return replace_suffix(w, "ied", w.size() == 4 ? "ie" : "i");
    }
    if (ends_with(w, "eed")) {
        const auto stem = w.substr(0, w.size() - 3);
        return measure(stem) > 0 ? stem + "ee" : w;
    }
    std::string stem;
    bool matched = false;
    for (const std::string_view suffix : {"ed", "ing"}) {
        if (ends_with(w, suffix)) {
            stem = w.substr(0, w.size() - suffix.size());
            if (contains_vowel(stem)) {
                matched = true;
                break;
            }
        }
    }
    if (!matched) {
        return w;
    }
    const char last = stem.back();
    return apply_rules(stem, {{"at", "ate", {}},
                              {"bl", "ble", {}},
                              {"iz", "ize", {}},
                              {"*d", std::string(1, last),
                               [last](std::string_view) { return last != 'l' && last != 's' && last != 'z'; }},
                              {"", "e", [](std::string_view s) { return measure(s) == 1 && ends_cvc(s); }}});
}

std::string step1c(const std::string& w) {
    return apply_rules(w, {{"y", "i", [](std::string_view s) { return s.size() > 1 && is_consonant(s, s.size() - 1); }}});
}

std::string step2(const std::string& w) {
    if (ends_with(w, "alli") && positive_measure(std::string_view(w).substr(0, w.size() - 4))) {
        return step2(replace_suffix(w, "alli", "al"));
    }
    const Condition pos = positive_measure;
    const auto word_minus3 = std::string_view(w).substr(0, w.size() >= 3 ? w.size() - 3 : 0);
    return apply_rules(w, {{"ational", "ate", pos}, {"tional", "tion", pos}, {"enci", "ence", pos},
                           {"anci", "ance", pos},   {"izer", "ize", pos},    {"bli", "ble", pos},
                           {"alli", "al", pos},     {"entli", "ent", pos},   {"eli", "e", pos},
                           {"ousli", "ous", pos},   {"ization", "ize", pos}, {"ation", "ate", pos},
                           {"ator", "ate", pos},    {"alism", "al", pos},    {"iveness", "ive", pos},
                           {"fulness", "ful", pos}, {"ousness", "ous", pos}, {"aliti", "al", pos},
                           {"iviti", "ive", pos},   {"biliti", "ble", pos},  {"fulli", "ful", pos},
                           {"logi", "log", [word_minus3](std::string_view) { return positive_measure(word_minus3); }}});
}

std::string step3(const std::string& w) {
    const Condition pos = positive_measure;
    return apply_rules(w, {{"icate", "ic", pos},
                           {"ative", "", pos},
                           {"alize", "al", pos},
                           {"iciti", "ic", pos},
                           {"ical", "ic", pos},
                           {"ful", "", pos},
                           {"ness", "", pos}});
}

std::string step4(const std::string& w) {
    const Condition gt1 = [](std::string_view s) { return measure(s) > 1; };
    return apply_rules(
        w, {{"al", "", gt1},   {"ance", "", gt1}, {"ence", "", gt1}, {"er", "", gt1},    {"ic", "", gt1},
            {"able", "", gt1}, {"ible", "", gt1}, {"ant", "", gt1},  {"ement", "", gt1}, {"ment", "", gt1},
            {"ent", "", gt1},
            {"ion", "", [](std::string_view s) { return measure(s) > 1 && !s.empty() && (s.back() == 's' || s.back() == 't'); }},
            {"ou", "", gt1},   {"ism", "", gt1},  {"ate", "", gt1},  {"iti", "", gt1},   {"ous", "", gt1},
            {"ive", "", gt1},  {"ize", "", gt1}});
}

std::string step5a(const std::string& w) {
    if (ends_with(w, "e")) {
        const auto stem = w.substr(0, w.size() - 1);
        const auto m = measure(stem);
        if (m > 1 || (m == 1 && !ends_cvc(stem))) {
            return stem;
        }
    }
    return w;
}

std::string step5b(const std::string& w) {
    const auto head = std::string_view(w).substr(0, w.empty() ? 0 : w.size() - 1);
    return apply_rules(w, {{"ll", "l", [head](std::string_view) { return measure(head) > 1; }}});
}

const std::map<std::string, std::string, std::less<>>& irregular_forms() {
    static const std::map<std::string, std::string, std::less<>> pool = [] {
        const std::vector<std::pair<std::string, std::vector<std::string>>> forms = {
            {"sky", {"sky", "skies"}},         {"die", {"dying"}},
            {"lie", {"lying"}},                {"tie", {"tying"}},
            {"news", {"news"}},                {"inning", {"innings", "inning"}},
            {"outing", {"outings", "outing"}}, {"canning", {"cannings", "canning"}},
            {"howe", {"howe"}},                {"proceed", {"proceed"}},
            {"exceed", {"exceed"}},            {"succeed", {"succeed"}},
        };
        std::map<std::string, std::string, std::less<>> m;
        for (const auto& [stem, variants] : forms) {
            for (const auto& v : variants) {
                m[v] = stem;
            }
        }
        return m;
    }();
    return pool;
}

} // namespace

std::string porter_stem(std::string_view word) {
    if (const auto it = irregular_forms().find(word); it != irregular_forms().end()) {
        return it->second;
    }
    if (word.size() <= 2) {
        return std::string(word);
    }
    auto w = step1a(std::string(word));
    w = step1b(w);
    w = step1c(w);
    w = step2(w);
    w = step3(w);
    w = step4(w);
    w = step5a(w);
    return step5b(w);
}

} // namespace authorrag
