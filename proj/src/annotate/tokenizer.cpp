// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#include "authorrag/annotate.hpp"
#include "authorrag/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

namespace authorrag {
namespace {

constexpr std::string_view kPunctuation = ",;:!?()[]{}`'\"@#$^&*+-|=~_";
constexpr std::string_view kEos = "END-OF-SENTENCE";

constexpr std::array<std::string_view, 7> kContractions = {"'d", "'m", "'s", "'ll", "'re", "'ve", "n't"};

const std::set<std::string, std::less<>>& abbreviations() {
    static const std::set<std::string, std::less<>> set = {
        "a.",   "adj.", "adv.", "al.",  "a.m.", "c.",    "cf.",  "comp.", "conf.", "def.",  "ed.",
        "e.g.", "esp.", "etc.", "ex.",  "f.",   "fig.",  "gen.", "id.",   "i.e.",  "int.",  "l.",
        "m.",   "Med.", "Mil.", "Mr.",  "n.",   "n.q.",  "orig.", "pl.",  "pred.", "pres.", "p.m.",
        "ref.", "v.",   "vs.",  "w/"};
    return set;
}

const std::vector<std::string>& emoticons() {
    static const std::vector<std::string> list = {
        "<3",   "♥", ">:D", ":-D", ":D",  "=-D", "=D",  "X-D", "x-D", "XD",  "xD",   "8-D",
        ">:P",  ":-P",    ":P",  ":-p", ":p",  ":-b", ":b",  ":c)", ":o)", ":^)", ">:)", ":-)",
        ":)",   "=)",     "=]",  ":]",  ":}",  ":>",  ":3",  "8)",  "8-)", ">;]", ";-)", ";)",
        ";-]",  ";]",     ";D",  ";^)", "*-)", "*)",  ">:o", ":-O", ":O",  ":o",  ":-o", "o_O",
        "o.O",  "°O°", "°o°", ">:/", ":-/", ":/", ":\\", ">:\\", ":-.", ":-s", ":s",
        ":S",   ":-S",    ">.>", ">:[", ":-(", ":(",  "=(",  ":-[", ":[",  ":{",  ":-<", ":c",
        ":-c",  "=/",     ":'(", ":'''(", ";'("};
    return list;
}

bool is_punct(char c) { return kPunctuation.find(c) != std::string_view::npos; }

bool is_contraction(std::string_view t) {
    return std::find(kContractions.begin(), kContractions.end(), t) != kContractions.end();
}

bool is_letter(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

bool is_abbreviation(std::string_view t) {
    if (abbreviations().count(t) > 0) {
        return true;
    }
    // Single letter ("T."), or alternating letters and periods ("U.S.").
    if (t.size() >= 2 && t.size() % 2 == 0) {
        bool alternating = true;
        for (std::size_t i = 0; i < t.size(); i += 2) {
            if (!is_letter(t[i]) || t[i + 1] != '.') {
                alternating = false;
                break;
            }
        }
        if (alternating) {
            return true;
        }
    }
    // Capital followed by consonants ("Mr.", "Dr.", "Jr."); the last char is any.
    if (t.size() >= 3 && std::isupper(static_cast<unsigned char>(t[0])) != 0) {
        constexpr std::string_view consonants = "bcdfghjklmnpqrstvwxz";
        bool ok = true;
        for (std::size_t i = 1; i + 1 < t.size(); ++i) {
            if (consonants.find(t[i]) == std::string_view::npos) {
                ok = false;
                break;
            }
        }
        if (ok) {
            return true;
        }
    }
    return false;
}

// Separates contractions ("isn't" -> "is n't", "John's" -> "John 's"), spaces
// out quote marks, and turns blank lines into sentence breaks.
std::string normalize(std::string_view input) {
    std::string s;
    s.reserve(input.size() + input.size() / 4);
    // Curly apostrophe between letters is an apostrophe, not a quote.
    for (std::size_t i = 0; i < input.size(); ++i) {
        if (input.compare(i, 3, "’") == 0 && i > 0 && i + 3 < input.size() && is_letter(input[i - 1]) &&
            is_letter(input[i + 3])) {
            s += '\'';
            i += 2;
        } else {
            s += input[i];
        }
    }
    for (auto c : kContractions) {
        s = text::replace_all(std::move(s), c, " " + std::string(c));
    }
    std::string out;
    out.reserve(s.size() + 16);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (c == '\'') {
            const auto rest = std::string_view(s).substr(i);
            bool contraction = i > 0 && s[i - 1] == 'n' && text::starts_with(rest, "'t");
            for (auto k : kContractions) {
                if (k[0] == '\'' && text::starts_with(rest, k) && (i == 0 || s[i - 1] == ' ')) {
                    contraction = true;
                }
            }
            if (contraction) {
                out += c;
            } else {
                out += " ' ";
            }
        } else if (c == '"') {
            out += " \" ";
        } else if (std::string_view(s).compare(i, 3, "“") == 0 || std::string_view(s).compare(i, 3, "”") == 0 ||
                   std::string_view(s).compare(i, 3, "‘") == 0 || std::string_view(s).compare(i, 3, "’") == 0) {
            out += ' ';
            out.append(s, i, 3);
            out += ' ';
            i += 2;
        } else {
            out += c;
        }
    }
    // Blank line (two or more newlines, CRLF folded) ends a sentence.
    std::string result;
    result.reserve(out.size());
    for (std::size_t i = 0; i < out.size();) {
        if (out[i] == '\n' || (out[i] == '\r' && i + 1 < out.size() && out[i + 1] == '\n')) {
            std::size_t j = i;
            int newlines = 0;
            while (j < out.size()) {
                if (out[j] == '\n') {
                    ++newlines;
                    ++j;
                } else if (out[j] == '\r' && j + 1 < out.size() && out[j + 1] == '\n') {
                    ++newlines;
                    j += 2;
                } else {
                    break;
                }
            }
            if (newlines >= 2) {
                result += " ";
                result += kEos;
                result += " ";
            } else {
                result += '\n';
            }
            i = j;
        } else {
            result += out[i++];
        }
    }
    return result;
}

std::vector<std::string> split_tokens(const std::string& s) {
    std::vector<std::string> tokens;
    for (auto t : text::split_whitespace(s)) {
        std::vector<std::string> tail;
        while (!t.empty() && is_punct(t.front()) && !is_contraction(t)) {
            tokens.emplace_back(1, t.front());
            t.erase(0, 1);
        }
        while (!t.empty() && (is_punct(t.back()) || t.back() == '.') && !is_contraction(t)) {
            if (is_punct(t.back())) {
                tail.emplace_back(1, t.back());
                t.pop_back();
            }
            if (text::ends_with(t, "...")) {
                tail.emplace_back("...");
                t.resize(t.size() - 3);
                while (!t.empty() && t.back() == '.') {
                    t.pop_back();
                }
            }
            if (text::ends_with(t, ".")) {
                if (is_abbreviation(t)) {
                    break;
                }
                tail.emplace_back(".");
                t.pop_back();
            }
        }
        if (!t.empty()) {
            tokens.push_back(std::move(t));
        }
        tokens.insert(tokens.end(), tail.rbegin(), tail.rend());
    }
    return tokens;
}

bool is_boundary(std::string_view t) { return t == "..." || t == "." || t == "!" || t == "?" || t == kEos; }

bool is_trailer(std::string_view t) {
    return t == "'" || t == "\"" || t == "”" || t == "’" || t == "..." || t == "." || t == "!" || t == "?" ||
           t == ")" || t == kEos;
}

std::vector<std::vector<std::string>> split_sentences(const std::vector<std::string>& tokens) {
    std::vector<std::vector<std::string>> sentences(1);
    std::size_t i = 0;
    std::size_t j = 0;
    while (j < tokens.size()) {
        if (is_boundary(tokens[j])) {
            while (j < tokens.size() && is_trailer(tokens[j])) {
                if (tokens[j] == "'" || tokens[j] == "\"") {
                    const auto n = std::count(sentences.back().begin(), sentences.back().end(), tokens[j]);
                    if (n % 2 == 0) {
                        break;
                    }
                }
                ++j;
            }
            for (std::size_t k = i; k < j; ++k) {
                if (tokens[k] != kEos) {
                    sentences.back().push_back(tokens[k]);
                }
            }
            sentences.emplace_back();
            i = j;
        }
        ++j;
    }
    for (std::size_t k = i; k < std::min(j, tokens.size()); ++k) {
        sentences.back().push_back(tokens[k]);
    }
    std::vector<std::vector<std::string>> out;
    for (auto& s : sentences) {
        if (!s.empty()) {
            out.push_back(std::move(s));
        }
    }
    return out;
}

// Re-joins "( ! )" and emoticons that the punctuation splitter took apart,
// preferring the longest match.
std::vector<std::string> merge_symbols(const std::vector<std::string>& sentence) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < sentence.size();) {
        std::size_t best = 1;
        std::string merged = sentence[i];
        std::string concat = sentence[i];
        for (std::size_t m = 2; m <= 5 && i + m <= sentence.size(); ++m) {
            concat += sentence[i + m - 1];
            const auto& list = emoticons();
            if (concat == "(!)" || std::find(list.begin(), list.end(), concat) != list.end()) {
                best = m;
                merged = concat;
            }
        }
        out.push_back(std::move(merged));
        i += best;
    }
    return out;
}

} // namespace

std::vector<std::vector<std::string>> tokenize_sentences(std::string_view input) {
    const auto tokens = split_tokens(normalize(input));
    auto sentences = split_sentences(tokens);
    for (auto& s : sentences) {
        s = merge_symbols(s);
    }
    return sentences;
}

} // namespace authorrag
