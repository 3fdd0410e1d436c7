// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#include "authorrag/annotate.hpp"
#include "authorrag/text.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace authorrag {
namespace {

using WordSet = std::set<std::string, std::less<>>;

const WordSet& date_words() {
    static const WordSet s = {"january", "february", "march",    "april",   "may",      "june",   "july",
                              "august",  "september", "october", "november", "december", "jan.",  "feb.",
                              "mar.",    "apr.",      "jun.",    "jul.",     "aug.",     "sep.",  "sept.",
                              "oct.",    "nov.",      "dec.",    "monday",   "tuesday",  "wednesday",
                              "thursday", "friday",   "saturday", "sunday",  "today",    "yesterday", "tomorrow"};
    return s;
}

const WordSet& person_titles() {
    static const WordSet s = {"mr.",      "mrs.",  "ms.",   "dr.",    "prof.",  "mr",      "mrs",   "ms",
                              "dr",       "president", "senator", "sen.", "rep.", "gov.",  "governor", "judge",
                              "sir",      "lady",  "lord",  "king",   "queen",  "pope",    "minister", "chancellor",
                              "secretary", "general", "gen.", "coach", "justice", "mayor", "prince", "princess"};
    return s;
}

const WordSet& org_suffixes() {
    static const WordSet s = {"inc",     "inc.",        "corp",      "corp.",     "corporation", "co",        "co.",
                              "ltd",     "ltd.",        "llc",       "plc",       "group",       "company",   "bank",
                              "university", "college",  "institute", "association", "party",     "committee", "council",
                              "department", "ministry", "agency",    "foundation", "club",       "fc",        "times",
                              "post",    "news",        "journal",   "airlines",  "motors",      "technologies",
                              "systems", "labs",        "school",    "court",     "congress",    "senate",    "house",
                              "administration", "commission", "board", "federation", "union",    "league"};
    return s;
}

const WordSet& location_prepositions() {
    static const WordSet s = {"in", "at", "from", "to", "near", "across", "throughout"};
    return s;
}

bool is_year(std::string_view w) {
    if (w.size() != 4 || !std::all_of(w.begin(), w.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; })) {
        return false;
    }
    const int y = std::stoi(std::string(w));
    return y >= 1800 && y <= 2099;
}

bool is_day_number(std::string_view w) {
    if (w.empty() || w.size() > 2 || !std::all_of(w.begin(), w.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; })) {
        return false;
    }
    const int d = std::stoi(std::string(w));
    return d >= 1 && d <= 31;
}

bool is_proper(const Token& t) { return t.pos == Pos::PROPN || text::starts_with(t.tag, "NNP"); }

bool is_acronym(std::string_view w) {
    return w.size() >= 2 && w.size() <= 5 &&
           std::all_of(w.begin(), w.end(), [](char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; });
}

bool is_capitalized(std::string_view w) { return !w.empty() && std::isupper(static_cast<unsigned char>(w[0])) != 0; }

std::string join_surface(const std::vector<Token>& tokens, std::size_t b, std::size_t e) {
    std::string s;
    for (std::size_t i = b; i < e; ++i) {
        if (i > b) s += ' ';
        s += tokens[i].surface;
    }
    return s;
}

std::string label_for(const std::vector<Token>& tokens, std::size_t b, std::size_t e, std::size_t sentence_begin) {
    for (std::size_t i = b; i < e; ++i) {
        const auto& tag = tokens[i].tag;
        if (text::ends_with(tag, "-PERS")) return "PERSON";
        if (text::ends_with(tag, "-LOC")) return "GPE";
        if (text::ends_with(tag, "-ORG")) return "ORG";
    }
    const std::string last = text::to_lower_ascii(tokens[e - 1].surface);
    if (org_suffixes().count(last) > 0) return "ORG";
    for (std::size_t i = b; i < e; ++i) {
        if (tokens[i].surface == "of" || tokens[i].surface == "&") return "ORG";
    }
    if (e - b == 1 && is_acronym(tokens[b].surface)) return "ORG";
    if (b > sentence_begin) {
        const std::string prev = text::to_lower_ascii(tokens[b - 1].surface);
        if (person_titles().count(prev) > 0) return "PERSON";
        if (e - b == 1 && location_prepositions().count(prev) > 0) return "GPE";
    }
    if (e - b >= 2 && e - b <= 3) {
        bool names = true;
        for (std::size_t i = b; i < e; ++i) {
            const auto& w = tokens[i].surface;
            if (!is_capitalized(w) || is_acronym(w) || !tokens[i].is_alpha) {
                names = false;
            }
        }
        if (names) return "PERSON";
    }
    return "MISC";
}

} // namespace

std::vector<EntityMention> find_entities(const std::vector<Token>& tokens, SentenceSpan sentence) {
    std::vector<EntityMention> out;
    std::size_t i = sentence.begin;
    while (i < sentence.end) {
        const std::string lower = text::to_lower_ascii(tokens[i].surface);
        const bool month_or_day = date_words().count(lower) > 0 &&
                                  (lower == "today" || lower == "yesterday" || lower == "tomorrow" ||
                                   is_capitalized(tokens[i].surface)) &&
                                  !(lower == "may" && tokens[i].tag == "MD") &&
                                  !(lower == "march" && tokens[i].pos == Pos::VERB);
        if (month_or_day) {
            std::size_t b = i;
            std::size_t e = i + 1;
            if (b > sentence.begin && is_day_number(tokens[b - 1].surface)) {
                --b;
            }
            if (e < sentence.end && (is_day_number(tokens[e].surface) || is_year(tokens[e].surface))) {
                ++e;
            }
            if (e + 1 < sentence.end && tokens[e].surface == "," && is_year(tokens[e + 1].surface)) {
                e += 2;
            } else if (e < sentence.end && is_year(tokens[e].surface)) {
                ++e;
            }
            out.push_back({join_surface(tokens, b, e), "DATE"});
            i = e;
            continue;
        }
        if (tokens[i].pos == Pos::NUM && is_year(tokens[i].surface)) {
            out.push_back({tokens[i].surface, "DATE"});
            ++i;
            continue;
        }
        const auto& surface = tokens[i].surface;
        if (!is_proper(tokens[i]) ||
            std::none_of(surface.begin(), surface.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; })) {
            ++i;
            continue;
        }
        // Leading honorifics belong to the context, not the name.
        if (person_titles().count(lower) > 0 && i + 1 < sentence.end && is_proper(tokens[i + 1])) {
            ++i;
            continue;
        }
        std::size_t e = i + 1;
        while (e < sentence.end) {
            if (is_proper(tokens[e]) && date_words().count(text::to_lower_ascii(tokens[e].surface)) == 0) {
                ++e;
            } else if ((tokens[e].surface == "of" || tokens[e].surface == "&") && e + 1 < sentence.end &&
                       is_proper(tokens[e + 1])) {
                e += 2;
            } else {
                break;
            }
        }
        out.push_back({join_surface(tokens, i, e), label_for(tokens, i, e, sentence.begin)});
        i = e;
    }
    return out;
}

} // namespace authorrag
