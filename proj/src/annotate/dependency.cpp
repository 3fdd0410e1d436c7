// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

// Rule-based dependency analysis: noun-phrase chunks, verb groups and clause
// attachment produce one projective-ish tree per sentence with ClearNLP-style
// relation labels.

#include "authorrag/annotate.hpp"
#include "authorrag/text.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace authorrag {
namespace {

constexpr int kNone = -1;

struct Chunk {
    int begin = 0;
    int end = 0; // exclusive
    int head = 0;
    bool possessor = false; // followed by 's and attached to the next chunk
};

class SentenceParser {
  public:
    SentenceParser(const std::vector<Token>& tokens, SentenceSpan span)
        : tok_(tokens), base_(static_cast<int>(span.begin)), n_(static_cast<int>(span.end - span.begin)),
          head_(static_cast<std::size_t>(n_), kNone), rel_(static_cast<std::size_t>(n_)),
          is_pred_(static_cast<std::size_t>(n_), false), has_aux_(static_cast<std::size_t>(n_), false), chunk_of_(static_cast<std::size_t>(n_), kNone) {}

    std::vector<DependencyArc> parse() {
        if (n_ <= 1) {
            return {};
        }
        attach_auxiliaries();
        build_chunks();
        classify_predicates();
        choose_root();
        attach_chunks();
        attach_predicates();
        attach_function_words();
        attach_leftovers();
        break_cycles();
        std::vector<DependencyArc> arcs;
        for (int i = 0; i < n_; ++i) {
            if (i == root_) {
                continue;
            }
            arcs.push_back({static_cast<std::size_t>(base_ + i), static_cast<std::size_t>(base_ + head_[i]), rel_[i]});
        }
        return arcs;
    }

  private:
    const Token& t(int i) const { return tok_[static_cast<std::size_t>(base_ + i)]; }
    Pos pos(int i) const { return t(i).pos; }
    std::string lower(int i) const { return text::to_lower_ascii(t(i).surface); }
    bool attached(int i) const { return head_[i] != kNone || i == root_; }

    void set(int child, int head, std::string relation) {
        if (child == head || child == root_) {
            return;
        }
        head_[child] = head;
        rel_[child] = std::move(relation);
    }

    bool is_to(int i) const { return t(i).tag == "TO" || (pos(i) == Pos::PART && lower(i) == "to"); }
    bool is_negation(int i) const {
        const auto w = lower(i);
        return (pos(i) == Pos::PART && (w == "not" || w == "n't")) || w == "never";
    }
    bool is_possessive_marker(int i) const { return t(i).tag == "POS"; }
    bool is_personal_pronoun(int i) const {
        return pos(i) == Pos::PRON && t(i).tag != "PRP$" && t(i).tag != "WP$";
    }
    bool is_relative_pronoun(int i) const {
        const auto& tag = t(i).tag;
        return tag == "WDT" || tag == "WP" || tag == "WP$";
    }
    bool is_clause_break(int i) const {
        if (pos(i) == Pos::CCONJ || pos(i) == Pos::SCONJ || is_relative_pronoun(i)) {
            return true;
        }
        const auto& w = t(i).surface;
        return pos(i) == Pos::PUNCT && (w == "," || w == ";" || w == ":" || w == "--" || w == "(" || w == ")");
    }
    bool is_nominal(int i) const {
        return pos(i) == Pos::NOUN || pos(i) == Pos::PROPN || pos(i) == Pos::PRON || pos(i) == Pos::NUM;
    }

    // Auxiliaries (and infinitival "to") attach to the verb they introduce.
    void attach_auxiliaries() {
        for (int i = 0; i < n_; ++i) {
            const bool aux_like = pos(i) == Pos::AUX;
            if (!aux_like && !is_to(i)) {
                continue;
            }
            for (int j = i + 1; j < n_ && j <= i + 4; ++j) {
                if (pos(j) == Pos::VERB) {
                    if (is_to(i) && t(j).tag != "VB") {
                        break;
                    }
                    const bool passive = aux_like && t(i).lemma == "be" && t(j).tag == "VBN";
                    set(i, j, is_to(i) ? "aux" : (passive ? "auxpass" : "aux"));
                    has_aux_[j] = true;
                    if (is_to(i)) {
                        has_to_.push_back(j);
                    }
                    if (passive) {
                        passive_.push_back(j);
                    }
                    break;
                }
                const bool skippable = pos(j) == Pos::ADV || pos(j) == Pos::AUX || is_negation(j) ||
                                       (aux_like && is_personal_pronoun(j));
                if (!skippable) {
                    break;
                }
            }
        }
        for (int i = 0; i < n_; ++i) {
            is_pred_[i] = pos(i) == Pos::VERB || (pos(i) == Pos::AUX && head_[i] == kNone);
        }
    }

    bool chunkable(int i, const std::optional<Chunk>& open) const {
        switch (pos(i)) {
        case Pos::DET:
        case Pos::NUM:
        case Pos::ADJ:
        case Pos::NOUN:
        case Pos::PROPN:
            return true;
        case Pos::PRON:
            return t(i).tag == "PRP$" || t(i).tag == "WP$" || !open.has_value();
        case Pos::SYM:
            return t(i).surface == "$" || t(i).surface == "#";
        case Pos::ADV:
            return i + 1 < n_ && pos(i + 1) == Pos::ADJ && i + 2 < n_ && (pos(i + 2) == Pos::NOUN || pos(i + 2) == Pos::PROPN);
        case Pos::VERB:
            // Participles used attributively: "the revised plan".
            return open.has_value() && (t(i).tag == "VBN" || t(i).tag == "VBG") && i + 1 < n_ &&
                   (pos(i + 1) == Pos::NOUN || pos(i + 1) == Pos::PROPN || pos(i + 1) == Pos::ADJ) && !has_aux_[i];
        default:
            return false;
        }
    }

    bool chunk_has_head_candidate(const Chunk& c) const {
        for (int i = c.begin; i < c.end; ++i) {
            if (pos(i) == Pos::NOUN || pos(i) == Pos::PROPN || pos(i) == Pos::NUM || is_personal_pronoun(i)) {
                return true;
            }
        }
        return false;
    }

    void close_chunk(std::optional<Chunk>& open) {
        if (!open.has_value()) {
            return;
        }
        Chunk c = *open;
        open.reset();
        int head = kNone;
        for (int i = c.begin; i < c.end; ++i) {
            if (pos(i) == Pos::NOUN || pos(i) == Pos::PROPN || pos(i) == Pos::NUM || is_personal_pronoun(i)) {
                head = i;
            }
        }
        if (head == kNone) {
            for (int i = c.begin; i < c.end; ++i) {
                if (pos(i) == Pos::ADJ) {
                    head = i;
                }
            }
        }
        if (head == kNone) {
            head = c.end - 1;
        }
        c.head = head;
        // Chunk tokens after a NUM head ("Room 5") keep the NUM as head.
        for (int i = c.begin; i < c.end; ++i) {
            chunk_of_[i] = static_cast<int>(chunks_.size());
            if (i == head) {
                continue;
            }
            is_pred_[i] = false;
            switch (pos(i)) {
            case Pos::DET: set(i, head, "det"); break;
            case Pos::NUM: set(i, head, "nummod"); break;
            case Pos::ADJ: set(i, head, "amod"); break;
            case Pos::VERB: set(i, head, "amod"); break;
            case Pos::NOUN:
            case Pos::PROPN: set(i, head, "compound"); break;
            case Pos::PRON: set(i, head, "poss"); break;
            case Pos::ADV: set(i, i + 1, "advmod"); break;
            case Pos::SYM: set(i, head, "nmod"); break;
            default: set(i, head, "dep"); break;
            }
        }
        is_pred_[head] = false;
        chunks_.push_back(c);
    }

    void build_chunks() {
        std::optional<Chunk> open;
        for (int i = 0; i < n_; ++i) {
            if (is_pred_[i] && !(pos(i) == Pos::VERB && chunkable(i, open))) {
                close_chunk(open);
                continue;
            }
            if (is_possessive_marker(i) && open.has_value()) {
                close_chunk(open);
                chunks_.back().possessor = true;
                set(i, chunks_.back().head, "case");
                continue;
            }
            if (!chunkable(i, open)) {
                close_chunk(open);
                continue;
            }
            const bool starts_new = open.has_value() &&
                                    (((pos(i) == Pos::DET || t(i).tag == "PRP$") && chunk_has_head_candidate(*open)) ||
                                     is_personal_pronoun(i) ||
                                     (open->end - 1 >= 0 && is_personal_pronoun(open->end - 1)));
            if (starts_new) {
                close_chunk(open);
            }
            if (!open.has_value()) {
                open = Chunk{i, i + 1, i, false};
            } else {
                open->end = i + 1;
            }
        }
        close_chunk(open);
        for (std::size_t k = 0; k + 1 < chunks_.size(); ++k) {
            const auto& c = chunks_[k];
            const auto& next = chunks_[k + 1];
            if (c.possessor && next.begin == c.end + 1) {
                set(c.head, next.head, "poss");
            }
        }
    }

    int nearest_pred(int from, int step) const {
        for (int i = from; i >= 0 && i < n_; i += step) {
            if (is_pred_[i]) {
                return i;
            }
        }
        return kNone;
    }

    // Start of the verb group: leftmost auxiliary/negation attached to p.
    int group_start(int p) const {
        int s = p;
        for (int i = p - 1; i >= 0; --i) {
            if (head_[i] == p && (rel_[i] == "aux" || rel_[i] == "auxpass")) {
                s = i;
            } else if (!(pos(i) == Pos::ADV || is_negation(i) || (pos(i) == Pos::PRON && s < p))) {
                break;
            }
        }
        return s;
    }

    void classify_predicates() {
        for (int p = 0; p < n_; ++p) {
            if (!is_pred_[p]) {
                continue;
            }
            const int start = group_start(p);
            if (std::find(has_to_.begin(), has_to_.end(), p) != has_to_.end()) {
                kind_[p] = "xcomp";
                continue;
            }
            if (!has_aux_[p] && (t(p).tag == "VBG" || t(p).tag == "VBN") && start > 0 && chunk_of_[start - 1] != kNone &&
                chunks_[chunk_of_[start - 1]].head == start - 1 && (pos(start - 1) == Pos::NOUN || pos(start - 1) == Pos::PROPN)) {
                kind_[p] = "acl";
                continue;
            }
            // Scan left over this clause's subject for a marker.
            const int prev_pred = nearest_pred(start - 1, -1);
            for (int i = start - 1; i > prev_pred; --i) {
                const auto w = lower(i);
                if (pos(i) == Pos::SCONJ || t(i).tag == "WRB" ||
                    (pos(i) == Pos::ADP && (w == "that" || w == "whether" || w == "if" || w == "because"))) {
                    kind_[p] = "mark";
                    mark_[p] = i;
                    break;
                }
                if (is_relative_pronoun(i) && i > 0 && chunk_of_[i - 1] != kNone) {
                    kind_[p] = "relcl";
                    mark_[p] = i;
                    break;
                }
                if (pos(i) == Pos::CCONJ && prev_pred != kNone) {
                    kind_[p] = "conj";
                    mark_[p] = i;
                    break;
                }
            }
        }
    }

    void choose_root() {
        select_root();
        head_[root_] = kNone;
        rel_[root_].clear();
    }

    void select_root() {
        for (int i = 0; i < n_; ++i) {
            if (is_pred_[i] && kind_.count(i) == 0) {
                root_ = i;
                return;
            }
        }
        for (int i = 0; i < n_; ++i) {
            if (is_pred_[i]) {
                root_ = i;
                return;
            }
        }
        if (!chunks_.empty()) {
            for (const auto& c : chunks_) {
                if (head_[c.head] == kNone) {
                    root_ = c.head;
                    return;
                }
            }
        }
        for (int i = 0; i < n_; ++i) {
            if (pos(i) != Pos::PUNCT && head_[i] == kNone) {
                root_ = i;
                return;
            }
        }
        root_ = 0;
    }

    bool has_dependent(int head, std::string_view relation) const {
        for (int i = 0; i < n_; ++i) {
            if (head_[i] == head && rel_[i] == relation) {
                return true;
            }
        }
        return false;
    }

    bool break_between(int a, int b) const {
        for (int i = a + 1; i < b; ++i) {
            if (chunk_of_[i] == kNone && is_clause_break(i)) {
                return true;
            }
        }
        return false;
    }

    bool is_passive(int p) const { return std::find(passive_.begin(), passive_.end(), p) != passive_.end(); }

    void attach_chunks() {
        for (std::size_t k = 0; k < chunks_.size(); ++k) {
            const auto& c = chunks_[k];
            const int h = c.head;
            if (attached(h)) {
                continue;
            }
            const int prev = c.begin - 1;
            if (prev >= 0 && (pos(prev) == Pos::ADP || (is_to(prev) && head_[prev] == kNone))) {
                set(h, prev, "pobj");
                continue;
            }
            if (prev >= 1 && k > 0 && chunks_[k - 1].end == prev) {
                const int left = chunks_[k - 1].head;
                const int next_pred = nearest_pred(c.end, 1);
                const bool subject_of_conjunct = next_pred != kNone && kind_.count(next_pred) > 0 &&
                                                 kind_.at(next_pred) == "conj" && mark_.at(next_pred) == prev;
                if (pos(prev) == Pos::CCONJ && !subject_of_conjunct) {
                    const int first = rel_[left] == "conj" ? head_[left] : left;
                    set(h, first, "conj");
                    set(prev, first, "cc");
                    continue;
                }
                if (t(prev).surface == ",") {
                    const bool list = c.end < n_ && (t(c.end).surface == "," || pos(c.end) == Pos::CCONJ);
                    const bool prev_is_conj = rel_[left] == "conj";
                    if (list || prev_is_conj) {
                        set(h, prev_is_conj ? head_[left] : left, "conj");
                        continue;
                    }
                    if (nearest_pred(c.end, 1) == kNone || break_between(c.end - 1, nearest_pred(c.end, 1))) {
                        set(h, left, "appos");
                        continue;
                    }
                }
            }
            const int left_pred = nearest_pred(c.begin - 1, -1);
            const int right_pred = nearest_pred(c.end, 1);
            const bool adjectival = pos(h) == Pos::ADJ;
            if (left_pred != kNone && !break_between(left_pred, c.begin)) {
                if (adjectival) {
                    set(h, left_pred, pos(left_pred) == Pos::AUX ? "acomp" : "oprd");
                } else if (pos(left_pred) == Pos::AUX) {
                    set(h, left_pred, "attr");
                } else {
                    for (int i = 0; i < n_; ++i) {
                        if (head_[i] == left_pred && rel_[i] == "dobj") {
                            rel_[i] = "dative";
                        }
                    }
                    set(h, left_pred, "dobj");
                }
                continue;
            }
            if (right_pred != kNone && !adjectival) {
                const std::string subj = is_passive(right_pred) ? "nsubjpass" : "nsubj";
                if (!has_dependent(right_pred, "nsubj") && !has_dependent(right_pred, "nsubjpass")) {
                    set(h, right_pred, subj);
                    continue;
                }
            }
            if (right_pred != kNone && adjectival) {
                set(h, right_pred, "advmod");
                continue;
            }
            if (h != root_) {
                set(h, root_, t(prev >= 0 ? prev : 0).surface == ":" ? "appos" : "dep");
            }
        }
    }

    void attach_predicates() {
        for (int p = 0; p < n_; ++p) {
            if (!is_pred_[p] || p == root_ || attached(p)) {
                continue;
            }
            const auto it = kind_.find(p);
            const std::string kind = it == kind_.end() ? "" : it->second;
            const int left = nearest_pred(p - 1, -1);
            if (kind == "acl") {
                set(p, group_start(p) - 1, "acl");
            } else if (kind == "relcl") {
                const int m = mark_[p];
                const int noun = chunks_[chunk_of_[m - 1]].head;
                set(p, noun, "relcl");
            } else if (kind == "xcomp") {
                if (left != kNone) {
                    set(p, left, "xcomp");
                } else {
                    int noun = kNone;
                    for (int i = group_start(p) - 1; i >= 0; --i) {
                        if (chunk_of_[i] != kNone) {
                            noun = chunks_[chunk_of_[i]].head;
                            break;
                        }
                    }
                    set(p, noun != kNone ? noun : root_, noun != kNone ? "acl" : "xcomp");
                }
            } else if (kind == "conj" && left != kNone) {
                const int first = rel_[left] == "conj" ? head_[left] : left;
                set(p, first, "conj");
                set(mark_[p], first, "cc");
            } else if (kind == "mark") {
                set(mark_[p], p, "mark");
                set(p, p < root_ ? root_ : (left != kNone ? left : root_), p < root_ ? "advcl" : (lower(mark_[p]) == "that" ? "ccomp" : "advcl"));
            } else {
                set(p, left != kNone ? left : root_, left != kNone ? "ccomp" : "advcl");
            }
        }
    }

    int nearest_content_left(int i) const {
        for (int j = i - 1; j >= 0; --j) {
            if (is_pred_[j] || (chunk_of_[j] != kNone && chunks_[chunk_of_[j]].head == j)) {
                return j;
            }
        }
        return kNone;
    }

    int nearest_pred_by_distance(int i) const {
        const int l = nearest_pred(i - 1, -1);
        const int r = nearest_pred(i + 1, 1);
        if (l == kNone) return r;
        if (r == kNone) return l;
        return (i - l) <= (r - i) ? l : r;
    }

    void attach_function_words() {
        for (int i = 0; i < n_; ++i) {
            if (attached(i)) {
                continue;
            }
            const auto w = lower(i);
            if (pos(i) == Pos::ADP || is_to(i)) {
                if (t(i).tag == "RP") {
                    const int l = nearest_pred(i - 1, -1);
                    set(i, l != kNone ? l : root_, "prt");
                    continue;
                }
                int target = nearest_content_left(i);
                if (target == kNone) {
                    target = nearest_pred(i + 1, 1);
                }
                if (target == kNone || target == i) {
                    target = root_;
                }
                set(i, target, w == "by" && is_passive(target) ? "agent" : "prep");
            } else if (is_negation(i)) {
                int target = nearest_pred(i + 1, 1);
                if (target == kNone || target > i + 3) {
                    target = nearest_pred(i - 1, -1);
                }
                set(i, target != kNone ? target : root_, "neg");
            } else if (pos(i) == Pos::ADV) {
                if (i + 1 < n_ && (pos(i + 1) == Pos::ADJ || pos(i + 1) == Pos::ADV)) {
                    set(i, i + 1, "advmod");
                    continue;
                }
                const int target = nearest_pred_by_distance(i);
                set(i, target != kNone ? target : root_, "advmod");
            } else if (pos(i) == Pos::SCONJ) {
                const int target = nearest_pred(i + 1, 1);
                set(i, target != kNone ? target : root_, target != kNone ? "mark" : "dep");
            } else if (pos(i) == Pos::CCONJ) {
                const int target = nearest_content_left(i);
                set(i, target != kNone ? target : root_, "cc");
            } else if (pos(i) == Pos::INTJ) {
                set(i, root_, "intj");
            } else if (pos(i) == Pos::PUNCT) {
                set(i, root_, "punct");
            } else if (pos(i) == Pos::PART && is_to(i)) {
                set(i, root_, "aux");
            }
        }
    }

    void attach_leftovers() {
        for (int i = 0; i < n_; ++i) {
            if (!attached(i)) {
                set(i, root_, "dep");
            }
        }
    }

    // Any token whose head chain does not reach the root is re-hung from it.
    void break_cycles() {
        for (int i = 0; i < n_; ++i) {
            if (i == root_) {
                continue;
            }
            int cur = i;
            int steps = 0;
            while (cur != root_ && cur != kNone && steps <= n_) {
                cur = head_[cur];
                ++steps;
            }
            if (cur != root_) {
                head_[i] = root_;
                rel_[i] = "dep";
            }
        }
    }

    const std::vector<Token>& tok_;
    int base_;
    int n_;
    std::vector<int> head_;
    std::vector<std::string> rel_;
    std::vector<bool> is_pred_;
    std::vector<bool> has_aux_;
    std::vector<int> chunk_of_;
    std::vector<Chunk> chunks_;
    std::vector<int> has_to_;
    std::vector<int> passive_;
    std::map<int, std::string> kind_;
    std::map<int, int> mark_;
    int root_ = kNone;
};

} // namespace

std::vector<DependencyArc> parse_dependencies(const std::vector<Token>& tokens, SentenceSpan sentence) {
    if (sentence.end <= sentence.begin || sentence.end > tokens.size()) {
        return {};
    }
    return SentenceParser(tokens, sentence).parse();
}

} // namespace authorrag
