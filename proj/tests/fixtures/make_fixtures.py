# SPDX-License-Identifier: Apache-2.0
# Copyright 2026 The authorrag Authors
"""Freezes reference outputs of the Python tools the C++ code must agree with.

Needs textblob, nltk, rouge_score and scipy. Writes tests/data/fixtures/*.json;
the unit tests only read those files.
"""

import json
import pathlib
import random

import numpy as np
from nltk.stem.porter import PorterStemmer
from rouge_score import rouge_scorer
from scipy import stats
from textblob._text import find_tags, find_tokens
from textblob.en import lexicon
from textblob.en.sentiments import PatternAnalyzer

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "fixtures"

SENTENCES = [
    "The new council in Boston quietly changed how James Chen thinks about the schools.",
    "I really love this amazing phone!",
    "This is not a good movie at all.",
    "The weather is terrible and the traffic was awful today.",
    "What a wonderful surprise :)",
    "Scientists discover a huge glacier melting faster than expected",
    "Apple Unveils New iPhone With Faster Chip And Better Camera",
    "He said the results were very disappointing, but the team stays hopeful.",
    "Our approach improves retrieval for long documents in low-resource settings.",
    "The quick brown fox jumps over the lazy dog.",
    "Mayor Maria Lopez announced a $3.5 million budget for the parks on Monday.",
    "Honestly, I am so tired of these endless meetings!!!",
    "A simple, effective and surprisingly robust baseline for neural summarization",
    "It was the best of times, it was the worst of times.",
    "Never again will I eat at that sad little restaurant.",
    "Stocks fell sharply in New York as investors worried about inflation.",
    "The vaccine study shows modest benefits for older patients.",
    "We propose a novel graph neural network for molecular property prediction.",
    "Wow, what an incredibly beautiful sunset over the ocean tonight",
    "The committee will meet again next week to discuss the proposal.",
]

PORTER_EXTRA = [
    "caresses", "ponies", "ties", "caress", "cats", "feed", "agreed", "plastered", "bled", "motoring",
    "sing", "conflated", "troubled", "sized", "hopping", "tanned", "falling", "hissing", "fizzed", "failing",
    "filing", "happy", "sky", "relational", "conditional", "rational", "valenci", "hesitanci", "digitizer",
    "conformabli", "radicalli", "differentli", "vileli", "analogousli", "vietnamization", "predication",
    "operator", "feudalism", "decisiveness", "hopefulness", "callousness", "formaliti", "sensitiviti",
    "sensibiliti", "triplicate", "formative", "formalize", "electriciti", "electrical", "hopeful", "goodness",
    "revival", "allowance", "inference", "airliner", "gyroscopic", "adjustable", "defensible", "irritant",
    "replacement", "adjustment", "dependent", "adoption", "homologou", "communism", "activate", "angulariti",
    "homologous", "effective", "bowdlerize", "probate", "rate", "cease", "controll", "roll", "generously",
    "dying", "lying", "tying", "news", "innings", "outing", "canning", "howe", "proceed", "exceed", "succeed",
    "skies", "dies", "flies", "spied", "died", "cried", "generalization", "oscillators", "knightly",
    "abundantly", "analogically", "fully", "logically", "generically", "apology", "archaeology", "biology",
    "running", "universities", "corpora", "corpus", "personalization", "embeddings", "retrieval", "authors",
    "writing", "headlines", "summarization", "beautifully", "sadly", "tweeting", "happiness", "was", "is",
    "mr", "a", "at", "abc", "size", "sizes", "agreement", "nationally", "capabilities", "isolated",
]


def sentiment():
    pa = PatternAnalyzer()
    return [{"text": s, "polarity": pa.analyze(s)[0], "subjectivity": pa.analyze(s)[1]} for s in SENTENCES]


def tags():
    lexicon.load()
    out = []
    for s in SENTENCES:
        sents = []
        for sent in find_tokens(s):
            toks = sent.split(" ")
            tagged = find_tags(toks, lexicon=lexicon, morphology=lexicon.morphology, context=lexicon.context,
                               entities=lexicon.entities, language="en")
            sents.append([[w, t] for w, t in tagged])
        out.append({"text": s, "sentences": sents})
    return out


def porter():
    stemmer = PorterStemmer(mode=PorterStemmer.NLTK_EXTENSIONS)
    words = set(PORTER_EXTRA)
    for s in SENTENCES:
        words.update(w for w in "".join(c if c.isalpha() else " " for c in s.lower()).split())
    rng = random.Random(7)
    letters = "abcdefghijklmnopqrstuvwxyz"
    suffixes = ["ing", "ed", "s", "es", "ies", "ly", "ness", "ful", "ation", "ational", "izer", "ement", "ous", "ive"]
    for _ in range(300):
        stem = "".join(rng.choice(letters) for _ in range(rng.randint(2, 7)))
        words.add(stem + rng.choice(suffixes))
    return [{"word": w, "stem": stemmer.stem(w)} for w in sorted(words)]


def rouge():
    scorer = rouge_scorer.RougeScorer(["rouge1", "rougeL"], use_stemmer=True)
    pairs = [
        ("the cat sat on the mat", "the cat was sitting on the mat"),
        ("Running runners run", "A runner was running"),
        ("", "some reference text"),
        ("New iPhone unveiled!", "Apple Unveils New iPhone With Faster Chip"),
        ("İstanbul KELVIN K", "istanbul kelvin k"),
        ("numbers 2024 and 3.5 million", "3 5 million numbers in 2024"),
        ("café naïve résumé", "cafe naive resume"),
        ("Generate a headline for the", "Bold council quietly reshapes transit in Boston"),
        ("a a a b b", "a b a b a b"),
        ("The studies were generalized", "the study generalizes"),
    ]
    rng = random.Random(11)
    vocab = [w for s in SENTENCES for w in s.split()]
    for _ in range(40):
        p = " ".join(rng.choice(vocab) for _ in range(rng.randint(1, 12)))
        r = " ".join(rng.choice(vocab) for _ in range(rng.randint(1, 12)))
        pairs.append((p, r))
    out = []
    for p, r in pairs:
        s = scorer.score(r, p)
        out.append({"prediction": p, "reference": r, "rouge1": s["rouge1"].fmeasure, "rougeL": s["rougeL"].fmeasure})
    return out


def ttest():
    rng = np.random.default_rng(5)
    out = []
    a = [1.0, 2.0, 3.0, 4.0]
    b = [0.0, 0.0, 0.0, 0.0]
    cases = [(a, b)]
    for i in range(49):
        n = int(rng.integers(2, 60))
        x = rng.normal(0.3, 0.2, n)
        y = x + rng.normal(float(rng.normal(0, 0.05)), 0.1 + 0.01 * i, n)
        cases.append((list(map(float, x)), list(map(float, y))))
    for x, y in cases:
        r = stats.ttest_rel(x, y)
        out.append({"a": x, "b": y, "t": float(r.statistic), "p": float(r.pvalue), "df": len(x) - 1})
    return out


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, fn in (("sentiment", sentiment), ("tags", tags), ("porter", porter), ("rouge", rouge),
                     ("ttest", ttest)):
        (OUT / f"{name}.json").write_text(json.dumps(fn(), indent=1, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
