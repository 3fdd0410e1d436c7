# SPDX-License-Identifier: Apache-2.0
# Copyright 2026 The authorrag Authors
"""Writes small synthetic LaMP-4/5/7 style datasets to data/sample/.

The text is generated from templates, so it exercises the pipeline but says
nothing about real model quality.
"""

import json
import pathlib
import random

TOPICS = {
    "city": ["council", "budget", "housing", "transit", "parks", "schools", "zoning", "library"],
    "sports": ["coach", "season", "playoffs", "striker", "stadium", "injury", "rookie", "final"],
    "tech": ["startup", "chip", "software", "privacy", "cloud", "robot", "battery", "network"],
    "health": ["clinic", "vaccine", "nurses", "diet", "sleep", "hospital", "study", "therapy"],
    "science": ["telescope", "fossil", "climate", "genome", "ocean", "volcano", "particle", "glacier"],
}

STYLES = [
    {"adv": ["quietly", "suddenly", "finally"], "adj": ["bold", "new"], "punct": "."},
    {"adv": ["really", "truly"], "adj": ["amazing", "wonderful", "great"], "punct": "!"},
    {"adv": ["sharply", "badly"], "adj": ["grim", "costly", "troubled"], "punct": "."},
    {"adv": ["carefully"], "adj": ["modest", "careful", "steady"], "punct": "."},
    {"adv": ["boldly", "quickly"], "adj": ["fresh", "surprising"], "punct": "?"},
]

PLACES = ["Boston", "Denver", "Chicago", "Seattle", "Austin", "Portland", "Atlanta", "Phoenix"]
PEOPLE = ["Maria Lopez", "James Chen", "Aisha Khan", "Tom Becker", "Nina Petrova", "Sam Okafor"]


def sentence(rng, topic, style):
    w = rng.sample(TOPICS[topic], 2)
    return (
        f"The {rng.choice(style['adj'])} {w[0]} in {rng.choice(PLACES)} {rng.choice(style['adv'])} "
        f"changed how {rng.choice(PEOPLE)} thinks about the {w[1]}{style['punct']}"
    )


def title(rng, topic, style):
    w = rng.sample(TOPICS[topic], 2)
    return f"{rng.choice(style['adj']).capitalize()} {w[0]} {rng.choice(style['adv'])} reshapes {w[1]} in {rng.choice(PLACES)}"


def body(rng, topic, style, n):
    return " ".join(sentence(rng, topic, style) for _ in range(n))


def build(task, rng, n_instances=10, base_id=0):
    questions, golds = [], []
    topics = list(TOPICS)
    for i in range(n_instances):
        qid = str(base_id + i)
        topic = topics[i % len(topics)]
        style = STYLES[(i * 3) % len(STYLES)]
        profile = []
        for p in range(rng.randint(8, 14)):
            doc_topic = topic if rng.random() < 0.7 else rng.choice(topics)
            doc = {"id": f"{qid}{p:02d}"}
            if task == "LaMP_4":
                doc["text"] = body(rng, doc_topic, style, 3)
                doc["title"] = title(rng, doc_topic, style)
            elif task == "LaMP_5":
                doc["abstract"] = body(rng, doc_topic, style, 4)
                doc["title"] = title(rng, doc_topic, style)
            else:
                doc["text"] = sentence(rng, doc_topic, style)
            profile.append(doc)
        if task == "LaMP_4":
            query = "Generate a headline for the following article: " + body(rng, topic, style, 3)
            gold = title(rng, topic, style)
        elif task == "LaMP_5":
            query = "Generate a title for the following abstract of a paper: " + body(rng, topic, style, 4)
            gold = title(rng, topic, style)
        else:
            gold = sentence(rng, topic, style)
            query = "Paraphrase the following tweet without any explanation before or after it: " + sentence(
                rng, topic, STYLES[(i * 3 + 1) % len(STYLES)]
            )
        questions.append({"id": qid, "input": query, "profile": profile})
        golds.append({"id": qid, "output": gold})
    return questions, {"task": task, "golds": golds}


def main():
    root = pathlib.Path(__file__).resolve().parent.parent / "data" / "sample"
    for task, base in (("LaMP_4", 400), ("LaMP_5", 500), ("LaMP_7", 700)):
        rng = random.Random(base)
        questions, outputs = build(task, rng, base_id=base)
        out = root / task
        out.mkdir(parents=True, exist_ok=True)
        (out / "dev_questions.json").write_text(json.dumps(questions, indent=1) + "\n")
        (out / "dev_outputs.json").write_text(json.dumps(outputs, indent=1) + "\n")


if __name__ == "__main__":
    main()
