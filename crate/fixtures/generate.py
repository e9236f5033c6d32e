#!/usr/bin/env python3
"""Regenerates the three-source pipeline fixture in this directory.

Deterministic: rerunning rewrites byte-identical files.
"""
import json
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent
SEED = 20240611

SCIENCE = """the cell membrane controls what enters and leaves the cell . researchers measured the
rate of diffusion across the membrane in several experiments . the results show that
temperature and pressure change the speed of the reaction . a careful study of the data
suggests that the model predicts the observed energy of the system . the experiment was
repeated with a larger sample and the measurements agree with the theory . scientists
describe the structure of the protein and the role of each molecule in the process""".split()

SPORTS = """the team won the match after a late goal in the second half . fans cheered as the
striker scored again and the coach praised the defense . the season ends next month and the
league title is still open . players trained hard during the week and the captain said the
squad is ready for the final . the referee stopped the game twice because of the rain and
the crowd waited in the stadium""".split()

SHOPPING = """the store offers a discount on shoes and jackets this weekend . customers can order
online and pick up the package at the counter . the new phone comes with a bigger screen and
a longer battery . prices dropped after the holiday sale and the shop added free delivery .
buyers compared the brands and chose the cheaper model with a good warranty""".split()

TOPICS = {
    "science": (SCIENCE, "Science", "Explanatory Article"),
    "sports": (SPORTS, "Sports", "News"),
    "shopping": (SHOPPING, "Shopping", "Reviews"),
}

GIBBERISH = "qzv xkpl wrrt zzqa plok mnbv trew qaws edrf ghyt lkjh poiu ytre bvcx".split()


def sentence(rng, vocab, n):
    words = [rng.choice(vocab) for _ in range(n)]
    words = [w for w in words if w != "."] or ["the"]
    return " ".join(words).capitalize() + "."


def paragraph(rng, vocab, words):
    out, count = [], 0
    while count < words:
        n = rng.randint(8, 16)
        out.append(sentence(rng, vocab, n))
        count += n
    return " ".join(out)


def document(rng, topic):
    vocab = TOPICS[topic][0]
    return "\n".join(paragraph(rng, vocab, rng.randint(30, 45)) for _ in range(3))


def code_document(rng, i):
    lines = [f"// module {i}: helpers for parsing records", "#include <stdio.h>", ""]
    for f in range(rng.randint(3, 6)):
        lines.append(f"int helper_{i}_{f}(int value) {{")
        lines.append(f"    int total = value * {rng.randint(2, 9)} + {rng.randint(0, 99)};")
        lines.append("    // clamp to a positive range")
        lines.append("    if (total < 0) { total = -total; }")
        lines.append("    return total;")
        lines.append("}")
        lines.append("")
    return "\n".join(lines)


def labels_for(rng, topic, quality=None):
    _, domain, speech = TOPICS[topic]
    return {
        "domain": domain,
        "type_of_speech": speech,
        "quality": quality or rng.choice(["High", "High", "Medium", "Low"]),
        "toxicity": round(rng.random() * 0.6, 3),
    }


def write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for r in rows:
            f.write(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n")


def main():
    rng = random.Random(SEED)
    sources = {"web-2019": [], "web-2023": [], "code": []}
    labels = []
    topic_names = list(TOPICS)

    for name in ("web-2019", "web-2023"):
        for i in range(100):
            topic = topic_names[i % 3]
            doc_id = f"{name}-{i:03d}"
            sources[name].append({"id": doc_id, "source": name, "text": document(rng, topic)})
            labels.append({"id": doc_id, **labels_for(rng, topic)})

    # exact duplicates: recent crawl repeats old documents verbatim
    for k in range(8):
        orig = sources["web-2019"][k * 7]
        doc_id = f"web-2023-dup-{k}"
        sources["web-2023"].append({"id": doc_id, "source": "web-2023", "text": orig["text"]})
        labels.append({"id": doc_id, **labels_for(rng, "science")})

    # near duplicates: one word changed
    for k in range(8):
        orig = sources["web-2019"][k * 11 + 3]
        words = orig["text"].split(" ")
        words[len(words) // 2] = "changed"
        doc_id = f"web-2023-near-{k}"
        sources["web-2023"].append({"id": doc_id, "source": "web-2023", "text": " ".join(words)})
        labels.append({"id": doc_id, **labels_for(rng, "sports")})

    # quality-filter failures: too short, boilerplate-heavy
    for k in range(5):
        doc_id = f"web-2019-short-{k}"
        sources["web-2019"].append({"id": doc_id, "source": "web-2019", "text": sentence(rng, SPORTS, 10)})
        labels.append({"id": doc_id, **labels_for(rng, "sports", "Low")})
    for k in range(5):
        doc_id = f"web-2023-boiler-{k}"
        text = "\n".join(
            ["Home", "About us", "Contact us", "Privacy policy and cookies", "All rights reserved."] * 3
            + [sentence(rng, SHOPPING, 12) for _ in range(4)]
        )
        sources["web-2023"].append({"id": doc_id, "source": "web-2023", "text": text})
        labels.append({"id": doc_id, **labels_for(rng, "shopping", "Low")})

    # perplexity-filter failures: fluent shape, out-of-vocabulary words
    for k in range(6):
        doc_id = f"web-2023-gib-{k}"
        text = "\n".join(paragraph(rng, GIBBERISH + ["the", "and", "of", "to", "."], 40) for _ in range(3))
        sources["web-2023"].append({"id": doc_id, "source": "web-2023", "text": text})
        labels.append({"id": doc_id, **labels_for(rng, "science", "Low")})

    for i in range(30):
        doc_id = f"code-{i:03d}"
        sources["code"].append(
            {"id": doc_id, "source": "code", "language": "c", "text": code_document(rng, i)}
        )
        labels.append(
            {
                "id": doc_id,
                "domain": "Computers and Electronics",
                "type_of_speech": "Miscellaneous",
                "quality": rng.choice(["High", "Medium"]),
                "toxicity": 0.0,
            }
        )

    rng.shuffle(labels)
    for name, docs in sources.items():
        write_jsonl(HERE / f"{name}.jsonl", docs)
    write_jsonl(HERE / "labels.jsonl", labels)

    lm = [{"id": f"lm-{i:03d}", "source": "reference", "text": document(rng, topic_names[i % 3])} for i in range(60)]
    write_jsonl(HERE / "lm_training.jsonl", lm)
    target = [{"id": f"target-{i:03d}", "source": "target", "text": document(rng, "science")} for i in range(40)]
    write_jsonl(HERE / "target.jsonl", target)


if __name__ == "__main__":
    main()
