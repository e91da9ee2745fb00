#!/usr/bin/env python3
"""Regenerates the bundled synthetic corpus (text/ and gold/).

Each document has a title line, numbered list items whose ordinal is
followed by '.', '-' or '_', and prose lines. The last two lines of every
document (its 10% test share under a 0.9 split) carry abbreviation contexts
that never occur in the first eighteen lines.
"""
import os
import random
from xml.sax.saxutils import escape

HERE = os.path.dirname(os.path.abspath(__file__))
SUBJECTS = ["math", "science", "history", "kurdish"]
LEVELS = ["grade7", "grade8"]
LINES_PER_DOC = 20

SUBJECTS_NP = ["قوتابییەکان", "مامۆستاکە", "منداڵەکان", "خوێندکارێک", "هاوڕێکەم", "باوکم", "خوشکەکەم"]
OBJECTS = ["کتێبەکە", "وانەکە", "پرسیارەکان", "نەخشەکە", "ژمارەکان", "چیرۆکەکە", "هۆنراوەکە", "تاقیکردنەوەکە"]
VERBS = ["دەخوێننەوە", "نووسیویانە", "ڕوونکردەوە", "دەنووسێتەوە", "تەواوکردووە", "خوێندوویەتی", "دەپشکنێت"]
ADVERBS = ["بە وردی", "ئەمڕۆ", "دوێنێ", "لە قوتابخانە", "لە ماڵەوە", "بە خێرایی"]
ITEMS = ["پێناسەی بابەت", "نموونەی یەکەم", "ڕاهێنانەکان", "پوختەی وانە", "پرسیاری کۆتایی"]
TITLES = ["وانەی یەکەم", "بەشی دووەم", "وانەی سێیەم", "بەشی چوارەم"]
NAMES = ["ئەحمەد", "کامەران", "هێمن", "شیرین", "ئازاد"]

# (abbreviation token, context template); the abbreviation is never
# sentence-final in gold.
ABBREV_CONTEXTS = [
    ("د.", "{a} {n} وانەکەی ڕوونکردەوە."),
    ("پ.", "{a} {n} پرسیارەکانی نووسیویەتی."),
    ("م.", "{a} {n} نەخشەکەی پشکنیوە."),
    ("د.خ.", "پێغەمبەر {a} فەرموویەتی خوێندن پێویستە."),
    ("پ‌.‌ز.", "لە ساڵی ٥٠٠ی {a} شارێک دروستکراوە."),
]

EASTERN = str.maketrans("0123456789", "٠١٢٣٤٥٦٧٨٩")


def sentence(rng):
    words = [rng.choice(SUBJECTS_NP)]
    if rng.random() < 0.5:
        words.append(rng.choice(ADVERBS))
    words.append(rng.choice(OBJECTS))
    words.append(rng.choice(VERBS))
    end = "." if rng.random() < 0.8 else " ؟"
    return " ".join(words) + end


def numbered(rng, i):
    digits = str(i) if rng.random() < 0.5 else str(i).translate(EASTERN)
    mark = rng.choice([".", ".", "-", "_"])
    sep = "" if mark == "." else " "
    return [f"{digits}{sep}{mark} {rng.choice(ITEMS)}"]


def prose(rng, k):
    return [sentence(rng) for _ in range(k)]


def abbrev_line(rng, index):
    abbr, template = ABBREV_CONTEXTS[index % len(ABBREV_CONTEXTS)]
    first = template.format(a=abbr, n=rng.choice(NAMES))
    return [first, sentence(rng)]


def document(rng, doc_index):
    lines = [[rng.choice(TITLES)]]
    item = 1
    while len(lines) < LINES_PER_DOC - 2:
        if rng.random() < 0.35:
            lines.append(numbered(rng, item))
            item += 1
        else:
            lines.append(prose(rng, rng.choice([1, 2, 2])))
    lines.append(abbrev_line(rng, 2 * doc_index))
    lines.append(abbrev_line(rng, 2 * doc_index + 1))
    return lines


def main():
    rng = random.Random(20200101)
    tokens = 0
    for d, (subject, level) in enumerate((s, l) for s in SUBJECTS for l in LEVELS):
        lines = document(rng, d)
        text = "\n".join(" ".join(sents) for sents in lines) + "\n"
        tokens += len(text.split())
        os.makedirs(os.path.join(HERE, "text", subject), exist_ok=True)
        os.makedirs(os.path.join(HERE, "gold", subject), exist_ok=True)
        with open(os.path.join(HERE, "text", subject, level + ".txt"), "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        with open(os.path.join(HERE, "gold", subject, level + ".xml"), "w", encoding="utf-8", newline="\n") as f:
            f.write('<?xml version="1.0" encoding="UTF-8"?>\n')
            f.write(f'<doc id="{subject}/{level}">\n')
            for sents in lines:
                for s in sents:
                    f.write(f"<s>{escape(s)}</s>\n")
            f.write("</doc>\n")
    print("whitespace tokens:", tokens)


if __name__ == "__main__":
    main()
