#!/usr/bin/env python3
"""Regenerate the bundled sample data under data/.

The corpus is synthetic: each word pair is written into short sentences whose
connecting words hint at the pair's relation, mixed with filler text. Output is
fully determined by --seed.
"""

import argparse
import random
from pathlib import Path

# (stem, [choices], gold index). Each pair carries the sentence templates used
# to write it into the corpus; {a} and {b} are the first and second word.
QUESTIONS = [
    ("q01", ("traffic", "street", ["{a} in the {b}", "{a} on the {b}", "{a} into the {b}"]),
     [("ship", "gangplank", ["{a}'s {b}", "{b} of the {a}"]),
      ("crop", "harvest", ["{a} then {b}", "{b} of the {a}"]),
      ("car", "garage", ["{a} in the {b}", "{a} into the {b}", "{b} for the {a}"]),
      ("pedestrians", "feet", ["{a} use {b}", "{a} on {b}"]),
      ("water", "riverbed", ["{a} in the {b}", "{a} on the {b}", "{b} with {a}"])], 4),
    ("q02", ("mason", "stone", ["{a} use {b}", "{a} with {b}", "{b} for the {a}"]),
     [("teacher", "chalk", ["{a}'s {b}", "{b} for the {a}"]),
      ("carpenter", "wood", ["{a} use {b}", "{a} with {b}", "{b} for the {a}"]),
      ("soldier", "gun", ["{a} with the {b}", "{a}'s {b}"]),
      ("photograph", "camera", ["{a} from the {b}", "{b} make {a}"]),
      ("book", "word", ["{a} contain {b}", "{b} in the {a}"])], 1),
    ("q03", ("ostrich", "bird", ["{a} is * {b}", "{b} such as {a}", "{b} like the {a}"]),
     [("lion", "cat", ["{a} is * {b}", "{b} such as {a}"]),
      ("goose", "flock", ["{b} of {a}", "{a} in the {b}"]),
      ("ewe", "sheep", ["{a} or {b}", "{a} and not {b}"]),
      ("cub", "bear", ["{a} of the {b}", "{b}'s {a}"]),
      ("primate", "monkey", ["{b} is * {a}", "{a} such as {b}"])], 0),
    ("q04", ("doctor", "hospital", ["{a} in the {b}", "{a} at the {b}", "{b}'s {a}"]),
     [("judge", "verdict", ["{a} give {b}", "{b} of the {a}"]),
      ("chef", "kitchen", ["{a} in the {b}", "{a} at the {b}", "{b}'s {a}"]),
      ("farmer", "tractor", ["{a} use {b}", "{a}'s {b}"]),
      ("author", "novel", ["{a}'s {b}", "{b} of the {a}"]),
      ("bird", "wing", ["{b} of the {a}", "{a} has {b}"])], 1),
    ("q05", ("hot", "cold", ["{a} or {b}", "{a} and not {b}", "{a} rather than {b}"]),
     [("big", "large", ["{a} like {b}", "{a} or {b}"]),
      ("warm", "summer", ["{b} is {a}", "{a} in the {b}"]),
      ("wet", "dry", ["{a} or {b}", "{a} rather than {b}", "{a} and not {b}"]),
      ("fast", "quick", ["{a} like {b}", "{a} and {b}"]),
      ("dark", "night", ["{b} is {a}", "{a} at {b}"])], 2),
    ("q06", ("seed", "plant", ["{b} from {a}", "{a} become {b}", "{a} turn into {b}"]),
     [("root", "tree", ["{b} has {a}", "{a} of the {b}"]),
      ("milk", "cow", ["{a} from the {b}", "{b} give {a}"]),
      ("leaf", "branch", ["{a} on {b}", "{b}'s {a}"]),
      ("egg", "chicken", ["{b} from {a}", "{a} become {b}"]),
      ("rain", "cloud", ["{a} from the {b}", "{b} give {a}"])], 3),
    ("q07", ("wallet", "money", ["{a} contain {b}", "{b} in the {a}", "{b} within the {a}"]),
     [("book", "page", ["{a} has {b}", "{b} of the {a}"]),
      ("tree", "forest", ["{a} in the {b}", "{b} of {a}"]),
      ("quiver", "arrow", ["{a} contain {b}", "{b} in the {a}", "{b} within the {a}"]),
      ("coin", "metal", ["{a} of {b}", "{b} for the {a}"]),
      ("key", "lock", ["{a} for the {b}", "{a} to the {b}"])], 2),
    ("q08", ("sculptor", "statue", ["{a} make {b}", "{b} of the {a}", "{a}'s {b}"]),
     [("reader", "book", ["{a} of the {b}", "{b} for the {a}"]),
      ("thief", "money", ["{a} get {b}", "{a}'s {b}"]),
      ("driver", "road", ["{a} on the {b}", "{a} use {b}"]),
      ("miner", "coal", ["{a} get {b}", "{b} for the {a}"]),
      ("baker", "bread", ["{a} make {b}", "{b} of the {a}", "{a}'s {b}"])], 4),
]

# Templates per relation class; {a} is the modifier and {b} the head.
CLASS_TEMPLATES = {
    "cs": ["{b} give {a}", "{b} make {a}", "{a} from the {b}"],
    "eff": ["{a} give {b}", "{b} from {a}", "{b} from the {a}"],
    "prp": ["{b} for {a}", "{b} for the {a}", "{a} in the {b}"],
    "detr": ["{b} for {a}", "{b} for the {a}", "{a} need {b}"],
    "freq": ["{b} is {a}", "{b} which {a}"],
    "tat": ["{b} in the {a}", "{b} at {a}", "{b} when {a}"],
    "tthr": ["{b} for the {a}", "{b} of {a}"],
    "dir": ["{b} goes {a}", "{b} go {a}", "{b} is {a}"],
    "loc": ["{a} in the {b}", "{b}'s {a}", "{b} has {a}"],
    "lat": ["{b} at the {a}", "{b} in the {a}", "{b} on the {a}"],
    "lfr": ["{b} from {a}", "{b} from the {a}", "{b} is {a}"],
    "ag": ["{a}'s {b}", "{b} of the {a}", "{a} make {b}"],
    "ben": ["{b} for {a}", "{b} for the {a}", "{a} get {b}"],
    "inst": ["{b} use {a}", "{b} with {a}", "{b} with the {a}"],
    "obj": ["{b} of {a}", "{b} of the {a}"],
    "obj_prop": ["{b} become {a}", "{b} is {a}"],
    "part": ["{b} of the {a}", "{a} has {b}", "{a}'s {b}"],
    "posr": ["{a}'s {b}", "{a} has {b}", "{a} have {b}"],
    "prop": ["{b} is very {a}", "{b} are {a}"],
    "prod": ["{b} give {a}", "{a} from the {b}", "{b} make {a}"],
    "src": ["{b} from {a}", "{b} from the {a}", "{a} give {b}"],
    "st": ["{b} is {a}", "{b} are {a}"],
    "whl": ["{b} of {a}", "{b} of the {a}", "{b} contain {a}"],
    "cntr": ["{b} in the {a}", "{b} within the {a}", "{a} contain {b}"],
    "cont": ["{a} in the {b}", "{b} contain {a}", "{b} with {a}"],
    "eq": ["{a} or {b}", "{b} is the {a}", "{b} is {a}"],
    "mat": ["{b} of {a}", "{b} with {a}"],
    "meas": ["{b} is very {a}", "{b} is {a}"],
    "top": ["{b} on {a}", "{b} on the {a}"],
    "type": ["{b} such as {a}", "{a} is * {b}", "{b} like the {a}"],
}

NOUN_MODIFIERS = [
    ("flu", "virus", "cs"), ("storm", "cloud", "cs"), ("tear", "gas", "cs"),
    ("exam", "anxiety", "eff"), ("war", "trauma", "eff"), ("smoke", "damage", "eff"),
    ("concert", "hall", "prp"), ("dining", "room", "prp"), ("tennis", "court", "prp"),
    ("headache", "pill", "detr"), ("cough", "syrup", "detr"), ("insect", "repellent", "detr"),
    ("daily", "exercise", "freq"), ("weekly", "meeting", "freq"), ("annual", "report", "freq"),
    ("morning", "exercise", "tat"), ("night", "shift", "tat"), ("summer", "storm", "tat"),
    ("six-hour", "meeting", "tthr"), ("weekend", "trip", "tthr"), ("decade", "drought", "tthr"),
    ("outgoing", "mail", "dir"), ("upward", "trend", "dir"), ("inbound", "flight", "dir"),
    ("home", "town", "loc"), ("office", "building", "loc"), ("farm", "village", "loc"),
    ("desert", "storm", "lat"), ("mountain", "cabin", "lat"), ("ocean", "breeze", "lat"),
    ("foreign", "capital", "lfr"), ("imported", "wine", "lfr"), ("overseas", "aid", "lfr"),
    ("student", "protest", "ag"), ("police", "investigation", "ag"), ("committee", "decision", "ag"),
    ("student", "discount", "ben"), ("tenant", "protection", "ben"), ("patient", "support", "ben"),
    ("laser", "printer", "inst"), ("steam", "engine", "inst"), ("solar", "heater", "inst"),
    ("metal", "separator", "obj"), ("car", "thief", "obj"), ("tree", "cutter", "obj"),
    ("sunken", "ship", "obj_prop"), ("broken", "window", "obj_prop"), ("boiled", "egg", "obj_prop"),
    ("printer", "tray", "part"), ("door", "handle", "part"), ("engine", "valve", "part"),
    ("national", "debt", "posr"), ("family", "estate", "posr"), ("company", "car", "posr"),
    ("blue", "book", "prop"), ("tall", "building", "prop"), ("red", "wine", "prop"),
    ("plum", "tree", "prod"), ("honey", "bee", "prod"), ("silk", "worm", "prod"),
    ("olive", "oil", "src"), ("cane", "sugar", "src"), ("coal", "gas", "src"),
    ("sleeping", "dog", "st"), ("waking", "child", "st"), ("resting", "heart", "st"),
    ("daisy", "chain", "whl"), ("ant", "colony", "whl"), ("star", "cluster", "whl"),
    ("film", "music", "cntr"), ("prison", "inmate", "cntr"), ("bag", "lunch", "cntr"),
    ("apple", "cake", "cont"), ("coffee", "cup", "cont"), ("water", "tank", "cont"),
    ("player", "coach", "eq"), ("composer", "pianist", "eq"), ("owner", "driver", "eq"),
    ("brick", "house", "mat"), ("paper", "bag", "mat"), ("glass", "door", "mat"),
    ("expensive", "book", "meas"), ("heavy", "load", "meas"), ("long", "road", "meas"),
    ("weather", "report", "top"), ("history", "lesson", "top"), ("travel", "guide", "top"),
    ("oak", "tree", "type"), ("jazz", "music", "type"), ("salmon", "fish", "type"),
]

FILLER = ("we saw that many people say today it was quite an old new small story about "
          "some other thing where everyone found nothing much yesterday so here again "
          "perhaps nobody knew why this happened although later several reports noted "
          "how things changed over time").split()


def inflect(word, rng):
    if word.isalpha() and not word.endswith("s") and rng.random() < 0.3:
        return word + "s"
    return word


def sentence(a, b, templates, rng):
    text = rng.choice(templates)
    text = text.replace("*", rng.choice(["a", "the", "one", "truly"]))
    text = text.format(a=inflect(a, rng), b=inflect(b, rng))
    before = rng.sample(FILLER, rng.randint(0, 3))
    after = rng.sample(FILLER, rng.randint(0, 3))
    return " ".join(before + [text] + after) + "."


def build(seed, per_pair):
    rng = random.Random(seed)
    sentences = []
    all_templates = []
    for _, (a, b, templates), choices, _ in QUESTIONS:
        all_templates.append(templates)
        for _ in range(per_pair):
            sentences.append(sentence(a, b, templates, rng))
        for ca, cb, ct in choices:
            all_templates.append(ct)
            for _ in range(per_pair):
                sentences.append(sentence(ca, cb, ct, rng))
    for mod, head, label in NOUN_MODIFIERS:
        templates = CLASS_TEMPLATES[label]
        for _ in range(per_pair):
            sentences.append(sentence(mod, head, templates, rng))
        sentences.append(" ".join(rng.sample(FILLER, 2) + [mod, head]) + ".")
    # noise: pairs written with another pair's wording
    pairs = [(m, h) for m, h, _ in NOUN_MODIFIERS]
    for _ in range(len(sentences) // 10):
        a, b = rng.choice(pairs)
        sentences.append(sentence(a, b, rng.choice(list(CLASS_TEMPLATES.values())), rng))
    for _ in range(len(sentences) // 5):
        sentences.append(" ".join(rng.sample(FILLER, rng.randint(4, 10))) + ".")
    rng.shuffle(sentences)

    docs = []
    i = 0
    while i < len(sentences):
        n = rng.randint(1, 3)
        docs.append(" ".join(sentences[i:i + n]))
        i += n
    return docs


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data")
    parser.add_argument("--seed", type=int, default=2003)
    parser.add_argument("--per-pair", type=int, default=10)
    args = parser.parse_args()

    (args.out / "corpus").mkdir(parents=True, exist_ok=True)
    docs = build(args.seed, args.per_pair)
    (args.out / "corpus" / "minicorpus.txt").write_text("\n\n".join(docs) + "\n", encoding="utf-8")

    lines = ["# id\tstemA\tstemB\tc1A\tc1B\tc2A\tc2B\tc3A\tc3B\tc4A\tc4B\tc5A\tc5B\tgold"]
    for qid, (a, b, _), choices, gold in QUESTIONS:
        fields = [qid, a, b]
        for ca, cb, _ in choices:
            fields += [ca, cb]
        fields.append(str(gold))
        lines.append("\t".join(fields))
    (args.out / "questions.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    lines = ["# modifier\thead\tclass"]
    lines += ["\t".join(row) for row in NOUN_MODIFIERS]
    (args.out / "nounmod.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
