#!/usr/bin/env python3
"""Writes data/vectors.txt, a small deterministic word-vector file.

Each word is the sum of one-hot semantic feature axes plus low-amplitude
hash-seeded noise, so related words (unicorn/horse, kid/child) land close.
Line 1 declares the dimension; each following line is "word v1 ... vD".
"""
import hashlib
import pathlib
import random

DIM = 64
NOISE = 0.06

FEATURES = {
    "animal": """cat fox horse owl penguin dog cow sheep bird duck wolf bear lion elephant giraffe
        rabbit mouse frog pig chicken butterfly fish snake unicorn hound hare cock hen rooster goose
        duckling swan eagle deer goat camel tiger monkey zebra whale dolphin turtle snail crab squirrel
        bee spider dragon kid""",
    "mammal": """cat fox horse dog cow sheep wolf bear lion elephant giraffe rabbit mouse pig unicorn
        hound hare deer goat camel tiger monkey zebra whale dolphin squirrel""",
    "bird": "owl penguin bird duck chicken cock hen rooster goose duckling swan eagle wing",
    "equine": "horse unicorn zebra",
    "canine": "dog fox wolf hound",
    "feline": "cat lion tiger",
    "rodent": "mouse rabbit hare squirrel",
    "amphibian": "frog turtle snake fish crab whale dolphin snail",
    "insect": "butterfly bee spider",
    "farm": "horse cow sheep pig chicken cock hen rooster goose duck farmer field fence goat",
    "wild": "fox wolf bear lion tiger elephant giraffe zebra deer monkey forest",
    "poultry": "chicken cock hen rooster",
    "bunny": "rabbit hare",
    "human": """man woman boy girl child person kid farmer forester hunter shepherd witch wizard king
        queen prince princess soldier mother father grandmother giant troll family""",
    "female": "woman girl witch queen princess mother grandmother hen",
    "male": "man boy farmer forester hunter shepherd king prince soldier father wizard cock rooster",
    "young": "boy girl child kid duckling prince princess",
    "royal": "king queen prince princess castle palace crown tower",
    "magic": "unicorn witch wizard dragon troll giant magic star moon",
    "plant": """tree grass flower bush vine beanstalk leaf branch rose plant forest wood garden meadow
        field bean grape apple pear carrot forester stick straw""",
    "flower": "flower rose",
    "food": """apple banana bread cake cheese grape pear carrot egg bean fish cup plate bowl pot
        ate eat eating""",
    "building": """house castle building palace tower cabin tent roof door window wall kitchen floor
        brick oven""",
    "water": "pool river lake pond sea ocean water well ice snow rain fish boat ship swim swam dolphin whale",
    "landscape": "mountain field road hill valley meadow ground sand island cave path street bridge forest rock",
    "sky": "sky cloud sun moon star rainbow rain kite bird airplane flying fly flew over above",
    "furniture": "chair table bed bench sofa desk lamp pillow swing-set",
    "container": "basket cup bowl pot bottle jar bag box cage bucket",
    "toy": "ball kite toy swing-set balloon",
    "vehicle": "car boat bicycle bus train ship airplane wheel headlight",
    "light": "lamp headlight sun moon star candle fire light shiny bright",
    "clothing": "hat hood shoe sweater boot jacket shirt crown",
    "bodypart": "eye mouth paw hair hand face head leg tail wing",
    "tool": "axe knife key ladder net clock book pen umbrella",
    "up": "above over up upon onto flying climbed climb top sky",
    "down": "below under underneath beneath down fell",
    "contact": "on upon onto sitting standing riding sat stood",
    "inside": "in into inside within trapped cage",
    "near": "near by beside with along among around behind between",
    "left": "left",
    "right": "right",
    "front": "front behind",
    "sit": "sat sitting sit sits bench chair",
    "stand": "stand stood standing stands",
    "hold": "holding held hold grabbed carried carry caught catch kept",
    "ride": "riding ride rode horse bicycle",
    "look": "looking look looked saw see watched watch",
    "play": "playing play played toy ball danced dance",
    "motion": """ran run walked walk jumped jump flew fly swam swim chased chase climbed climb came
        went followed follow across through flying walking running""",
    "speech": "said told asked sang cried shouted whispered talked praised begged roared laughed song voice",
    "emotion": "happy sad angry lonely kind brave loved love laughed cried wanted hoped wished",
    "color": "red green blue yellow white black brown pink purple gray orange golden silver",
    "size_big": "big huge giant tall fat",
    "size_small": "small tiny little short",
    "age": "old young",
}

EXTRA_WORDS = ["across", "through", "toward", "against", "from", "to", "for", "at", "of", "out",
               "off", "past", "after", "before", "along"]


def words_to_write(root):
    words = set()
    for line in (root / "data" / "lexicon.tsv").read_text().splitlines():
        word, pos = line.split("\t")
        if pos in ("NOUN", "VERB", "ADJ", "ADP"):
            words.add(word)
    for feat in FEATURES.values():
        words.update(feat.split())
    words.update(EXTRA_WORDS)
    return sorted(words)


def vector_for(word, axes):
    seed = int.from_bytes(hashlib.sha256(word.encode()).digest()[:8], "little")
    rng = random.Random(seed)
    vec = [rng.gauss(0.0, NOISE) for _ in range(DIM)]
    hits = [i for i, (name, members) in enumerate(axes) if word in members]
    if not hits:
        # unfeatured words get a private random direction
        for i in range(len(axes), DIM):
            vec[i] += rng.gauss(0.0, 0.45)
    for i in hits:
        vec[i] += 1.0
    norm = sum(x * x for x in vec) ** 0.5
    return [x / norm for x in vec]


def main():
    root = pathlib.Path(__file__).resolve().parents[2]
    axes = [(name, set(members.split())) for name, members in FEATURES.items()]
    assert len(axes) < DIM
    out = root / "data" / "vectors.txt"
    words = words_to_write(root)
    with out.open("w") as f:
        f.write(f"{DIM}\n")
        for w in words:
            f.write(w + " " + " ".join(f"{x:.5f}" for x in vector_for(w, axes)) + "\n")
    print(f"wrote {len(words)} vectors of dim {DIM} to {out}")


if __name__ == "__main__":
    main()
