#!/usr/bin/env python3
"""Writes data/vg81.json: canonical entity list with size classes, relations, relation kinds."""
import json
import pathlib

SCENE = """sky grass tree pool river lake mountain field road house castle building bridge water
ground snow sand""".split()
CHARACTER = """man woman boy girl child person dog cat horse cow sheep bird owl penguin duck fox wolf
bear lion elephant giraffe rabbit mouse frog pig chicken butterfly fish snake""".split()
PROP = """swing-set bench chair table bed door window fence flower bush rock ball basket hat umbrella
car boat bicycle kite clock lamp headlight cup plate bottle book cake apple bowl pot cage sun moon
star cloud""".split()

RELATION_KINDS = {
    "on": "on",
    "in": "in",
    "under": "below",
    "below": "below",
    "above": "above",
    "flying over": "above",
    "near": "near",
    "beside": "near",
    "by": "near",
    "behind": "near",
    "in front of": "near",
    "left of": "left-of",
    "right of": "right-of",
    "with": "near",
    "holding": "near",
    "riding": "on",
    "sitting on": "on",
    "standing on": "on",
    "looking at": "near",
    "playing with": "near",
}


def main():
    entities = [{"name": n, "size_class": "scene"} for n in SCENE]
    entities += [{"name": n, "size_class": "character"} for n in CHARACTER]
    entities += [{"name": n, "size_class": "prop"} for n in PROP]
    names = [e["name"] for e in entities]
    assert len(names) == 81, len(names)
    assert len(set(names)) == 81
    doc = {
        "entities": entities,
        "relations": list(RELATION_KINDS),
        "relation_kinds": RELATION_KINDS,
    }
    out = pathlib.Path(__file__).resolve().parents[2] / "data" / "vg81.json"
    out.write_text(json.dumps(doc, indent=2) + "\n")
    print(f"wrote {out}: {len(entities)} entities, {len(RELATION_KINDS)} relations")


if __name__ == "__main__":
    main()
