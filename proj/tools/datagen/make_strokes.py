#!/usr/bin/env python3
"""Writes data/strokes.ndjson, a 50-category doodle template bank.

Records follow the QuickDraw simplified-drawing layout:
{"word": category, "drawing": [[[x...], [y...]], ...]} with 0-255 integer coordinates.
Each doodle is composed from a few parametric primitives.
"""
import json
import math
import pathlib


def arc(cx, cy, rx, ry, a0=0.0, a1=360.0, n=16):
    pts = []
    for i in range(n + 1):
        a = math.radians(a0 + (a1 - a0) * i / n)
        pts.append((cx + rx * math.cos(a), cy + ry * math.sin(a)))
    return pts


def circle(cx, cy, r, n=16, start=0.0):
    return arc(cx, cy, r, r, start, start + 360.0, n)


def rect(x0, y0, x1, y1):
    return [(x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0)]


def poly(*pts):
    return list(pts)


def closed(*pts):
    return list(pts) + [pts[0]]


def zigzag(x0, y0, x1, y1, teeth, amp):
    pts = []
    for i in range(2 * teeth + 1):
        t = i / (2 * teeth)
        off = amp if i % 2 else 0.0
        pts.append((x0 + (x1 - x0) * t, y0 + (y1 - y0) * t - off))
    return pts


def wave(x0, y, x1, amp, periods, n=24):
    return [(x0 + (x1 - x0) * i / n, y + amp * math.sin(2 * math.pi * periods * i / n)) for i in range(n + 1)]


def star(cx, cy, ro, ri, points=5):
    pts = []
    for i in range(2 * points + 1):
        r = ro if i % 2 == 0 else ri
        a = math.radians(-90 + 180.0 * i / points)
        pts.append((cx + r * math.cos(a), cy + r * math.sin(a)))
    return pts


def stick_figure(head_r, top, height, extra=()):
    h = height
    return [circle(128, top + head_r, head_r),
            poly((128, top + 2 * head_r), (128, top + 2 * head_r + h * 0.45)),
            poly((80, top + 2 * head_r + h * 0.15), (128, top + 2 * head_r + h * 0.1), (176, top + 2 * head_r + h * 0.15)),
            poly((90, 250), (128, top + 2 * head_r + h * 0.45), (166, 250))] + list(extra)


DRAWINGS = {
    "cat": [circle(128, 140, 70), closed((75, 95), (85, 30), (120, 72)), closed((136, 72), (170, 30), (181, 95)),
            poly((40, 150), (100, 160)), poly((156, 160), (216, 150))],
    "fox": [closed((40, 60), (216, 60), (128, 220)), closed((40, 60), (60, 5), (95, 60)),
            closed((161, 60), (196, 5), (216, 60)), circle(128, 205, 12, 8)],
    "tree": [rect(110, 160, 146, 250), circle(128, 95, 85, 20, 90)],
    "house": [rect(50, 120, 206, 250), closed((35, 120), (128, 20), (221, 120)), rect(110, 180, 146, 250)],
    "horse": [arc(120, 140, 80, 40, 0, 360, 18), poly((60, 165), (55, 245)), poly((90, 175), (90, 245)),
              poly((150, 175), (150, 245)), poly((180, 165), (185, 245)),
              poly((190, 125), (225, 40), (250, 55), (215, 110))],
    "owl": [arc(128, 140, 90, 110, 0, 360, 20), circle(95, 100, 25, 12), circle(161, 100, 25, 12),
            closed((118, 130), (138, 130), (128, 160))],
    "penguin": [arc(128, 128, 60, 125, 0, 360, 20), arc(128, 150, 35, 80, 0, 360, 14),
                poly((70, 100), (20, 180)), poly((186, 100), (236, 180)), closed((118, 45), (138, 45), (128, 62))],
    "pool": [rect(5, 60, 250, 200), wave(25, 100, 230, 10, 3), wave(25, 150, 230, 10, 3)],
    "swing-set": [poly((20, 250), (60, 20), (100, 250)), poly((155, 250), (195, 20), (235, 250)),
                  poly((60, 20), (195, 20)), poly((110, 20), (110, 180)), poly((150, 20), (150, 180)),
                  rect(100, 180, 160, 195)],
    "butterfly": [closed((128, 128), (30, 30), (20, 120)), closed((128, 128), (226, 30), (236, 120)),
                  closed((128, 128), (50, 230), (110, 220)), closed((128, 128), (206, 230), (146, 220)),
                  poly((128, 60), (128, 200))],
    "child": stick_figure(28, 60, 110),
    "man": stick_figure(22, 5, 150, [rect(100, 0, 156, 10)]),
    "woman": [circle(128, 30, 25), closed((128, 55), (60, 200), (196, 200)),
              poly((110, 200), (110, 250)), poly((146, 200), (146, 250)), poly((70, 100), (186, 100))],
    "dog": [rect(40, 100, 190, 170), poly((60, 170), (60, 240)), poly((170, 170), (170, 240)),
            rect(180, 50, 240, 110), poly((40, 110), (5, 60))],
    "bird": [poly((10, 80), (70, 130), (128, 110), (186, 130), (246, 80)), arc(128, 160, 40, 25, 0, 360, 12)],
    "fish": [arc(110, 128, 90, 50, 0, 360, 18), closed((195, 128), (250, 70), (250, 186)), circle(60, 115, 8, 8)],
    "sun": [circle(128, 128, 50)] + [poly((128 + 65 * math.cos(math.radians(a)), 128 + 65 * math.sin(math.radians(a))),
                                         (128 + 120 * math.cos(math.radians(a)), 128 + 120 * math.sin(math.radians(a))))
                                    for a in range(0, 360, 45)],
    "moon": [arc(128, 128, 110, 110, 60, 300, 20) + arc(180, 128, 80, 95, 240, 120, 16)],
    "star": [star(128, 135, 120, 48)],
    "cloud": [arc(70, 150, 50, 50, 90, 270, 10) + arc(128, 100, 60, 60, 180, 360, 12) +
              arc(186, 150, 50, 50, 270, 450, 10) + [(70, 200)]],
    "flower": [circle(128, 80, 20, 10)] + [circle(128 + 45 * math.cos(math.radians(a)), 80 + 45 * math.sin(math.radians(a)), 22, 10)
                                        for a in range(0, 360, 72)] + [poly((128, 145), (128, 255)), arc(150, 200, 20, 10, 0, 360, 8)],
    "mountain": [poly((0, 250), (70, 60), (120, 160), (180, 20), (255, 250)), poly((150, 75), (180, 95), (205, 75))],
    "car": [poly((10, 180), (10, 120), (60, 120), (90, 60), (170, 60), (200, 120), (245, 120), (245, 180), (10, 180)),
            circle(65, 190, 28, 12), circle(190, 190, 28, 12)],
    "boat": [poly((5, 170), (40, 230), (215, 230), (250, 170), (5, 170)), poly((128, 170), (128, 10)),
             closed((128, 20), (128, 150), (40, 150))],
    "bicycle": [circle(55, 180, 50, 16), circle(200, 180, 50, 16), poly((55, 180), (110, 100), (200, 180)),
                poly((110, 100), (180, 100), (200, 180)), poly((170, 80), (190, 80))],
    "chair": [poly((60, 10), (60, 250)), poly((60, 140), (190, 140), (190, 250)), poly((60, 10), (110, 10), (110, 140))],
    "table": [rect(5, 80, 250, 110), poly((30, 110), (30, 250)), poly((225, 110), (225, 250))],
    "bed": [poly((10, 60), (10, 230)), poly((10, 150), (245, 150)), poly((245, 110), (245, 230)),
            rect(10, 110, 245, 150), rect(20, 90, 70, 110)],
    "door": [rect(60, 5, 196, 250), circle(170, 130, 10, 8)],
    "window": [rect(30, 30, 226, 226), poly((128, 30), (128, 226)), poly((30, 128), (226, 128))],
    "fence": [zigzag(10, 240, 246, 240, 5, 200), poly((5, 100), (250, 100)), poly((5, 180), (250, 180))],
    "ball": [circle(128, 128, 110, 20), arc(128, 10, 110, 110, 50, 130, 10), arc(128, 246, 110, 110, 230, 310, 10)],
    "basket": [arc(128, 120, 110, 110, 0, 180, 16) + [(18, 120)], arc(128, 120, 80, 110, 180, 360, 14)],
    "umbrella": [arc(128, 110, 120, 90, 180, 360, 18) + [(8, 110)], poly((128, 110), (128, 230)) + arc(110, 230, 18, 18, 0, 180, 8)],
    "castle": [poly((10, 250), (10, 40), (50, 40), (50, 70), (90, 70), (90, 40), (130, 40), (130, 70),
                    (170, 70), (170, 40), (210, 40), (210, 70), (246, 70), (246, 250), (10, 250)),
               arc(128, 250, 40, 60, 180, 360, 10)],
    "bridge": [poly((0, 120), (255, 120)), arc(128, 220, 110, 90, 180, 360, 16),
               poly((40, 120), (40, 160)), poly((216, 120), (216, 160))],
    "river": [wave(0, 90, 255, 25, 1.5), wave(0, 170, 255, 25, 1.5)],
    "lake": [arc(128, 140, 125, 70, 0, 360, 24), arc(90, 140, 30, 10, 0, 180, 8)],
    "grass": [zigzag(0, 250, 255, 250, 8, 120)],
    "apple": [circle(128, 150, 90, 20, 270), poly((128, 60), (140, 10)), arc(165, 35, 25, 12, 0, 360, 8)],
    "cake": [rect(20, 150, 236, 250), rect(50, 90, 206, 150), poly((90, 90), (90, 40)),
             poly((128, 90), (128, 40)), poly((166, 90), (166, 40))],
    "cup": [poly((40, 40), (70, 240), (170, 240), (200, 40), (40, 40)), arc(200, 130, 45, 50, 270, 450, 12)],
    "clock": [circle(128, 128, 115, 24), poly((128, 40), (128, 128), (190, 160))],
    "lamp": [closed((70, 20), (186, 20), (220, 110), (36, 110)), poly((128, 110), (128, 230)), poly((70, 240), (186, 240))],
    "hat": [poly((0, 200), (255, 200)), rect(60, 40, 196, 200), poly((60, 160), (196, 160))],
    "mouse": [arc(110, 160, 90, 60, 0, 360, 18), circle(60, 95, 28, 10), poly((200, 160), (230, 120), (250, 200), (255, 60))],
    "rabbit": [circle(128, 175, 70, 18), arc(95, 60, 18, 60, 0, 360, 10), arc(161, 60, 18, 60, 0, 360, 10)],
    "frog": [arc(128, 170, 115, 70, 0, 180, 14) + [(13, 170)], circle(80, 80, 30, 10), circle(176, 80, 30, 10),
             arc(128, 170, 60, 25, 0, 180, 10)],
    "pig": [circle(128, 128, 110, 20), arc(128, 150, 40, 28, 0, 360, 12), circle(112, 150, 6, 6), circle(144, 150, 6, 6),
            closed((40, 50), (60, 5), (90, 30))],
    "snake": [wave(0, 128, 220, 60, 2.5, 30) + [(250, 110), (240, 140)]],
}


def to_record(word, strokes):
    drawing = []
    for s in strokes:
        xs = [max(0, min(255, int(round(x)))) for x, _ in s]
        ys = [max(0, min(255, int(round(y)))) for _, y in s]
        drawing.append([xs, ys])
    return {"word": word, "drawing": drawing}


def main():
    assert len(DRAWINGS) == 50, len(DRAWINGS)
    out = pathlib.Path(__file__).resolve().parents[2] / "data" / "strokes.ndjson"
    with out.open("w") as f:
        for word, strokes in DRAWINGS.items():
            f.write(json.dumps(to_record(word, strokes), separators=(",", ":")) + "\n")
    print(f"wrote {len(DRAWINGS)} templates to {out}")


if __name__ == "__main__":
    main()
