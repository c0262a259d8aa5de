#!/usr/bin/env python3
"""Regenerates the bundled catalog documents under crates/core/data/.

The glyph art is schematic: hand shapes are a palm outline with one stroke
per extended finger, rotated in 45 degree steps about the box center.
"""
import math
import os

OUT = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "data")


def fmt(v):
    v = round(v, 2)
    if v == int(v):
        return str(int(v))
    return ("%.2f" % v).rstrip("0")


def rot(pt, steps):
    # counter-clockwise on screen (y down)
    a = math.radians(45 * steps)
    x, y = pt[0] - 50, pt[1] - 50
    return (50 + x * math.cos(a) + y * math.sin(a), 50 - x * math.sin(a) + y * math.cos(a))


def poly(points, closed=True):
    s = "M" + " L".join(f"{fmt(x)} {fmt(y)}" for x, y in points)
    return s + (" Z" if closed else "")


def hand_path(fingers, handed, steps, palm="front"):
    mirror = -1 if handed == "L" else 1
    palm_pts = [(35, 45), (65, 45), (65, 75), (35, 75)]
    parts = [poly([rot(p, steps) for p in palm_pts])]
    if palm == "side":
        parts.append(poly([rot((50, 45), steps), rot((50, 75), steps)], closed=False))
    if palm == "back":
        parts.append(poly([rot((35, 45), steps), rot((65, 75), steps)], closed=False))
    slots = [38, 44, 50, 56, 62]
    for i in range(fingers):
        x = 50 + mirror * (slots[i] - 50)
        parts.append(poly([rot((x, 45), steps), rot((x, 20), steps)], closed=False))
    if fingers == 0:
        parts.append(poly([rot((35, 45), steps), rot((50, 35), steps), rot((65, 45), steps)], closed=False))
    return " ".join(parts)


def fixture():
    lines = [
        "# Test fixture: two categories, 52 glyphs.",
        "CATALOG fixture 1",
        'CATEGORY hands LABEL "Hands" KIND anatomical',
        'CATEGORY head LABEL "Head" KIND anatomical',
        'FACET hands handedness LABEL "Handedness" VALUES L,R',
        'FACET hands fingers LABEL "Fingers" VALUES 1,2,5',
        'FACET hands rotation LABEL "Rotation" VALUES 0,1,2,3,4,5,6,7',
        'FACET head region LABEL "Region" VALUES brow,mouth',
    ]
    for fingers in (1, 2, 5):
        for handed in ("L", "R"):
            for r in range(8):
                lines.append(
                    f"GLYPH hands:h-{fingers}-{handed}-{r} BASE hands:h-{fingers}-{handed}-0 "
                    f"FACETS handedness={handed},fingers={fingers},rotation={r} "
                    f'PATH "{hand_path(fingers, handed, r)}"'
                )
    brow = "M25 40 Q50 25 75 40"
    brow2 = "M25 45 Q50 30 75 45 M25 40 Q50 25 75 40"
    mouth = "M30 60 Q50 75 70 60"
    mouth2 = "M30 60 Q50 75 70 60 Z"
    lines += [
        f'GLYPH head:brow-a FACETS region=brow PATH "{brow}"',
        f'GLYPH head:brow-b BASE head:brow-a FACETS region=brow PATH "{brow2}"',
        f'GLYPH head:mouth-a FACETS region=mouth PATH "{mouth}" ANCHOR 50,65',
        f'GLYPH head:mouth-b BASE head:mouth-a FACETS region=mouth PATH "{mouth2}" ANCHOR 50,65',
    ]
    return "\n".join(lines) + "\n"


def sample():
    lines = [
        "# Sample editor catalog: every Puppet area plus punctuation and contact buttons.",
        "CATALOG swift-sample 1.0",
        'CATEGORY head LABEL "Head" KIND anatomical',
        'CATEGORY shoulders LABEL "Shoulders" KIND anatomical',
        'CATEGORY hands LABEL "Hands" KIND anatomical',
        'CATEGORY arms LABEL "Arms" KIND anatomical',
        'CATEGORY punctuation LABEL "Punctuation" KIND symbolic',
        'CATEGORY contact LABEL "Contact" KIND symbolic',
        'FACET head region LABEL "Region" VALUES brow,eyes,cheeks,mouth',
        'FACET head side LABEL "Side" VALUES left,right,both',
        'FACET shoulders motion LABEL "Motion" VALUES raise,drop,forward,back',
        'FACET shoulders side LABEL "Side" VALUES left,right,both',
        'FACET hands handedness LABEL "Handedness" VALUES L,R',
        'FACET hands fingers LABEL "Fingers" VALUES 0,1,2,3,4,5',
        'FACET hands palm LABEL "Palm" VALUES front,back,side',
        'FACET hands rotation LABEL "Rotation" VALUES 0,1,2,3,4,5,6,7',
        'FACET arms direction LABEL "Direction" VALUES 0,1,2,3,4,5,6,7',
        'FACET arms plane LABEL "Plane" VALUES wall,floor',
        'FACET arms arrowhead LABEL "Arrowhead" VALUES single,double',
        'FACET punctuation mark LABEL "Mark" VALUES period,comma,question,exclamation,colon',
        'FACET contact kind LABEL "Kind" VALUES touch,grasp,strike,brush,rub,between',
        'FACET contact repeat LABEL "Repeat" VALUES 1,2',
    ]
    regions = {
        "brow": ("M{a} 40 Q{m} 28 {b} 40", 50),
        "eyes": ("M{a} 45 L{b} 45 M{m} 42 L{m} 48", 50),
        "cheeks": ("M{a} 55 Q{m} 62 {b} 55", 50),
        "mouth": ("M{a} 65 Q{m} 78 {b} 65", 65),
    }
    for region, (tmpl, ay) in regions.items():
        for side in ("left", "right", "both"):
            a, b = {"left": (15, 45), "right": (55, 85), "both": (20, 80)}[side]
            path = tmpl.format(a=a, b=b, m=(a + b) // 2)
            base = f"head:{region}-both"
            lines.append(
                f"GLYPH head:{region}-{side} BASE {base} FACETS region={region},side={side} "
                f'PATH "{path}" ANCHOR 50,{ay}'
            )
    for motion, dy in (("raise", -12), ("drop", 12), ("forward", 0), ("back", 0)):
        for side in ("left", "right", "both"):
            segs = []
            spans = {"left": [(10, 45)], "right": [(55, 90)], "both": [(10, 45), (55, 90)]}[side]
            for a, b in spans:
                segs.append(f"M{a} 50 L{b} 50")
                if dy:
                    segs.append(f"M{(a + b) // 2} 50 L{(a + b) // 2} {50 + dy}")
                elif motion == "forward":
                    segs.append(f"M{(a + b) // 2 - 5} 45 L{(a + b) // 2 + 5} 55")
                else:
                    segs.append(f"M{(a + b) // 2 - 5} 55 L{(a + b) // 2 + 5} 45")
            lines.append(
                f"GLYPH shoulders:{motion}-{side} BASE shoulders:{motion}-both "
                f'FACETS motion={motion},side={side} PATH "{" ".join(segs)}"'
            )
    for fingers in range(6):
        for palm in ("front", "back", "side"):
            for handed in ("L", "R"):
                for r in range(8):
                    lines.append(
                        f"GLYPH hands:h{fingers}-{palm}-{handed}-{r} BASE hands:h{fingers}-{palm}-R-0 "
                        f"FACETS handedness={handed},fingers={fingers},palm={palm},rotation={r} "
                        f'PATH "{hand_path(fingers, handed, r, palm)}"'
                    )
    for d in range(8):
        for plane in ("wall", "floor"):
            for head in ("single", "double"):
                tip = rot((50, 15), d)
                tail = rot((50, 85), d)
                l = rot((42, 27), d)
                rr = rot((58, 27), d)
                parts = [poly([tail, tip], closed=False), poly([l, tip, rr], closed=False)]
                if head == "double":
                    parts.append(poly([rot((42, 37), d), rot((50, 25), d), rot((58, 37), d)], closed=False))
                if plane == "floor":
                    parts.append(poly([rot((45, 85), d), rot((55, 85), d)], closed=False))
                lines.append(
                    f"GLYPH arms:{plane}-{head}-{d} BASE arms:{plane}-{head}-0 "
                    f"FACETS direction={d},plane={plane},arrowhead={head} "
                    f'PATH "{" ".join(parts)}"'
                )
    marks = {
        "period": "M45 70 L55 70 L55 80 L45 80 Z",
        "comma": "M48 70 L55 70 L50 85 Z",
        "question": "M40 30 Q50 15 60 30 Q60 40 50 50 L50 60 M48 70 L52 70 L52 74 L48 74 Z",
        "exclamation": "M48 20 L52 20 L51 60 L49 60 Z M48 70 L52 70 L52 74 L48 74 Z",
        "colon": "M46 35 L54 35 L54 43 L46 43 Z M46 65 L54 65 L54 73 L46 73 Z",
    }
    for mark, path in marks.items():
        lines.append(f'GLYPH punctuation:{mark} FACETS mark={mark} PATH "{path}"')
    kinds = {
        "touch": "M42 42 L58 58 M58 42 L42 58",
        "grasp": "M40 40 L60 40 L60 60 L40 60 Z M42 42 L58 58",
        "strike": "M40 40 L60 60 M60 40 L40 60 M35 50 L65 50",
        "brush": "M35 50 Q50 35 65 50 Q50 65 35 50 Z",
        "rub": "M35 50 Q42 40 50 50 Q58 60 65 50",
        "between": "M50 35 L50 65 M40 50 L60 50",
    }
    for kind, path in kinds.items():
        for rep in (1, 2):
            p = path if rep == 1 else path + " M45 75 L55 75"
            lines.append(
                f"GLYPH contact:{kind}-{rep} BASE contact:{kind}-1 FACETS kind={kind},repeat={rep} "
                f'PATH "{p}"'
            )
    return "\n".join(lines) + "\n"


if __name__ == "__main__":
    with open(os.path.join(OUT, "fixture.catalog"), "w") as f:
        f.write(fixture())
    with open(os.path.join(OUT, "sample.catalog"), "w") as f:
        f.write(sample())
