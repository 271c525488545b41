#!/usr/bin/env python3
"""Diffs engine layout output against the reference implementation.

Usage: compare_layout.py DOC.html WIDTH HEIGHT ENGINE.json

ENGINE.json is the box tree the `dockit layout` command prints. Boxes are
compared in preorder; any edge differing by more than the tolerance in
max(2px, 1% of the box's edge) terms is reported.
"""

import json
import sys

import layout_oracle


def main():
    doc_path, width, height, engine_path = (
        sys.argv[1],
        float(sys.argv[2]),
        float(sys.argv[3]),
        sys.argv[4],
    )
    with open(doc_path, encoding="utf-8") as f:
        src = f.read()
    expected = layout_oracle.lay_out(src, width, height)
    with open(engine_path, encoding="utf-8") as f:
        engine = json.load(f)

    got = [
        {
            "tag": b["tag"],
            "x": b["border_box"]["x"],
            "y": b["border_box"]["y"],
            "width": b["border_box"]["width"],
            "height": b["border_box"]["height"],
        }
        for b in engine["boxes"]
    ]
    want = expected["boxes"]
    if len(got) != len(want):
        print(f"box count differs: engine {len(got)} vs reference {len(want)}")
        return 1

    bad = 0
    for g, w in zip(got, want):
        if g["tag"] != w["tag"]:
            print(f"tag mismatch at {w['path']}: engine {g['tag']} vs {w['tag']}")
            bad += 1
            continue
        tol_w = max(2.0, 0.01 * w["width"])
        tol_h = max(2.0, 0.01 * w["height"])
        for key, tol in (("x", tol_w), ("width", tol_w), ("y", tol_h), ("height", tol_h)):
            delta = abs(g[key] - w[key])
            if delta > tol:
                print(
                    f"{w['path']} {key}: engine {g[key]:.6f} vs reference {w[key]:.6f}"
                    f" (delta {delta:.6f})"
                )
                bad += 1

    doc_h = max(
        (b["border_box"]["y"] + b["border_box"]["height"] for b in engine["boxes"][1:]),
        default=0.0,
    )
    doc_h = max(doc_h, engine["boxes"][0]["border_box"]["height"])
    ref_h = expected["document_height"]
    if abs(doc_h - ref_h) > 2.0:
        print(f"document height: engine {doc_h} vs reference {ref_h}")
        bad += 1

    if bad == 0:
        print(f"ok: {len(got)} boxes agree, document height {ref_h:.2f}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
