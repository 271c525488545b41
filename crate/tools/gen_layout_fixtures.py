#!/usr/bin/env python3
"""Generates the golden layout fixtures.

Each fixture is a document in the restricted dialect plus the border-box
geometry the reference implementation assigns to it. The engine's parity
test replays the documents and compares against the stored JSON.

Usage: gen_layout_fixtures.py  (writes crates/dockit/tests/fixtures/layout)
"""

import json
import pathlib
import sys

import layout_oracle

OUT_DIR = pathlib.Path(__file__).resolve().parent.parent / "crates" / "dockit" / "tests" / "fixtures" / "layout"


def doc(style, body):
    return "<html>\n<head>\n<style>\n%s</style>\n</head>\n<body>\n%s</body>\n</html>\n" % (style, body)


FIXTURES = [
    {
        "name": "column-stack",
        "width": 360,
        "height": 640,
        "html": doc(
            """body { display: flex; flex-direction: column; width: 360px; height: 640px; padding: 20px; gap: 10px; }
p { margin: 0; }
""",
            """<p>Morning pages</p>
<p>The notebook opens with three short lines about the weather and one about the bus that never came.</p>
<p>Later entries grow longer, looping through errands, half plans, and the names of birds seen from the kitchen window.</p>
<p>End of week.</p>
""",
        ),
    },
    {
        "name": "row-between",
        "width": 800,
        "height": 240,
        "html": doc(
            """body { display: flex; flex-direction: row; width: 800px; height: 240px; justify-content: space-between; padding: 24px; }
div { display: flex; width: 140px; height: 64px; }
p { margin: 0; }
""",
            """<div><p>alpha</p></div>
<div><p>bravo</p></div>
<div><p>charlie</p></div>
""",
        ),
    },
    {
        "name": "hero-media",
        "width": 480,
        "height": 360,
        "html": doc(
            """body { display: flex; flex-direction: column; width: 480px; height: 360px; padding: 16px; gap: 12px; }
.title { font-size: 24px; margin: 0 0 4px 0; }
.media { display: flex; flex-direction: row; gap: 14px; }
.media img { margin: 4px; }
.media p { margin: 0; }
""",
            """<p class="title">Tidal flats at dusk</p>
<div class="media">
<img src="https://picsum.photos/160/120" alt="mudflats under low light">
<p>Wading birds work the channels while the tide slides out, leaving a sheen the color of pewter.</p>
</div>
""",
        ),
    },
    {
        "name": "grid-cards",
        "width": 720,
        "height": 520,
        "html": doc(
            """body { display: grid; grid-template-columns: 1fr 1fr; gap: 16px; width: 720px; height: 520px; padding: 20px; }
div { display: flex; flex-direction: column; padding: 12px; gap: 6px; }
.head { font-size: 18px; margin: 0; }
p { margin: 0; }
""",
            """<div><p class="head">Soil</p><p>Loam drains well yet holds enough water for deep roots.</p></div>
<div><p class="head">Seed</p><p>Start brassicas indoors six weeks before the last frost date.</p></div>
<div><p class="head">Sun</p><p>Leafy greens tolerate shade that would stall any fruiting crop.</p></div>
<div><p class="head">Water</p><p>An inch a week, more in sand, less in clay.</p></div>
""",
        ),
    },
    {
        "name": "track-zoo",
        "width": 900,
        "height": 600,
        "html": doc(
            """body { display: grid; grid-template-columns: 120px 15% repeat(2, 1fr) auto; gap: 12px 8px; width: 900px; height: 600px; padding: 10px; }
div { display: flex; padding: 8px; }
p { margin: 0; }
""",
            """<div><p>fixed</p></div>
<div><p>fifteen</p></div>
<div><p>first fraction column with a longer sentence inside</p></div>
<div><p>second fraction</p></div>
<div><p>auto col</p></div>
<div><p>row two a</p></div>
<div><p>row two b</p></div>
<div><p>row two c</p></div>
<div><p>row two d</p></div>
<div><p>tail</p></div>
""",
        ),
    },
    {
        "name": "narrow-wrap",
        "width": 240,
        "height": 480,
        "html": doc(
            """body { display: flex; flex-direction: column; width: 240px; height: 480px; padding: 12px; gap: 8px; }
p { margin: 0; }
""",
            """<p>The long corridor smelled of wax and chalk dust, and every footstep came back twice from the far wall.</p>
<p>Nobody remembered who had hung the map, but its coastlines had been wrong for thirty years and nobody minded.</p>
""",
        ),
    },
    {
        "name": "nested-split",
        "width": 640,
        "height": 400,
        "html": doc(
            """body { display: flex; flex-direction: column; width: 640px; height: 400px; padding: 16px; gap: 12px; }
.row { display: flex; flex-direction: row; gap: 12px; }
.pane { display: flex; flex-direction: column; flex: 1; padding: 10px; gap: 4px; }
p { margin: 0; }
""",
            """<p>Ledger, April</p>
<div class="row">
<div class="pane"><p>Income</p><p>Stall receipts held steady through the rain.</p></div>
<div class="pane"><p>Outgoing</p><p>Twine, crates, and the new scale tray.</p></div>
</div>
<div class="row">
<div class="pane"><p>Notes</p><p>Ask about the corner pitch for May.</p></div>
<div class="pane"><p>Carry</p><p>Nothing owed either way.</p></div>
</div>
""",
        ),
    },
    {
        "name": "center-stage",
        "width": 500,
        "height": 500,
        "html": doc(
            """body { display: flex; flex-direction: row; width: 500px; height: 500px; justify-content: center; align-items: center; }
div { display: flex; width: 220px; height: 120px; padding: 14px; }
p { margin: 0; }
""",
            """<div><p>One quiet card floating in the middle of the page.</p></div>
""",
        ),
    },
    {
        "name": "grow-partition",
        "width": 600,
        "height": 200,
        "html": doc(
            """body { display: flex; flex-direction: row; width: 600px; height: 200px; padding: 10px; }
div { display: flex; height: 160px; padding: 6px; }
.a { flex: 1; }
.b { flex: 2; }
.c { flex: 3; }
p { margin: 0; }
""",
            """<div class="a"><p>one part</p></div>
<div class="b"><p>two parts</p></div>
<div class="c"><p>three parts</p></div>
""",
        ),
    },
    {
        "name": "shrink-squeeze",
        "width": 400,
        "height": 160,
        "html": doc(
            """body { display: flex; flex-direction: row; width: 400px; height: 160px; }
div { display: flex; width: 200px; height: 120px; padding: 4px; }
.stiff { flex-shrink: 1; }
.soft { flex-shrink: 2; }
p { margin: 0; }
""",
            """<div class="stiff"><p>keeps more</p></div>
<div class="soft"><p>gives more</p></div>
<div class="stiff"><p>keeps more</p></div>
""",
        ),
    },
    {
        "name": "basis-bench",
        "width": 560,
        "height": 220,
        "html": doc(
            """body { display: flex; flex-direction: row; width: 560px; height: 220px; gap: 10px; padding: 12px; }
div { display: flex; height: 100px; padding: 6px; }
.px { flex-basis: 120px; }
.pct { flex-basis: 25%; }
.nat { width: 90px; }
p { margin: 0; }
""",
            """<div class="px"><p>one twenty</p></div>
<div class="pct"><p>quarter</p></div>
<div class="nat"><p>ninety</p></div>
""",
        ),
    },
    {
        "name": "margin-menagerie",
        "width": 420,
        "height": 420,
        "html": doc(
            """body { display: flex; flex-direction: column; width: 420px; height: 420px; padding: 8px; }
div { display: flex; height: 60px; }
.four { margin: 6px 18px 10px 30px; }
.two { margin: 12px 24px; }
.one { margin-left: 48px; margin-top: 4px; }
p { margin: 0; }
""",
            """<div class="four"><p>four values</p></div>
<div class="two"><p>two values</p></div>
<div class="one"><p>left only</p></div>
""",
        ),
    },
    {
        "name": "percent-ladder",
        "width": 640,
        "height": 480,
        "html": doc(
            """body { display: flex; flex-direction: column; width: 640px; height: 480px; padding: 16px; }
.outer { display: flex; flex-direction: column; width: 75%; height: 50%; padding: 5%; }
.inner { display: flex; width: 50%; height: 40%; padding: 10px; }
p { margin: 0; width: 100%; }
""",
            """<div class="outer">
<div class="inner"><p>half of three quarters</p></div>
</div>
""",
        ),
    },
    {
        "name": "type-scale",
        "width": 480,
        "height": 640,
        "html": doc(
            """body { display: flex; flex-direction: column; width: 480px; height: 640px; padding: 1.5rem; gap: 0.5rem; font-size: 18px; }
.lede { font-size: 1.5em; margin: 0; }
.section { display: flex; flex-direction: column; font-size: 20px; padding: 0.6em; gap: 0.2em; }
.section p { font-size: 0.8em; margin: 0; line-height: 1.4; }
p { margin: 0; }
""",
            """<p class="lede">Field guide to porch lights</p>
<div class="section">
<p>Warm bulbs gather moths in loose spirals that tighten near midnight.</p>
<p>Cold bulbs cast harder shadows and harder opinions.</p>
</div>
<p>Counted at dusk, recounted at dawn.</p>
""",
        ),
    },
    {
        "name": "bordered-panels",
        "width": 520,
        "height": 300,
        "html": doc(
            """body { display: flex; flex-direction: row; width: 520px; height: 300px; gap: 14px; padding: 10px; }
div { display: flex; padding: 8px; }
.thick { border: 4px solid #222; width: 140px; }
.topline { border-top: 10px solid #888; width: 140px; }
.uneven { border-width: 2px 6px; border-top-width: 1px; width: 140px; }
p { margin: 0; }
""",
            """<div class="thick"><p>ring</p></div>
<div class="topline"><p>cap</p></div>
<div class="uneven"><p>mixed</p></div>
""",
        ),
    },
    {
        "name": "leading-variants",
        "width": 400,
        "height": 500,
        "html": doc(
            """body { display: flex; flex-direction: column; width: 400px; height: 500px; padding: 14px; gap: 10px; }
.airy { line-height: 1.8; margin: 0; }
.pct { line-height: 150%; margin: 0; }
.fixed { line-height: 30px; margin: 0; }
""",
            """<p class="airy">Lines set loose enough that a pencil note fits between any two of them without crowding.</p>
<p class="pct">A percentage leading lands between the loose and the default, close set but still readable.</p>
<p class="fixed">Thirty pixel leading regardless of the face, the metal type answer to a digital question.</p>
""",
        ),
    },
    {
        "name": "grid-in-flex",
        "width": 760,
        "height": 560,
        "html": doc(
            """body { display: flex; flex-direction: column; width: 760px; height: 560px; padding: 18px; gap: 14px; }
.bar { display: flex; flex-direction: row; justify-content: space-between; height: 48px; padding: 8px; }
.board { display: grid; grid-template-columns: 1fr 1fr 1fr; grid-template-rows: 120px 120px; gap: 10px; }
.board div { display: flex; padding: 10px; }
p { margin: 0; }
""",
            """<div class="bar"><p>Dispatch</p><p>updated hourly</p></div>
<div class="board">
<div><p>bay one</p></div>
<div><p>bay two</p></div>
<div><p>bay three</p></div>
<div><p>bay four</p></div>
<div><p>bay five</p></div>
<div><p>bay six</p></div>
</div>
<p>All lanes clear by evening.</p>
""",
        ),
    },
    {
        "name": "overflow-tall",
        "width": 320,
        "height": 240,
        "html": doc(
            """body { display: flex; flex-direction: column; width: 320px; height: 240px; padding: 10px; gap: 8px; }
div { display: flex; height: 150px; padding: 6px; flex-shrink: 0; }
p { margin: 0; }
""",
            """<div><p>first shelf</p></div>
<div><p>second shelf</p></div>
<div><p>third shelf, well past the fold</p></div>
""",
        ),
    },
    {
        "name": "auto-body",
        "width": 600,
        "height": 400,
        "html": doc(
            """body { margin: 24px; padding: 12px; }
p { margin: 6px 0; }
""",
            """<p>No declared size on the page root, so the frame comes from the viewport and the margins.</p>
<p>Height settles wherever the last line ends.</p>
""",
        ),
    },
    {
        "name": "spread-modes",
        "width": 700,
        "height": 180,
        "html": doc(
            """body { display: flex; flex-direction: column; width: 700px; height: 180px; gap: 6px; }
.around { display: flex; flex-direction: row; justify-content: space-around; height: 52px; }
.evenly { display: flex; flex-direction: row; justify-content: space-evenly; height: 52px; }
.tail { display: flex; flex-direction: row; justify-content: flex-end; height: 52px; }
.around div, .evenly div, .tail div { display: flex; width: 90px; height: 40px; }
p { margin: 0; }
""",
            """<div class="around"><div><p>a</p></div><div><p>b</p></div><div><p>c</p></div></div>
<div class="evenly"><div><p>d</p></div><div><p>e</p></div><div><p>f</p></div></div>
<div class="tail"><div><p>g</p></div><div><p>h</p></div></div>
""",
        ),
    },
    {
        "name": "image-forms",
        "width": 560,
        "height": 420,
        "html": doc(
            """body { display: flex; flex-direction: column; width: 560px; height: 420px; padding: 12px; gap: 10px; }
img { margin: 2px; }
.pin { align-self: flex-start; }
""",
            """<img src="https://picsum.photos/300/200" alt="stretched to the column width">
<img class="pin" src="image_1_160x120.png" alt="kept at its natural size">
<img src="https://picsum.photos/200/150" width="100" alt="attr width with url height">
""",
        ),
    },
    {
        "name": "row-tallest",
        "width": 680,
        "height": 260,
        "html": doc(
            """body { display: flex; flex-direction: column; width: 680px; height: 260px; padding: 12px; }
.row { display: flex; flex-direction: row; gap: 10px; }
.row div { display: flex; width: 210px; padding: 8px; }
p { margin: 0; }
""",
            """<div class="row">
<div><p>short</p></div>
<div><p>this middle cell carries a much longer remark that wraps over several lines and sets the height for the whole row</p></div>
<div><p>also short</p></div>
</div>
""",
        ),
    },
    {
        "name": "cascade-check",
        "width": 440,
        "height": 300,
        "html": doc(
            """body { display: flex; flex-direction: column; width: 440px; height: 300px; padding: 10px; gap: 6px; }
div { display: flex; height: 40px; }
div { width: 100px; }
.wide { width: 140px; }
#widest { width: 180px; }
.outer p { margin: 0; }
p { margin: 0; }
""",
            """<div><p>tag width</p></div>
<div class="wide"><p>class width</p></div>
<div class="wide" id="widest"><p>id width</p></div>
<div class="wide" style="width: 220px"><p>inline width</p></div>
""",
        ),
    },
    {
        "name": "end-align",
        "width": 540,
        "height": 320,
        "html": doc(
            """body { display: flex; flex-direction: row; width: 540px; height: 320px; justify-content: flex-end; align-items: flex-end; padding: 16px; gap: 12px; }
div { display: flex; width: 110px; padding: 6px; }
.low { height: 80px; }
.mid { height: 140px; align-self: center; }
.high { height: 200px; align-self: flex-start; }
p { margin: 0; }
""",
            """<div class="low"><p>low</p></div>
<div class="mid"><p>mid</p></div>
<div class="high"><p>high</p></div>
""",
        ),
    },
]


def main():
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    names = set()
    for fixture in FIXTURES:
        name = fixture["name"]
        if name in names:
            raise SystemExit(f"duplicate fixture name {name}")
        names.add(name)
        html = fixture["html"]
        result = layout_oracle.lay_out(html, float(fixture["width"]), float(fixture["height"]))
        (OUT_DIR / f"{name}.html").write_text(html, encoding="utf-8")
        with open(OUT_DIR / f"{name}.json", "w", encoding="utf-8") as f:
            json.dump(result, f, indent=1)
            f.write("\n")
        leaves = sum(1 for b in result["boxes"] if b["tag"] in ("p", "img"))
        print(
            f"{name:18s} boxes={len(result['boxes']):3d} leaves={leaves:3d} "
            f"doc_height={result['document_height']:.2f}"
        )
    print(f"{len(FIXTURES)} fixtures written to {OUT_DIR}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
