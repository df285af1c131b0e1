"""
Nested solid tori for the first two stages
==========================================

Embeds the depth-2 tree of C(s) for s_i = i (a root torus, its Bing pair,
the Whitehead tori of the stage-1 nodes and their Bing pairs), certifies it
numerically and writes an OBJ mesh plus a JSON dump of the core curves.

    python demos/03_nested_tori.py [output-dir]
"""

import sys
from pathlib import Path

from bwcantor import Affine, cs_spec
from bwcantor.geometry import GeometryParams, embed_stage_tree, export_curves, export_mesh, verify_embedding

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo-output")
out.mkdir(parents=True, exist_ok=True)

params = GeometryParams()
tori = embed_stage_tree(cs_spec(Affine(1, 0)), 2, params)
for t in tori:
    print(f"{t.name:22s} level {t.level}  radius {t.radius:.3e}  samples {len(t.core)}")

report = verify_embedding(tori)
for check in report.checks():
    worst = min(report.by_check(check), key=lambda r: r.margin)
    print(f"{check:22s} worst margin {worst.margin:.3e} ({worst.unit}, {worst.subject})")
print("all checks pass:", report.passed)

export_mesh(tori, out / "bw_depth2.obj", params.tube_segments)
export_curves(tori, out / "bw_depth2_curves.json", {"seed": "affine:1,0", "depth": 2})
print("wrote", out / "bw_depth2.obj")
