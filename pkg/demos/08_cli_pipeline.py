"""
Driving the whole pipeline through the CLI
===========================================

Runs build -> analyze -> plot -> export on two small synthetic flow
matrices, all through the `tourflow` command entry point, into a
temporary directory.
"""

import tempfile
from pathlib import Path

import numpy as np

from tourflow.cli import main

workdir = Path(tempfile.mkdtemp(prefix="tourflow-demo-"))
codes = tuple(f"{a}{b}" for a in "AB" for b in "ABCD")
rng = np.random.default_rng(7)

# Two seasons of the same network, second with perturbed weights.
for name, wobble in (("a", 0), ("b", 25)):
    lines = ["origin,destination,count"]
    for i, origin in enumerate(codes):
        for j, dest in enumerate(codes):
            if origin != dest:
                weight = 300 // (1 + (j - i) % len(codes)) + int(rng.integers(0, wobble + 1))
                lines.append(f"{origin},{dest},{weight}")
    (workdir / f"flows_{name}.csv").write_text("\n".join(lines) + "\n")

# Synthetic codes need their own region map (the packaged one covers
# the real country codes).
regions = ["country,region"]
regions += [f"{code},{'East' if i % 2 else 'West'}" for i, code in enumerate(codes)]
(workdir / "regions.csv").write_text("\n".join(regions) + "\n")

config = [
    "--set", f"dataset_a_flows={workdir / 'flows_a.csv'}",
    "--set", f"dataset_b_flows={workdir / 'flows_b.csv'}",
    "--set", f"region_map={workdir / 'regions.csv'}",
    "--set", f"output_dir={workdir / 'out'}",
    "--set", "ensemble_size=50",
    "--set", "n_clusters=3",
]

assert main(["build", *config]) == 0
assert main(["analyze", *config]) == 0

out = workdir / "out"
assert main(["plot", "--report", str(out / "correlations.csv"),
             "--kind", "strip", "--out", str(out / "correlations.svg")]) == 0
assert main(["plot", "--report", str(out / "sharediff_out.csv"),
             "--kind", "heatmap", "--out", str(out / "sharediff.svg")]) == 0
assert main(["plot", "--report", str(out / "motifs_a_out_3.csv"),
             "--kind", "bar", "--out", str(out / "motifs.svg")]) == 0
assert main(["export", "--graph", str(out / "graph_a.csv"),
             "--format", "dot", "--out", str(out / "graph_a.dot")]) == 0

print()
print(f"bundle in {out}:")
for path in sorted(out.iterdir()):
    print(f"  {path.name}")
