"""Regenerate the example system files in systems/ from the corpus builders."""
import json
from pathlib import Path

import yaml

from ssgraph import corpus

OUT = Path(__file__).resolve().parent.parent / "systems"

FILES = {
    "e22_z2.json": corpus.e22("full"),
    "e22_fixed.json": corpus.e22("vertices"),
    "e22_trivial.json": corpus.e22("none"),
    "e2_omega.json": corpus.e2_omega(),
    "single_loop.json": corpus.single_loop(),
    "rose2.json": corpus.rose(2),
    "breaking.json": corpus.breaking_example(4),
    "nonfree_rose.json": corpus.nonfree_rose(),
    "adding_machine.json": corpus.adding_machine(),
    "torus.json": corpus.torus(),
    "c2xc3.json": corpus.cycle_product(2, 3),
    "layered.json": corpus.layered_2graph(),
    "swapped_torus.json": corpus.swapped_torus(),
}


def main():
    OUT.mkdir(exist_ok=True)
    for name, spec in FILES.items():
        (OUT / name).write_text(json.dumps(spec, indent=2) + "\n")
    spec = corpus.e22("full")
    spec["options"] = {"closureCap": 100, "oracleDepth": 12, "omegaWindow": 3}
    (OUT / "e22_z2.yaml").write_text(yaml.safe_dump(spec, sort_keys=False))
    print(f"wrote {len(FILES) + 1} files to {OUT}")


if __name__ == "__main__":
    main()
