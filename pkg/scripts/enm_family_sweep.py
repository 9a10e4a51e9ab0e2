"""Spectrum of E_{n,m} under the three group choices, for small n and m.

With the full rotation the spectrum is one point below one circle per
vertex orbit; fixing the loops at v0 breaks essential centrality as soon
as the rotation is nontrivial.
"""
import argparse
from dataclasses import dataclass

from ssgraph import corpus
from ssgraph.errors import SSGraphError
from ssgraph.io import build_system
from ssgraph.spectrum import prim_spectrum


@dataclass
class FamilyConfig:
    max_n: int = 4
    max_m: int = 3


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=FamilyConfig.max_n)
    ap.add_argument("--max-m", type=int, default=FamilyConfig.max_m)
    cfg = FamilyConfig(**vars(ap.parse_args()))
    for n in range(1, cfg.max_n + 1):
        for m in range(1, cfg.max_m + 1):
            for swap in ("none", "full", "vertices"):
                s = build_system(corpus.enm(n, m, swap))
                try:
                    text = prim_spectrum(s).summary()
                except SSGraphError as exc:
                    text = f"refused: {type(exc).__name__} witness {exc.witness}"
                print(f"E_{n},{m} {swap:8s} |G|={s.order}: {text}")


if __name__ == "__main__":
    main()
