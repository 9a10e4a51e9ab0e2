"""Compare the structural algorithms with the brute-force oracle on random systems.

Trivial-group digraphs check tails and the quasi-orbit order; random
self-similar systems check pseudo-freeness.  Prints one line of counts
per family and lists any disagreement.
"""
import argparse
import random
import time
from dataclasses import dataclass

from ssgraph import corpus
from ssgraph.action import is_pseudo_free
from ssgraph.errors import ClosureCapExceeded
from ssgraph.io import build_system
from ssgraph.oracle import maximal_tails_bruteforce, pseudo_free_bruteforce, quasi_orbit_order_oracle
from ssgraph.spectrum import quasi_orbit_space
from ssgraph.tails import enumerate_maximal_g_tails, tail_key


@dataclass
class SweepConfig:
    seed: int = 0
    digraphs: int = 200
    max_vertices: int = 6
    max_edges: int = 10
    omega_rate: float = 0.15
    self_similar: int = 200
    cap: int = 300
    depth: int = 12
    window: int = 3


def sweep_digraphs(cfg: SweepConfig, rng: random.Random):
    bad = []
    for i in range(cfg.digraphs):
        spec = corpus.random_digraph(rng, cfg.max_vertices, cfg.max_edges, cfg.omega_rate)
        s = build_system(spec)
        tails = [t.vertices for t in enumerate_maximal_g_tails(s)]
        if tails != sorted(maximal_tails_bruteforce(s), key=tail_key):
            bad.append((i, "tails", spec))
            continue
        q = quasi_orbit_space(s)
        pts = [(p.kind, p.tail, p.vertex) for p in q.points]
        if quasi_orbit_order_oracle(s, pts, cfg.depth, cfg.window) != q.leq:
            bad.append((i, "order", spec))
    return bad


def sweep_self_similar(cfg: SweepConfig, rng: random.Random):
    bad, capped, nonfree = [], 0, 0
    for i in range(cfg.self_similar):
        spec = corpus.random_self_similar(rng, 3, 6, rng.choice([1, 2]))
        try:
            s = build_system(spec, cap=cfg.cap)
        except ClosureCapExceeded:
            capped += 1
            continue
        brute, _ = pseudo_free_bruteforce(s, depth=10)
        nonfree += not brute
        if bool(is_pseudo_free(s)) != brute:
            bad.append((i, "pseudo-free", spec))
    return bad, capped, nonfree


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(SweepConfig()).items():
        ap.add_argument("--" + name.replace("_", "-"), type=type(default), default=default)
    cfg = SweepConfig(**vars(ap.parse_args()))
    rng = random.Random(cfg.seed)
    t0 = time.perf_counter()
    bad = sweep_digraphs(cfg, rng)
    print(f"digraphs: {cfg.digraphs} checked, {len(bad)} disagreements ({time.perf_counter() - t0:.1f}s)")
    t0 = time.perf_counter()
    bad2, capped, nonfree = sweep_self_similar(cfg, rng)
    print(f"self-similar: {cfg.self_similar - capped} closed, {capped} over cap, {nonfree} not pseudo-free, "
          f"{len(bad2)} disagreements ({time.perf_counter() - t0:.1f}s)")
    for i, what, spec in bad + bad2:
        print(f"  #{i} {what}: {spec}")
    return 1 if bad or bad2 else 0


if __name__ == "__main__":
    raise SystemExit(main())
