"""Maximal G-tails of rank-one systems, G-circuits and breaking vertices."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .action import SelfSimilarSystem
from .errors import NotATail, NotSingular
from .graph import Path

BRUTE_FORCE_LIMIT = 15


def tail_key(M) -> tuple:
    """Canonical sort key: size first, then the sorted names."""
    return (len(M), tuple(sorted(M)))


def fmt_set(M) -> str:
    return "{" + ",".join(sorted(M)) + "}"


@dataclass(frozen=True)
class GCircuit:
    element: int
    path: Path
    no_entry: bool = True

    def __len__(self):
        return len(self.path)


@dataclass(frozen=True)
class GTail:
    vertices: frozenset
    kind: str                     # "L", "M0" or "Minf"
    period: int | None = None
    circuit: GCircuit | None = None
    witness_orbit: frozenset | None = None
    minimal: tuple = field(default=(), compare=False)

    def __str__(self):
        s = f"{self.kind}{fmt_set(self.vertices)}"
        return s + (f" n={self.period}" if self.period else "")

    def __contains__(self, v):
        return v in self.vertices


def tail_violation(sys: SelfSimilarSystem, M) -> str | None:
    """Which clause of the maximal G-tail definition M fails, or None."""
    gr = sys.graph
    M = frozenset(M)
    if not M:
        return "empty"
    if not sys.is_invariant(M):
        return "not G-invariant"
    if gr.up_closure(M) != M:
        return "(i) not upward closed"
    for v in M:
        if not gr.is_singular(v) and not gr.edges_into(v, M):
            return f"(ii) regular vertex {v} receives no edge from M"
    for v in M:
        bv = gr.below(v) & M
        for w in M:
            bw = gr.below(w) & M
            if not any(sys.act_vertex(g, u) in bw for u in bv for g in sys.elements):
                return f"(iii) no common lower bound for {v} and {w}"
    return None


def is_maximal_g_tail(sys: SelfSimilarSystem, M) -> bool:
    return tail_violation(sys, M) is None


def _generated(sys: SelfSimilarSystem, seed) -> frozenset:
    if isinstance(seed, Path):
        gr = sys.graph
        vs = {seed.vertex} | {gr.edge(n).source for n, _ in seed.edges}
    elif isinstance(seed, str):
        vs = {seed}
    else:
        vs = set(seed)
    return sys.graph.up_closure(sys.saturate(vs))


def _classify(sys: SelfSimilarSystem, M: frozenset) -> GTail:
    gr = sys.graph
    minimal = tuple(sorted(v for v in M if all(gr.ge(w, v) for w in gr.below(v) & M)))
    circuits = g_circuits_without_entry(sys, M)
    if circuits:
        n = min(len(c) for c in circuits)
        shortest = min((c for c in circuits if len(c) == n), key=lambda c: (c.path, c.element))
        return GTail(M, "L", n, shortest, None, minimal)
    for v in minimal:
        if not gr.edges_into(v, M):
            return GTail(M, "M0", None, None, sys.orbit(v), minimal)
    return GTail(M, "Minf", None, None, None, minimal)


def mt_generated_by(sys: SelfSimilarSystem, seed) -> GTail:
    """The set of w with w >= g.u for u in the seed; checked to be a tail."""
    M = _generated(sys, seed)
    why = tail_violation(sys, M)
    if why is not None:
        raise NotATail(f"{fmt_set(M)} is not a maximal G-tail: {why}", witness=sorted(M))
    return _classify(sys, M)


def mt(sys: SelfSimilarSystem, v: str) -> frozenset:
    """MT_G(v) as a bare vertex set (always a tail for a single vertex)."""
    key = ("mt", v)
    r = sys._cache.get(key)
    if r is None:
        r = _generated(sys, {v})
        sys._cache[key] = r
    return r


def candidate_tails(sys: SelfSimilarSystem) -> list:
    gr = sys.graph
    seeds = [comp for comp in gr.sccs if gr.scc_has_cycle(comp)]
    seeds += [(v,) for v in gr.vertices if gr.is_singular(v)]
    found = {_generated(sys, s) for s in seeds}
    return sorted(found, key=tail_key)


def enumerate_maximal_g_tails(sys: SelfSimilarSystem, verify: bool = True) -> tuple:
    """All maximal G-tails, sorted by (size, names).

    Candidates are the G-saturated upward closures of SCCs carrying a
    cycle and of singular vertices.  For at most 15 vertices the result is
    cross-checked against the subset filter.
    """
    key = ("tails", verify)
    if key in sys._cache:
        return sys._cache[key]
    cands = [M for M in candidate_tails(sys) if is_maximal_g_tail(sys, M)]
    if verify and len(sys.graph.vertices) <= BRUTE_FORCE_LIMIT:
        from .oracle import maximal_tails_bruteforce
        brute = sorted(maximal_tails_bruteforce(sys), key=tail_key)
        if brute != cands:
            raise AssertionError(f"tail enumeration disagrees with subset filter: {cands} vs {brute}")
    out = tuple(_classify(sys, M) for M in cands)
    sys._cache[key] = out
    return out


def g_circuits_without_entry(sys: SelfSimilarSystem, M) -> tuple:
    """No-entry G-circuits (g, gamma) inside M, one walk per start vertex.

    Within {v in M : |vE^1 M| = 1} the walk is deterministic; each time it
    reaches a vertex g.r(gamma) a circuit is emitted.
    """
    gr = sys.graph
    M = frozenset(M)
    det = {}
    for v in M:
        es = gr.edges_into(v, M)
        if len(es) == 1 and not es[0].omega:
            det[v] = es[0]
    bound = len(gr.vertices) * sys.order
    out = set()
    for start in sorted(det):
        si = gr.vindex(start)
        cur = start
        edges = []
        for _ in range(bound):
            e = det.get(cur)
            if e is None:
                break
            edges.append((e.name, 0))
            cur = e.source
            ci = gr.vindex(cur)
            for g in sys.elements:
                if sys.vperm[g][si] == ci:
                    out.add(GCircuit(g, Path(start, tuple(edges))))
    circuits = tuple(sorted(out, key=lambda c: (len(c), c.path, c.element)))
    if circuits:
        n = len(circuits[0])
        bad = [c for c in circuits if len(c) % n]
        if bad:
            raise AssertionError(f"circuit length {len(bad[0])} is not a multiple of {n}")
    return circuits


def g_period(sys: SelfSimilarSystem, M) -> int | None:
    cs = g_circuits_without_entry(sys, M)
    return len(cs[0]) if cs else None


def breaking_vertices(sys: SelfSimilarSystem) -> tuple:
    gr = sys.graph
    out = []
    for v in gr.vertices:
        if gr.is_singular(v):
            n = gr.count_into(v, mt(sys, v))
            if 0 < n < math.inf:
                out.append(v)
    return tuple(out)


def sing0(sys: SelfSimilarSystem) -> tuple:
    gr = sys.graph
    return tuple(v for v in gr.vertices if gr.is_singular(v) and gr.count_into(v, mt(sys, v)) == 0)


def classify_singular_vertex(sys: SelfSimilarSystem, v: str) -> int:
    """1: no edges from MT_G(v); 2: infinitely many; 3/4: breaking vertex
    whose tail has / lacks a no-entry circuit."""
    gr = sys.graph
    if not gr.is_singular(v):
        raise NotSingular(f"{v} is regular", witness=v)
    M = mt(sys, v)
    n = gr.count_into(v, M)
    if n == 0:
        return 1
    if n == math.inf:
        return 2
    return 3 if g_circuits_without_entry(sys, M) else 4


def g_orbits(sys: SelfSimilarSystem, vs) -> tuple:
    """Partition vs into G-orbits, canonically sorted."""
    seen = set()
    out = []
    for v in sorted(vs):
        if v not in seen:
            orb = sys.orbit(v)
            seen |= orb
            out.append(tuple(sorted(orb)))
    return tuple(out)
