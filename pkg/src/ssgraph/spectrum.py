"""Quasi-orbit space and primitive spectrum of rank-one systems."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .action import SelfSimilarSystem, is_pseudo_free, trivially_acting_pairs, vertex_stabilizer
from .errors import EssentialCentralityViolated, NotPseudoFree
from .tails import (
    breaking_vertices, enumerate_maximal_g_tails, fmt_set, g_circuits_without_entry, g_orbits, mt, sing0,
)


@dataclass(frozen=True)
class QuasiOrbitPoint:
    kind: str            # "L", "Minf", "M0" or "BV"
    tail: frozenset
    vertex: str | None = None     # representative for vertex-type points
    period: int | None = None

    @property
    def vertex_type(self) -> bool:
        return self.kind in ("M0", "BV")

    def label(self) -> str:
        if self.kind == "BV":
            return f"bv[{self.vertex}]"
        return f"{self.kind}{fmt_set(self.tail)}"


@dataclass(frozen=True)
class QuasiOrbitSpace:
    points: tuple
    leq: tuple           # leq[i][j]: point i lies in the closure of point j

    def closure(self, indices) -> frozenset:
        return frozenset(i for i in range(len(self.points)) if any(self.leq[i][j] for j in indices))

    def is_partial_order(self) -> bool:
        n = len(self.points)
        for i in range(n):
            if not self.leq[i][i]:
                return False
            for j in range(n):
                if i != j and self.leq[i][j] and self.leq[j][i]:
                    return False
                for k in range(n):
                    if self.leq[i][j] and self.leq[j][k] and not self.leq[i][k]:
                        return False
        return True

    def covers(self) -> list:
        """Hasse diagram edges (lower, upper)."""
        n = len(self.points)
        out = []
        for i in range(n):
            for j in range(n):
                if i == j or not self.leq[i][j]:
                    continue
                if not any(k not in (i, j) and self.leq[i][k] and self.leq[k][j] for k in range(n)):
                    out.append((i, j))
        return out


def _points(sys: SelfSimilarSystem) -> list:
    pts = []
    for t in enumerate_maximal_g_tails(sys):
        if t.kind == "M0":
            v = min(t.witness_orbit)
            pts.append(QuasiOrbitPoint("M0", t.vertices, v))
        else:
            pts.append(QuasiOrbitPoint(t.kind, t.vertices, None, t.period))
    for orb in g_orbits(sys, breaking_vertices(sys)):
        pts.append(QuasiOrbitPoint("BV", mt(sys, orb[0]), orb[0]))
    return pts


def quasi_orbit_space(sys: SelfSimilarSystem) -> QuasiOrbitSpace:
    """Points: one per maximal G-tail and one per orbit of breaking vertices.

    A vertex-type point Q(v) lies in the closure of p when it is p or when
    infinitely many edges into v come from the tail of p.  A path-type
    point lies in the closure of p when its tail is contained in that of p.
    """
    key = "qos"
    if key in sys._cache:
        return sys._cache[key]
    gr = sys.graph
    pts = _points(sys)
    n = len(pts)
    leq = [[False] * n for _ in range(n)]
    for i, a in enumerate(pts):
        for j, b in enumerate(pts):
            if a.vertex_type:
                leq[i][j] = i == j or (a.vertex in b.tail and gr.count_into(a.vertex, b.tail) == math.inf)
            else:
                leq[i][j] = a.tail <= b.tail
    out = QuasiOrbitSpace(tuple(pts), tuple(tuple(r) for r in leq))
    sys._cache[key] = out
    return out


@dataclass(frozen=True)
class Violation:
    clause: str
    element: int
    vertex: str
    detail: str = ""


@dataclass(frozen=True)
class CentralityVerdict:
    holds: bool
    violations: tuple = ()

    def __bool__(self):
        return self.holds


def essential_central_isotropy(sys: SelfSimilarSystem) -> CentralityVerdict:
    w = is_pseudo_free(sys)
    if not w:
        raise NotPseudoFree("action is not pseudo-free", witness=(sys.label(w.element), str(w.path)))
    bad = []
    for v in sorted(set(breaking_vertices(sys)) | set(sing0(sys))):
        for g in vertex_stabilizer(sys, v):
            if g:
                bad.append(Violation("i", g, v, "nontrivial stabilizer of a singular vertex"))
                break
    tails = enumerate_maximal_g_tails(sys)
    for t in tails:
        if t.kind == "L":
            v = t.circuit.path.vertex
            for g in vertex_stabilizer(sys, v):
                if g:
                    bad.append(Violation("ii", g, v, f"nontrivial stabilizer on the circuit of {fmt_set(t.vertices)}"))
                    break
    for t in tails:
        if t.kind == "Minf":
            for g, v in trivially_acting_pairs(sys, t.vertices):
                bad.append(Violation("iii", g, v, f"acts trivially on {v}E*{fmt_set(t.vertices)}"))
    return CentralityVerdict(not bad, tuple(bad))


@dataclass(frozen=True)
class Component:
    kind: str            # "point", "bv" or "circle"
    point: int           # index into the quasi-orbit space
    tail: frozenset
    vertex: str | None = None
    period: int | None = None

    def label(self) -> str:
        if self.kind == "bv":
            return f"bv[{self.vertex}]"
        s = f"{self.kind}[{fmt_set(self.tail)}]"
        return s + (f" n={self.period}" if self.kind == "circle" else "")


FULL = "T"


@dataclass(frozen=True)
class PrimSpectrum:
    components: tuple
    leq: tuple           # component-level specialization
    quasi_orbits: QuasiOrbitSpace

    def closure(self, selection: dict) -> dict:
        """Closure of a subset given per component.

        ``selection`` maps a component index to ``FULL`` or, for circles, a
        finite set of parameters w = z^n in [0, 1) as Fractions.  Finite
        sets on a circle are closed; every component strictly below a
        selected one is contained in the closure entirely.
        """
        out = {}
        for c, sub in selection.items():
            if not sub:
                continue
            if self.components[c].kind == "circle" and sub != FULL:
                prev = out.get(c)
                if prev != FULL:
                    out[c] = frozenset(Fraction(w) % 1 for w in sub) | (prev or frozenset())
            else:
                out[c] = FULL
            for d in range(len(self.components)):
                if d != c and self.leq[d][c]:
                    out[d] = FULL
        return out

    def short_names(self) -> list:
        counts = {}
        for c in self.components:
            counts[c.kind] = counts.get(c.kind, 0) + 1
        seen = {}
        names = []
        for c in self.components:
            if counts[c.kind] == 1:
                names.append(c.kind)
            else:
                seen[c.kind] = seen.get(c.kind, 0) + 1
                names.append(f"{c.kind}{seen[c.kind]}")
        return names

    def summary(self) -> str:
        names = self.short_names()
        comps = " , ".join(c.label() for c in self.components)
        rel = []
        for i in range(len(self.components)):
            for j in range(len(self.components)):
                if i != j and self.leq[i][j]:
                    rel.append(f"{names[i]} < {names[j]}")
        order = ", ".join(rel) if rel else "discrete"
        return f"components: {comps}; order: {order}"


def prim_spectrum(sys: SelfSimilarSystem) -> PrimSpectrum:
    verdict = essential_central_isotropy(sys)
    if not verdict:
        v = verdict.violations[0]
        raise EssentialCentralityViolated(
            f"essential central isotropy fails, clause ({v.clause}): element {sys.label(v.element)} "
            f"at {v.vertex}: {v.detail}",
            witness=(sys.label(v.element), v.vertex))
    qos = quasi_orbit_space(sys)
    comps = []
    for i, p in enumerate(qos.points):
        if p.kind == "L":
            comps.append(Component("circle", i, p.tail, None, p.period))
        elif p.kind == "BV":
            comps.append(Component("bv", i, p.tail, p.vertex))
        else:
            comps.append(Component("point", i, p.tail))
    leq = tuple(tuple(qos.leq[a.point][b.point] for b in comps) for a in comps)
    return PrimSpectrum(tuple(comps), leq, qos)


def is_minimal(sys: SelfSimilarSystem) -> bool:
    tails = enumerate_maximal_g_tails(sys)
    return len(tails) == 1 and tails[0].vertices == frozenset(sys.graph.vertices)


@dataclass(frozen=True)
class SimplicityVerdict:
    simple: bool
    failures: tuple = ()        # (clause, witness) pairs

    def __bool__(self):
        return self.simple


def is_simple(sys: SelfSimilarSystem) -> SimplicityVerdict:
    w = is_pseudo_free(sys)
    if not w:
        raise NotPseudoFree("action is not pseudo-free", witness=(sys.label(w.element), str(w.path)))
    E0 = frozenset(sys.graph.vertices)
    fails = []
    tails = enumerate_maximal_g_tails(sys)
    if [t.vertices for t in tails] != [E0]:
        fails.append(("i", tuple(fmt_set(t.vertices) for t in tails)))
    circuits = g_circuits_without_entry(sys, E0)
    if circuits:
        c = circuits[0]
        fails.append(("ii", (sys.label(c.element), str(c.path))))
    triv = trivially_acting_pairs(sys, E0)
    if triv:
        g, v = triv[0]
        fails.append(("iii", (sys.label(g), v)))
    return SimplicityVerdict(not fails, tuple(fails))


def amenability_report(sys: SelfSimilarSystem) -> dict:
    """Vertex stabilizer orders; finite stabilizers are amenable."""
    return {v: len(vertex_stabilizer(sys, v)) for v in sys.graph.vertices}
