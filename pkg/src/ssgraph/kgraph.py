"""Self-similar actions on row-finite k-graphs without sources.

A k-graph is stored as its coloured skeleton plus the commuting-square
bijections.  Paths are pairs ``(range, edges)`` with ``edges`` written in
ascending colour order, which by unique factorization is a normal form:
two paths are equal iff their normal forms are.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .action import SelfSimilarSystem, close_group, is_pseudo_free, trivially_acting_pairs
from .errors import (
    CubeConditionFailed, EssentialCentralityViolated, FactorizationEquivarianceViolation,
    FactorizationNotBijective, MalformedSequence, NotPseudoFree, SourcePresent, SpecError,
)
from .graph import Graph, build_graph
from .lattice import IntegerLattice
from .tails import fmt_set, tail_key


@dataclass(frozen=True, eq=False)
class KGraphSkeleton:
    graph: Graph
    swap: dict = field(repr=False)       # (e, f) -> (f', e') for every bicoloured pair

    @property
    def k(self) -> int:
        return self.graph.rank

    def color(self, e: str) -> int:
        return self.graph.edge(e).color

    def src(self, path) -> str:
        v, es = path
        return self.graph.edge(es[-1]).source if es else v

    def degree(self, path) -> tuple:
        d = [0] * self.k
        for e in path[1]:
            d[self.color(e) - 1] += 1
        return tuple(d)

    def refactor(self, path, word) -> tuple:
        """Rewrite ``path`` so its colour sequence is ``word``."""
        v, es = path
        cur = list(es)
        for pos, c in enumerate(word):
            q = pos
            while self.color(cur[q]) != c:
                q += 1
            for t in range(q, pos, -1):
                cur[t - 1], cur[t] = self.swap[(cur[t - 1], cur[t])]
        return (v, tuple(cur))

    def normalize(self, path) -> tuple:
        return self.refactor(path, sorted(self.color(e) for e in path[1]))

    @staticmethod
    def _word(d) -> list:
        return [c + 1 for c, n in enumerate(d) for _ in range(n)]

    def segment(self, path, m, n) -> tuple:
        """lambda(m, n) for m <= n <= d(lambda), in normal form."""
        d = self.degree(path)
        word = self._word(m) + self._word([b - a for a, b in zip(m, n)]) + self._word(
            [c - b for b, c in zip(n, d)])
        v, es = self.refactor(path, word)
        i, j = sum(m), sum(n)
        start = v if i == 0 else self.graph.edge(es[i - 1]).source
        return self.normalize((start, es[i:j]))

    def concat(self, a, b) -> tuple:
        if self.src(a) != b[0]:
            raise ValueError("paths not composable")
        return self.normalize((a[0], a[1] + b[1]))

    def paths(self, v: str, d) -> list:
        """All paths of degree d with range v, in normal form."""
        word = self._word(d)
        out = []

        def rec(cur, acc):
            if len(acc) == len(word):
                out.append((v, tuple(acc)))
                return
            c = word[len(acc)]
            for e in self.graph.incoming[cur]:
                if e.color == c:
                    acc.append(e.name)
                    rec(e.source, acc)
                    acc.pop()

        rec(v, [])
        return out

    def paths_in(self, d, M) -> list:
        """All paths of degree d whose source lies in M."""
        return [p for v in sorted(M) for p in self.paths(v, d) if self.src(p) in M]

    def vertices_of(self, path) -> set:
        d = self.degree(path)
        return {self.segment(path, n, n)[0] for n in product(*(range(x + 1) for x in d))}


def validate_kgraph(spec: dict) -> KGraphSkeleton:
    graph = build_graph(spec)
    if graph.has_omega:
        raise SpecError("k-graphs are row-finite; omega edges are not allowed", witness="omega")
    k = graph.rank
    for v in graph.vertices:
        have = {e.color for e in graph.incoming[v]}
        for c in range(1, k + 1):
            if c not in have:
                raise SourcePresent(f"vertex {v} receives no edge of color {c}", witness=(v, c))
    swap = {}
    for fact in spec.get("factorizations", []) or []:
        left, right = tuple(fact["left"]), tuple(fact["right"])
        for name in left + right:
            if not graph.has_edge(name):
                raise FactorizationNotBijective(f"unknown edge {name!r} in factorization", witness=fact)
        for pair in (left, right):
            a, b = graph.edge(pair[0]), graph.edge(pair[1])
            if a.source != b.range or a.color == b.color:
                raise FactorizationNotBijective(f"{pair} is not a composable bicoloured pair", witness=fact)
        la, lb = graph.edge(left[0]), graph.edge(left[1])
        ra, rb = graph.edge(right[0]), graph.edge(right[1])
        if (la.color, lb.color) != (rb.color, ra.color):
            raise FactorizationNotBijective(f"{left} and {right} have mismatched colors", witness=fact)
        if la.range != ra.range or lb.source != rb.source:
            raise FactorizationNotBijective(f"{left} and {right} have different endpoints", witness=fact)
        for a, b in ((left, right), (right, left)):
            if a in swap and swap[a] != b:
                raise FactorizationNotBijective(f"pair {a} factored twice", witness=a)
            swap[a] = b
    for e in graph.edges:
        for f in graph.incoming[e.source]:
            if f.color != e.color and (e.name, f.name) not in swap:
                raise FactorizationNotBijective(f"composable pair ({e.name}, {f.name}) has no factorization",
                                                witness=(e.name, f.name))
    skel = KGraphSkeleton(graph, swap)
    if k >= 3:
        _check_cube(skel)
    return skel


def _check_cube(skel: KGraphSkeleton) -> None:
    g = skel.graph
    sw = skel.swap
    for e in g.edges:
        for f in g.incoming[e.source]:
            if f.color <= e.color:
                continue
            for h in g.incoming[f.source]:
                if h.color <= f.color:
                    continue
                x = [e.name, f.name, h.name]
                a = x[:]
                a[0], a[1] = sw[(a[0], a[1])]
                a[1], a[2] = sw[(a[1], a[2])]
                a[0], a[1] = sw[(a[0], a[1])]
                b = x[:]
                b[1], b[2] = sw[(b[1], b[2])]
                b[0], b[1] = sw[(b[0], b[1])]
                b[1], b[2] = sw[(b[1], b[2])]
                if a != b:
                    raise CubeConditionFailed(f"cube condition fails on {tuple(x)}", witness=tuple(x))


# actions


def kact(sys: SelfSimilarSystem, g: int, path) -> tuple:
    """(g . path, g|_path) along the stored factorization."""
    gr = sys.graph
    v, es = path
    start = sys.act_vertex(g, v)
    out = []
    for name in es:
        j = gr.eindex(name)
        out.append(gr.edges[sys.eperm[g][j]].name)
        g = sys.rest[g][j]
    return (start, tuple(out)), g


def kgraph_action(skel: KGraphSkeleton, generators, cap: int = 10_000) -> SelfSimilarSystem:
    sys = close_group(skel.graph, generators, cap, skeleton=skel)
    for g in sys.elements:
        for (e, f), (f2, e2) in skel.swap.items():
            (v1, x1), h1 = kact(sys, g, (skel.graph.edge(e).range, (e, f)))
            (v2, x2), h2 = kact(sys, g, (skel.graph.edge(f2).range, (f2, e2)))
            if skel.swap.get(x1) != x2 or h1 != h2:
                raise FactorizationEquivarianceViolation(
                    f"element {sys.label(g)} does not respect the square {e}{f} = {f2}{e2}",
                    witness=(sys.label(g), (e, f)))
    return sys


def _skel(sys: SelfSimilarSystem) -> KGraphSkeleton:
    if sys.skeleton is None:
        raise ValueError("system has no k-graph skeleton")
    return sys.skeleton


# tails and hereditary sets


def tail_violation_k(sys: SelfSimilarSystem, M) -> str | None:
    gr = sys.graph
    M = frozenset(M)
    if not M:
        return "empty"
    if not sys.is_invariant(M):
        return "not G-invariant"
    if gr.up_closure(M) != M:
        return "(i) not upward closed"
    for v in M:
        cols = {e.color for e in gr.edges_into(v, M)}
        if len(cols) != gr.rank:
            return f"(ii) {v} misses a color from M"
    for v in M:
        bv = gr.below(v) & M
        for w in M:
            bw = gr.below(w) & M
            if not any(sys.act_vertex(g, u) in bw for u in bv for g in sys.elements):
                return f"(iii) no common lower bound for {v} and {w}"
    return None


def maximal_g_tails_k(sys: SelfSimilarSystem, verify: bool = True) -> tuple:
    """Candidates are G-saturated upward closures of SCCs in which every
    vertex receives every colour from inside the SCC."""
    key = ("ktails", verify)
    if key in sys._cache:
        return sys._cache[key]
    gr = sys.graph
    found = set()
    for comp in gr.sccs:
        C = set(comp)
        if all({e.color for e in gr.edges_into(v, C)} == set(gr.colors) for v in comp):
            found.add(gr.up_closure(sys.saturate(comp)))
    cands = sorted((M for M in found if tail_violation_k(sys, M) is None), key=tail_key)
    if verify and len(gr.vertices) <= 15:
        from .oracle import maximal_tails_bruteforce
        brute = sorted(maximal_tails_bruteforce(sys), key=tail_key)
        if brute != cands:
            raise AssertionError(f"k-graph tails disagree with subset filter: {cands} vs {brute}")
    out = tuple(cands)
    sys._cache[key] = out
    return out


@dataclass(frozen=True)
class HSLattice:
    sets: tuple

    def leq(self, i: int, j: int) -> bool:
        return self.sets[i] <= self.sets[j]


def _saturate(gr: Graph, H: set) -> frozenset:
    H = set(H)
    changed = True
    while changed:
        changed = False
        for v in gr.vertices:
            if v in H:
                continue
            for c in gr.colors:
                ins = [e for e in gr.incoming[v] if e.color == c]
                if ins and all(e.source in H for e in ins):
                    H.add(v)
                    changed = True
                    break
    return frozenset(H)


def _avoiding(gr: Graph, H) -> frozenset:
    """Vertices admitting an infinite path that never meets H."""
    X = set(gr.vertices) - set(H)
    changed = True
    while changed:
        changed = False
        for v in sorted(X):
            cols = {e.color for e in gr.incoming[v] if e.source in X}
            if len(cols) != gr.rank:
                X.discard(v)
                changed = True
    return frozenset(X)


def hereditary_saturated_lattice(sys: SelfSimilarSystem) -> HSLattice:
    """All G-invariant hereditary saturated vertex sets, by inclusion.

    Every such set is reached from the empty set by repeatedly adding the
    hereditary closure of one orbit and saturating.
    """
    gr = sys.graph
    start = _saturate(gr, set())
    seen = {start}
    queue = deque([start])
    while queue:
        H = queue.popleft()
        for v in gr.vertices:
            if v in H:
                continue
            add = set()
            for w in sys.orbit(v):
                add |= gr.below(w)
            H2 = _saturate(gr, H | add)
            if H2 not in seen:
                seen.add(H2)
                queue.append(H2)
    sets = tuple(sorted(seen, key=tail_key))
    for H in sets:
        back = frozenset(gr.vertices) - _avoiding(gr, H)
        if back != H:
            raise AssertionError(f"H_(Omega_H) differs from H for {fmt_set(H)}")
    return HSLattice(sets)


# cycline triples


def _split(l):
    return tuple(max(x, 0) for x in l), tuple(max(-x, 0) for x in l)


def _tail_set(sys, M):
    return frozenset(sys.graph.vertices) if M is None else frozenset(M)


def cycline_fixpoint(sys: SelfSimilarSystem, l, M=None) -> frozenset:
    """Surviving states (alpha, h, beta), d(alpha) = l+, d(beta) = l-.

    A state survives when, for every lambda of degree (1,...,1) from
    s(beta) inside M, alpha(h.lambda) and beta.lambda share their degree
    (1,...,1) prefix and the stripped successor state survives.  The
    survivors are exactly the cycline triples in Lambda M.
    """
    M = _tail_set(sys, M)
    key = ("cycline", tuple(l), M)
    if key in sys._cache:
        return sys._cache[key]
    sk = _skel(sys)
    lp, lm = _split(l)
    one = (1,) * sk.k
    A = sk.paths_in(lp, M)
    B = sk.paths_in(lm, M)
    by_range = {}
    for b in B:
        by_range.setdefault(b[0], []).append(b)
    states = []
    for a in A:
        sa = sk.src(a)
        for b in by_range.get(a[0], ()):
            sb = sk.src(b)
            for h in sys.elements:
                if sys.act_vertex(h, sb) == sa:
                    states.append((a, h, b))
    index = {s: i for i, s in enumerate(states)}
    alive = [True] * len(states)
    preds = [[] for _ in states]
    lp1 = tuple(x + 1 for x in lp)
    lm1 = tuple(x + 1 for x in lm)
    for i, (a, h, b) in enumerate(states):
        for lam in sk.paths(sk.src(b), one):
            if sk.src(lam) not in M:
                continue
            hl, h2 = kact(sys, h, lam)
            big_a = sk.concat(a, hl)
            big_b = sk.concat(b, lam)
            if sk.segment(big_a, (0,) * sk.k, one) != sk.segment(big_b, (0,) * sk.k, one):
                alive[i] = False
                break
            succ = (sk.segment(big_a, one, lp1), h2, sk.segment(big_b, one, lm1))
            j = index.get(succ)
            if j is None:
                alive[i] = False
                break
            preds[j].append(i)
    queue = deque(i for i, ok in enumerate(alive) if not ok)
    while queue:
        j = queue.popleft()
        for i in preds[j]:
            if alive[i]:
                alive[i] = False
                queue.append(i)
    out = frozenset(s for s, ok in zip(states, alive) if ok)
    sys._cache[key] = out
    return out


def _alive_by_alpha(sys, l, M):
    key = ("cycline_by_alpha", tuple(l), M)
    r = sys._cache.get(key)
    if r is None:
        r = {}
        for a, h, b in cycline_fixpoint(sys, l, M):
            r.setdefault(a, []).append((h, b))
        sys._cache[key] = r
    return r


def sigma_membership(sys: SelfSimilarSystem, v: str, p, q, M=None) -> bool:
    """(p, q) in Sigma_v: every mu in v Lambda^p M has a cycline partner of degree q."""
    M = _tail_set(sys, M)
    sk = _skel(sys)
    n = tuple(min(a, b) for a, b in zip(p, q))
    l = tuple(a - b for a, b in zip(p, q))
    table = _alive_by_alpha(sys, l, M)
    for mu in sk.paths(v, p):
        if sk.src(mu) not in M:
            continue
        mu1 = sk.segment(mu, n, p)
        if mu1 not in table:
            return False
    return True


def cycline_element(sys: SelfSimilarSystem, M, mu, q):
    """The g with (mu, g, nu) cycline in Lambda M and d(nu) = q, or None."""
    M = _tail_set(sys, M)
    sk = _skel(sys)
    p = sk.degree(mu)
    n = tuple(min(a, b) for a, b in zip(p, q))
    l = tuple(a - b for a, b in zip(p, q))
    hits = _alive_by_alpha(sys, l, M).get(sk.segment(mu, n, p), [])
    return min(h for h, _ in hits) if hits else None


@dataclass(frozen=True)
class PeriodicityResult:
    lattice: IntegerLattice
    found: tuple
    box: int

    @property
    def certificate(self) -> str:
        return f"complete-up-to-box {self.box}"

    def __str__(self):
        return f"Per = {self.lattice} (certified up to box {self.box})"


def periodicity_group(sys: SelfSimilarSystem, M=None, box: int = 3) -> PeriodicityResult:
    M = _tail_set(sys, M)
    k = _skel(sys).k
    found = []
    for l in product(range(-box, box + 1), repeat=k):
        if cycline_fixpoint(sys, l, M):
            found.append(l)
    fs = set(found)
    for a in found:
        if tuple(-x for x in a) not in fs:
            raise AssertionError(f"periodicity set not closed under negation at {a}")
        for b in found:
            c = tuple(x + y for x, y in zip(a, b))
            if max(map(abs, c)) <= box and c not in fs:
                raise AssertionError(f"periodicity set not closed under addition: {a} + {b}")
    return PeriodicityResult(IntegerLattice.generated_by(found, k), tuple(found), box)


@dataclass(frozen=True)
class MPerResult:
    vertices: frozenset
    box: int

    @property
    def certificate(self) -> str:
        return f"up-to-box {self.box}"


def m_perg(sys: SelfSimilarSystem, M=None, box: int = 3) -> MPerResult:
    """Vertices v in M with (l+ + n, l- + n) in Sigma_v for every basis
    vector l of Per and its negative, and every diagonal shift n in the box."""
    M = _tail_set(sys, M)
    sk = _skel(sys)
    gr = sys.graph
    per = periodicity_group(sys, M, box).lattice
    gens = list(per.basis) + [tuple(-x for x in r) for r in per.basis]
    shifts = [(t,) * sk.k for t in range(box + 1)]
    out = set()
    for v in sorted(M):
        ok = True
        for l in gens:
            lp, lm = _split(l)
            for n in shifts:
                p = tuple(a + b for a, b in zip(lp, n))
                q = tuple(a + b for a, b in zip(lm, n))
                if not sigma_membership(sys, v, p, q, M):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.add(v)
    out = frozenset(out)
    if not out:
        raise AssertionError("M_PerG is empty")
    if not sys.is_invariant(out):
        raise AssertionError("M_PerG is not G-invariant")
    for v in out:
        if not (gr.below(v) & M) <= out:
            raise AssertionError("M_PerG is not hereditary")
    return MPerResult(out, box)


# spectrum


@dataclass(frozen=True)
class KComponent:
    tail: frozenset
    per: IntegerLattice

    def label(self) -> str:
        r = self.per.rank
        torus = "point" if r == 0 else ("T" if r == 1 else f"T^{r}")
        return f"{fmt_set(self.tail)} x dual({self.per}) = {torus}"


@dataclass(frozen=True)
class KSpectrum:
    components: tuple
    leq: tuple
    box: int


def spectrum_components_k(sys: SelfSimilarSystem, box: int = 3) -> KSpectrum:
    w = is_pseudo_free(sys)
    if not w:
        raise NotPseudoFree("action is not pseudo-free", witness=(sys.label(w.element), str(w.path)))
    tails = maximal_g_tails_k(sys)
    for M in tails:
        triv = trivially_acting_pairs(sys, M)
        if triv:
            g, v = triv[0]
            raise EssentialCentralityViolated(
                f"element {sys.label(g)} acts trivially on {v} Lambda {fmt_set(M)}",
                witness=(sys.label(g), v))
    comps = tuple(KComponent(M, periodicity_group(sys, M, box).lattice) for M in tails)
    leq = tuple(tuple(a.tail <= b.tail for b in comps) for a in comps)
    return KSpectrum(comps, leq, box)


# convergence


@dataclass(frozen=True)
class Certificate:
    verdict: str          # "Verified", "Refuted" or "Inconclusive"
    detail: str
    counterexample: tuple | None = None


def _chi(theta, l) -> Fraction:
    return sum((Fraction(t) * x for t, x in zip(theta, l)), Fraction(0)) % 1


def _chi_dist(a: Fraction, b: Fraction) -> float:
    return 2 * abs(math.sin(math.pi * float((a - b) % 1)))


def convergence_certificate(sys: SelfSimilarSystem, target, seq, path_len: int = 2,
                            char_box: int = 2, box: int | None = None,
                            extend: int | None = None) -> Certificate:
    """Check whether the eventually constant sequence ``seq`` converges to ``target``.

    Points are (tail, theta) with theta a rational vector standing for the
    character l -> exp(2 pi i theta.l) of the periodicity group.  The last
    entry of ``seq`` repeats forever, so only it matters.  F is the set of
    periods of the target tail inside the character box; lambda ranges
    over paths of degree (path_len, ..., path_len) from each vertex of the
    target's M_PerG; mu over extensions of lambda by up to ``extend``
    (default char_box + 1) in every coordinate.  A refutation is relative
    to that extension bound.  Periodicity lattices are searched in a box
    of ``box`` (default max(char_box, 3)); the verdict is Inconclusive
    when F does not generate that lattice.
    """
    sk = _skel(sys)
    k = sk.k
    box = max(char_box, 3) if box is None else box
    extend = char_box + 1 if extend is None else extend
    if not seq:
        raise MalformedSequence("empty sequence")
    tails = set(maximal_g_tails_k(sys))
    for M, theta in [target, *seq]:
        if frozenset(M) not in tails:
            raise MalformedSequence(f"{fmt_set(M)} is not a maximal G-tail")
        if len(theta) != k:
            raise MalformedSequence(f"character {theta} does not have {k} coordinates")
    M, theta = frozenset(target[0]), tuple(Fraction(t) for t in target[1])
    M2, theta2 = frozenset(seq[-1][0]), tuple(Fraction(t) for t in seq[-1][1])
    per = periodicity_group(sys, M, max(box, char_box)).lattice
    per2 = periodicity_group(sys, M2, max(box, char_box)).lattice
    F = [l for l in product(range(-char_box, char_box + 1), repeat=k) if any(l) and l in per]
    F2 = [l for l in F if l in per2]
    diffs = [_chi_dist(_chi(theta, l), _chi(theta2, l)) for l in F2]
    nonzero = [d for d in diffs if d > 1e-12]
    eps = min(nonzero) / 2 if nonzero else 1.0
    mper = m_perg(sys, M, max(box, char_box)).vertices
    mper2 = m_perg(sys, M2, max(box, char_box)).vertices if M2 != M else mper
    need = max([max(max(_split(l)[0]), max(_split(l)[1])) for l in F] or [0])
    L = max(path_len, need)
    for v in sorted(mper):
        for lam in sk.paths(v, (L,) * k):
            if sk.src(lam) not in M:
                continue
            if not _has_witness(sys, sk, M, M2, mper2, lam, F2, theta, theta2, eps, extend):
                return Certificate("Refuted", f"no mu extends lambda={lam[1]} by at most {extend} at epsilon={eps:.3g}",
                                   (eps, tuple(F), lam))
    generated = IntegerLattice.generated_by(F, k) == per
    if generated:
        return Certificate("Verified", f"all lambda of degree {L} from M_PerG admit mu; F generates Per")
    return Certificate("Inconclusive", f"character box {char_box} does not reach a generating set of Per")


def _has_witness(sys, sk, M, M2, mper2, lam, F2, theta, theta2, eps, ext) -> bool:
    for t in product(range(ext + 1), repeat=sk.k):
        for tail in sk.paths(sk.src(lam), t):
            if sk.src(tail) not in M2:
                continue
            mu = sk.concat(lam, tail)
            dm = sk.degree(mu)
            for m in product(*(range(x + 1) for x in dm)):
                if sk.segment(mu, m, m)[0] not in mper2:
                    continue
                if all(_clause(sys, sk, M, M2, lam, mu, m, l, theta, theta2, eps) for l in F2):
                    return True
    return False


def _clause(sys, sk, M, M2, lam, mu, m, l, theta, theta2, eps) -> bool:
    p, q = _split(l)
    dm = sk.degree(mu)
    top = tuple(max(a, b) for a, b in zip(p, q))
    if any(m[i] + top[i] > dm[i] for i in range(len(m))):
        return False
    g_l = cycline_element(sys, M, sk.segment(lam, (0,) * len(p), p), q)
    if g_l is None:
        return False
    mq = tuple(a + b for a, b in zip(m, q))
    mp = tuple(a + b for a, b in zip(m, p))
    if any(mq[i] > dm[i] or mp[i] > dm[i] for i in range(len(m))):
        return False
    # (1) g_l moves mu(q, q + m) off mu(p, p + m)
    a = sk.segment(mu, q, mq)
    b = sk.segment(mu, p, mp)
    moved, h = kact(sys, g_l, a)
    if moved != b:
        return True
    # (2) (mu(m, m+p), g_l|_{mu(q, q+m)}, mu(m, m+q)) is not cycline in Lambda M2
    state = (sk.segment(mu, m, mp), h, sk.segment(mu, m, mq))
    if state not in cycline_fixpoint(sys, l, M2):
        return True
    # (3) characters agree to within epsilon
    return _chi_dist(_chi(theta, l), _chi(theta2, l)) < eps
