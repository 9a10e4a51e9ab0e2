"""Brute-force reference implementations.

Everything here is deliberately naive: explicit subsets, explicit paths,
explicit prefix comparisons.  The only shared machinery with the main
modules is the closed group table (the input data) and path refactoring
for k-graphs (a data-structure operation).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product

from .action import SelfSimilarSystem
from .graph import Path

DEFAULT_DEPTH = 12
DEFAULT_WINDOW = 3
PSEUDO_FREE_DEPTH = 10


def _reach(graph) -> dict:
    """v -> {w : some path has range v and source w}, by BFS."""
    out = {}
    for v in graph.vertices:
        seen = {v}
        queue = deque([v])
        while queue:
            u = queue.popleft()
            for e in graph.edges:
                if e.range == u and e.source not in seen:
                    seen.add(e.source)
                    queue.append(e.source)
        out[v] = seen
    return out


def _edge(graph, name):
    for e in graph.edges:
        if e.name == name:
            return e
    raise KeyError(name)


def _act_tokens(sys: SelfSimilarSystem, g: int, tokens) -> tuple:
    gr = sys.graph
    out = []
    for name, copy in tokens:
        j = gr.eindex(name)
        out.append((gr.edges[sys.eperm[g][j]].name, copy))
        g = sys.rest[g][j]
    return tuple(out), g


def _vact(sys, g, v):
    gr = sys.graph
    return gr.vertices[sys.vperm[g][gr.vindex(v)]]


# maximal tails


def maximal_tails_bruteforce(sys: SelfSimilarSystem, limit: int = 15) -> list:
    """Filter every vertex subset on the definition of a maximal G-tail.

    In rank one clause (ii) asks regular vertices to receive an edge from
    M; in rank k every vertex must receive an edge of each colour from M.
    """
    gr = sys.graph
    n = len(gr.vertices)
    if n > limit:
        raise ValueError(f"{n} vertices exceeds brute-force limit {limit}")
    vs = gr.vertices
    idx = {v: i for i, v in enumerate(vs)}
    reach = _reach(gr)
    orbit_mask = []
    above_mask = []
    for v in vs:
        m = 0
        for g in sys.elements:
            m |= 1 << idx[_vact(sys, g, v)]
        orbit_mask.append(m)
        a = 0
        for u in vs:
            if v in reach[u]:
                a |= 1 << idx[u]
        above_mask.append(a)
    below = [{idx[w] for w in reach[v]} for v in vs]
    rank = gr.rank
    incoming = {v: [e for e in gr.edges if e.range == v] for v in vs}
    out = []
    for mask in range(1, 1 << n):
        members = [i for i in range(n) if mask >> i & 1]
        if any(orbit_mask[i] & ~mask or above_mask[i] & ~mask for i in members):
            continue
        ok = True
        for i in members:
            ins = [e for e in incoming[vs[i]] if mask >> idx[e.source] & 1]
            if rank == 1:
                regular = incoming[vs[i]] and not any(e.omega for e in incoming[vs[i]])
                if regular and not ins:
                    ok = False
            elif {e.color for e in ins} != set(range(1, rank + 1)):
                ok = False
            if not ok:
                break
        if not ok:
            continue
        for i in members:
            for j in members:
                bi = below[i] & set(members)
                bj = below[j] & set(members)
                if not any(idx[_vact(sys, g, vs[u])] in bj for u in bi for g in sys.elements):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(frozenset(vs[i] for i in members))
    return out


# pseudo-freeness and trivially acting pairs


def pseudo_free_bruteforce(sys: SelfSimilarSystem, depth: int = PSEUDO_FREE_DEPTH,
                           window: int = DEFAULT_WINDOW):
    """Search all paths of length 1..depth for g != 1 with g.mu = mu, g|_mu = 1.

    A path whose prefix g moves cannot be fixed by g, so only fixed
    prefixes are extended.  Returns (holds, witness).
    """
    gr = sys.graph
    for g in range(1, sys.order):
        for v in gr.vertices:
            if _vact(sys, g, v) != v:
                continue
            stack = [((), v)]
            while stack:
                tokens, cur = stack.pop()
                if len(tokens) == depth:
                    continue
                for e in gr.edges:
                    if e.range != cur:
                        continue
                    for c in range(window if e.omega else 1):
                        t = tokens + ((e.name, c),)
                        img, h = _act_tokens(sys, g, t)
                        if img != t:
                            continue
                        if h == 0:
                            return False, (g, Path(v, t))
                        stack.append((t, e.source))
    return True, None


def trivially_acting_bruteforce(sys: SelfSimilarSystem, M, depth: int = 10) -> tuple:
    """(g, v) with g != 1 fixing every path of length <= depth in vE*M."""
    gr = sys.graph
    M = set(M)
    out = []
    for g in range(1, sys.order):
        for v in sorted(M):
            if _vact(sys, g, v) != v:
                continue
            ok = True
            stack = [((), v)]
            while stack and ok:
                tokens, cur = stack.pop()
                if len(tokens) == depth:
                    continue
                for e in gr.edges:
                    if e.range == cur and e.source in M:
                        t = tokens + ((e.name, 0),)
                        if _act_tokens(sys, g, t)[0] != t:
                            ok = False
                            break
                        stack.append((t, e.source))
            if ok:
                out.append((g, v))
    return tuple(sorted(out))


# boundary path prefixes and orbit closures


@dataclass(frozen=True)
class Descriptor:
    """A boundary path ``prefix cycle cycle ...`` (infinite when cycle is
    nonempty), a finite boundary path (empty cycle), or with
    ``cylinder=True`` just the cylinder set of ``prefix``."""

    prefix: Path
    cycle: tuple = ()
    cylinder: bool = False

    @property
    def infinite(self) -> bool:
        return bool(self.cycle)

    def tokens(self, n: int) -> tuple:
        """First n edge tokens (fewer if the path is finite)."""
        out = list(self.prefix.edges[:n])
        while self.cycle and len(out) < n:
            out.extend(self.cycle[: n - len(out)])
        return tuple(out)

    def shifts(self):
        """Shift amounts n giving every distinct sigma^n of the path."""
        return range(len(self.prefix.edges) + (len(self.cycle) if self.cycle else 1))


@dataclass(frozen=True)
class TruncatedPathSpace:
    depth: int
    window: int
    prefixes: tuple          # (Path, ends_at_singular)

    @classmethod
    def build(cls, graph, depth: int, window: int = DEFAULT_WINDOW) -> "TruncatedPathSpace":
        out = []
        for v in graph.vertices:
            frontier = [Path(v)]
            for n in range(depth + 1):
                nxt = []
                for p in frontier:
                    s = graph.source(p)
                    sing = graph.is_singular(s)
                    if n == depth or sing:
                        out.append((p, sing))
                    if n < depth:
                        for e in graph.incoming[s]:
                            for c in range(window if e.omega else 1):
                                nxt.append(Path(v, p.edges + ((e.name, c),)))
                frontier = nxt
        return cls(depth, window, tuple(sorted(out)))

    def well_formed(self, graph) -> bool:
        for p, sing in self.prefixes:
            s = graph.source(p)
            if sing != graph.is_singular(s):
                return False
            if len(p) < self.depth and not sing:
                return False
        return True


def _shifted(sys, x: Descriptor, n: int, length: int):
    """(range, first `length` tokens) of sigma^n(x), or None if too short."""
    gr = sys.graph
    toks = x.tokens(n + length)
    if len(toks) < n:
        return None
    if n == 0:
        rng = x.prefix.vertex
    else:
        rng = _edge(gr, toks[n - 1][0]).source
    return rng, toks[n:]


def _orbit_meets_cylinder(sys, P: Path, x: Descriptor, reach) -> bool:
    """Does some mu (g . sigma^n x) begin with P?"""
    gr = sys.graph
    L = len(P.edges)
    for n in x.shifts():
        for j in range(L + 1):
            sh = _shifted(sys, x, n, L - j)
            if sh is None:
                continue
            rng, toks = sh
            for g in sys.elements:
                start = _vact(sys, g, rng)
                if j == L:
                    s = gr.source(Path(P.vertex, P.edges))
                    if start in reach[s]:
                        return True
                    continue
                if len(toks) < L - j:
                    continue
                img, _ = _act_tokens(sys, g, toks)
                if img == P.edges[j:]:
                    anchor = P.vertex if j == 0 else _edge(gr, P.edges[j - 1][0]).source
                    if anchor == start:
                        return True
    return False


def _orbit_contains_finite(sys, P: Path, x: Descriptor) -> bool:
    """Is the finite path P itself of the form mu (g . sigma^n x)?"""
    if x.infinite:
        return False
    gr = sys.graph
    L = len(P.edges)
    for n in x.shifts():
        rng, toks = _shifted(sys, x, n, len(x.prefix.edges))
        for g in sys.elements:
            img, _ = _act_tokens(sys, g, toks)
            j = L - len(img)
            if j < 0 or P.edges[j:] != img:
                continue
            anchor = P.vertex if j == 0 else _edge(gr, P.edges[j - 1][0]).source
            if anchor == _vact(sys, g, rng):
                return True
    return False


def orbit_closure_member(sys: SelfSimilarSystem, y: Descriptor, x: Descriptor,
                         depth: int = DEFAULT_DEPTH, window: int = DEFAULT_WINDOW,
                         reach=None) -> bool:
    """Does the depth/window neighbourhood of y meet the orbit of x?

    Infinite y is truncated to its first ``depth`` edges.  A finite
    boundary path y ending at v is approached through omega copies with
    index >= window, i.e. its neighbourhood excludes every ordinary edge
    into v and omega copies ``0..window-1``.
    """
    reach = reach if reach is not None else _reach(sys.graph)
    gr = sys.graph
    if y.cylinder:
        return _orbit_meets_cylinder(sys, y.prefix, x, reach)
    if y.infinite:
        P = Path(y.prefix.vertex, y.tokens(depth))
        return _orbit_meets_cylinder(sys, P, x, reach)
    P = y.prefix
    if _orbit_contains_finite(sys, P, x):
        return True
    s = gr.source(P)
    for e in gr.edges:
        if e.range == s and e.omega:
            Q = Path(P.vertex, P.edges + ((e.name, window),))
            if _orbit_meets_cylinder(sys, Q, x, reach):
                return True
    return False


def point_representative(sys: SelfSimilarSystem, kind: str, tail, vertex=None) -> Descriptor:
    """A boundary path realising a quasi-orbit point.

    Vertex-type points use the vertex itself.  Path-type points use a
    closed walk, inside the tail, through a vertex that generates it.
    """
    gr = sys.graph
    if kind in ("BV", "M0"):
        return Descriptor(Path(vertex))
    tail = set(tail)
    reach = _reach(gr)
    for u in sorted(tail):
        gen = {w for w in gr.vertices if any(_vact(sys, g, u) in reach[w] for g in sys.elements)}
        if gen != tail:
            continue
        # BFS for a closed walk at u inside the tail; None marks the start
        prev = {}
        queue = deque([None])
        while queue and u not in prev:
            cur = queue.popleft()
            for e in gr.edges:
                if e.range == (u if cur is None else cur) and e.source in tail and e.source not in prev:
                    prev[e.source] = ((e.name, 0), cur)
                    if e.source == u:
                        break
                    queue.append(e.source)
        if u in prev:
            walk = []
            tok, cur = prev[u]
            walk.append(tok)
            while cur is not None:
                tok, cur = prev[cur]
                walk.append(tok)
            walk.reverse()
            return Descriptor(Path(u), tuple(walk))
    raise ValueError(f"no closed walk generating {sorted(tail)}")


def quasi_orbit_order_oracle(sys: SelfSimilarSystem, points, depth: int = DEFAULT_DEPTH,
                             window: int = DEFAULT_WINDOW) -> tuple:
    """leq[i][j] = point i lies in the orbit closure of point j.

    ``points`` are (kind, tail, vertex) triples.
    """
    reps = [point_representative(sys, k, t, v) for k, t, v in points]
    reach = _reach(sys.graph)
    return tuple(tuple(orbit_closure_member(sys, y, x, depth, window, reach) for x in reps)
                 for y in reps)


# k-graphs


def _kact(sys, g, path):
    v, es = path
    toks, h = _act_tokens(sys, g, tuple((e, 0) for e in es))
    return (_vact(sys, g, v), tuple(n for n, _ in toks)), h


def cycline_bruteforce(sys: SelfSimilarSystem, mu, g: int, nu, depth: int = 6, M=None) -> bool:
    """Compare mu(g.lam) with nu lam on their common degree for every lam
    of degree (depth, ..., depth) from s(nu) inside M."""
    sk = sys.skeleton
    M = set(sys.graph.vertices if M is None else M)
    if mu[0] != nu[0] or sk.src(mu) != _vact(sys, g, sk.src(nu)):
        return False
    k = sk.k
    for lam in sk.paths(sk.src(nu), (depth,) * k):
        if sk.src(lam) not in M:
            continue
        glam, _ = _kact(sys, g, lam)
        a = sk.concat(mu, glam)
        b = sk.concat(nu, lam)
        n = tuple(min(x, y) for x, y in zip(sk.degree(a), sk.degree(b)))
        if sk.segment(a, (0,) * k, n) != sk.segment(b, (0,) * k, n):
            return False
    return True


def _split(l):
    return tuple(max(x, 0) for x in l), tuple(max(-x, 0) for x in l)


def periodicity_bruteforce(sys: SelfSimilarSystem, M=None, box: int = 3, depth: int = 4) -> list:
    """Every l in the box admitting some (mu, g, nu) that passes the depth test."""
    sk = sys.skeleton
    M = set(sys.graph.vertices if M is None else M)
    out = []
    for l in product(range(-box, box + 1), repeat=sk.k):
        p, q = _split(l)
        hit = False
        for v in sorted(M):
            for mu in sk.paths(v, p):
                if sk.src(mu) not in M:
                    continue
                for nu in sk.paths(v, q):
                    if sk.src(nu) not in M:
                        continue
                    for g in sys.elements:
                        if cycline_bruteforce(sys, mu, g, nu, depth, M):
                            hit = True
                            break
                    if hit:
                        break
                if hit:
                    break
            if hit:
                break
        if hit:
            out.append(l)
    return out


def m_perg_bruteforce(sys: SelfSimilarSystem, M, per, box: int = 2, depth: int = 4) -> frozenset:
    """Vertices v of M such that every mu from v with d(mu) <= box and every
    m <= box with d(mu) - m in ``per`` admit a partner of degree m."""
    sk = sys.skeleton
    M = set(M)
    k = sk.k
    out = set()
    for v in sorted(M):
        ok = True
        for p in product(range(box + 1), repeat=k):
            for m in product(range(box + 1), repeat=k):
                if tuple(a - b for a, b in zip(p, m)) not in per:
                    continue
                for mu in sk.paths(v, p):
                    if sk.src(mu) not in M:
                        continue
                    if not any(cycline_bruteforce(sys, mu, g, nu, depth, M)
                               for nu in sk.paths(v, m) if sk.src(nu) in M for g in sys.elements):
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            out.add(v)
    return frozenset(out)
