"""Self-similar actions: closure into a finite automaton group.

An element is determined by its vertex permutation, its edge permutation
and its restriction at every edge.  Equality is the coinductive one, so
the closure works with *portraits*: the depth-n portrait of g is
(vertex perm, edge perm, depth-(n-1) portraits of the restrictions).  The
depth-n portraits of the generated group form a finite group G_n that
surjects onto G_{n-1}.  When |G_n| = |G_{n-1}| the projection is a
bijection, and the same then holds at every deeper level, so G_n is the
group itself with bisimilar elements already identified.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .errors import ClosureCapExceeded, CocycleViolation, EquivarianceViolation, SpecError
from .graph import Graph, Path

DEFAULT_CAP = 10_000


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    vertex_perm: Mapping = field(default_factory=dict)
    edge_perm: Mapping = field(default_factory=dict)
    # edge -> word; missing edges restrict to the generator itself
    restrictions: Mapping = field(default_factory=dict)


def parse_word(word, names: Iterable[str]) -> tuple:
    """Parse a word into ((generator, inverse?), ...).

    Accepts a list of tokens or a string with whitespace-separated tokens;
    a token that is not a generator name is split greedily into names.
    A trailing ``'`` inverts a letter.  ``""``, ``"1"`` and ``[]`` are the
    identity.
    """
    names = sorted(set(names), key=lambda s: (-len(s), s))
    if isinstance(word, str):
        tokens = word.split()
    else:
        tokens = [str(t) for t in word]
    out = []
    for tok in tokens:
        if tok in ("1", "e", "id") and tok not in names:
            continue
        pos = 0
        while pos < len(tok):
            for n in names:
                if tok.startswith(n, pos):
                    pos += len(n)
                    inv = tok.startswith("'", pos)
                    if inv:
                        pos += 1
                    out.append((n, inv))
                    break
            else:
                raise SpecError(f"cannot parse word {word!r} at {tok[pos:]!r}", witness=word)
    return tuple(out)


def _compose(a, b):
    return tuple(a[i] for i in b)


def _invert(a):
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


class _Level:
    """Group of depth-n portraits."""

    def __init__(self, depth, below):
        self.depth = depth
        self.below = below
        self.elems = []
        self.index = {}
        self._mul = {}
        self._inv = {}

    def add(self, p):
        i = self.index.get(p)
        if i is None:
            i = len(self.elems)
            self.index[p] = i
            self.elems.append(p)
        return i

    def mul_portrait(self, a, b):
        vp = _compose(a[0], b[0])
        ep = _compose(a[1], b[1])
        if self.below is None:
            return (vp, ep, ())
        rest = tuple(self.below.mul(a[2][b[1][e]], b[2][e]) for e in range(len(ep)))
        return (vp, ep, rest)

    def inv_portrait(self, a):
        vp, ep = _invert(a[0]), _invert(a[1])
        if self.below is None:
            return (vp, ep, ())
        rest = tuple(self.below.inv(a[2][ep[e]]) for e in range(len(ep)))
        return (vp, ep, rest)

    def mul(self, i, j):
        key = (i, j)
        r = self._mul.get(key)
        if r is None:
            r = self.index[self.mul_portrait(self.elems[i], self.elems[j])]
            self._mul[key] = r
        return r

    def inv(self, i):
        r = self._inv.get(i)
        if r is None:
            r = self.index[self.inv_portrait(self.elems[i])]
            self._inv[i] = r
        return r


@dataclass(frozen=True, eq=False)
class SelfSimilarSystem:
    """A graph with a closed finite self-similar group action.

    Elements are integers ``0..order-1`` with ``0`` the identity.
    ``vperm[g][i]``/``eperm[g][j]`` index into ``graph.vertices``/``graph.edges``
    and ``rest[g][j]`` is the restriction of g at edge j.
    """

    graph: Graph
    generators: tuple
    vperm: tuple
    eperm: tuple
    rest: tuple
    words: tuple
    letters: tuple
    letter_mul: tuple
    cap: int = DEFAULT_CAP
    skeleton: object = None
    _cache: dict = field(default_factory=dict, repr=False)

    identity = 0

    @property
    def order(self) -> int:
        return len(self.vperm)

    @property
    def elements(self) -> range:
        return range(len(self.vperm))

    def label(self, g: int) -> str:
        if g == 0:
            return "1"
        return "".join(n + ("'" if inv else "") for n, inv in (self.letters[i] for i in self.words[g]))

    # group structure

    def mul(self, g: int, h: int) -> int:
        key = ("mul", g, h)
        r = self._cache.get(key)
        if r is None:
            r = h
            for letter in reversed(self.words[g]):
                r = self.letter_mul[letter][r]
            self._cache[key] = r
        return r

    @cached_property
    def _inverses(self) -> tuple:
        half = len(self.letters) // 2
        out = []
        for g in self.elements:
            r = 0
            for letter in self.words[g]:
                r = self.letter_mul[(letter + half) % len(self.letters)][r]
            out.append(r)
        return tuple(out)

    def inv(self, g: int) -> int:
        return self._inverses[g]

    # action on vertices, edges and paths

    def act_vertex(self, g: int, v: str) -> str:
        gr = self.graph
        return gr.vertices[self.vperm[g][gr.vindex(v)]]

    def act_edge(self, g: int, name: str) -> str:
        gr = self.graph
        return gr.edges[self.eperm[g][gr.eindex(name)]].name

    def restrict_edge(self, g: int, name: str) -> int:
        return self.rest[g][self.graph.eindex(name)]

    def act_on_path(self, g: int, p: Path) -> tuple:
        return act_on_path(self, g, p)

    def orbit(self, v: str) -> frozenset:
        i = self.graph.vindex(v)
        return frozenset(self.graph.vertices[self.vperm[g][i]] for g in self.elements)

    def saturate(self, vs: Iterable[str]) -> frozenset:
        out = set()
        for v in vs:
            out |= self.orbit(v)
        return frozenset(out)

    def is_invariant(self, vs) -> bool:
        vs = set(vs)
        return all(self.act_vertex(g, v) in vs for g in self.elements for v in vs)

    @cached_property
    def pseudo_free(self) -> bool:
        return is_pseudo_free(self).holds


def act_on_path(sys: SelfSimilarSystem, g: int, p: Path) -> tuple:
    """Return (g . p, g|_p)."""
    gr = sys.graph
    start = sys.act_vertex(g, p.vertex)
    out = []
    for name, copy in p.edges:
        j = gr.eindex(name)
        out.append((gr.edges[sys.eperm[g][j]].name, copy))
        g = sys.rest[g][j]
    return Path(start, tuple(out)), g


def restrict(sys: SelfSimilarSystem, g: int, p: Path) -> int:
    return act_on_path(sys, g, p)[1]


def _perm_arrays(graph: Graph, gen: GeneratorSpec):
    vp = []
    for v in graph.vertices:
        w = gen.vertex_perm.get(v, v)
        if not graph.has_vertex(w):
            raise SpecError(f"generator {gen.name}: unknown vertex {w!r}", witness=gen.name)
        vp.append(graph.vindex(w))
    ep = []
    for e in graph.edges:
        f = gen.edge_perm.get(e.name, e.name)
        if not graph.has_edge(f):
            raise SpecError(f"generator {gen.name}: unknown edge {f!r}", witness=gen.name)
        ep.append(graph.eindex(f))
    for key in list(gen.vertex_perm) + list(gen.edge_perm) + list(gen.restrictions):
        if not (graph.has_vertex(key) or graph.has_edge(key)):
            raise SpecError(f"generator {gen.name}: unknown name {key!r}", witness=gen.name)
    if len(set(vp)) != len(vp):
        raise EquivarianceViolation(f"generator {gen.name}: vertex map is not a bijection", witness=gen.name)
    if len(set(ep)) != len(ep):
        raise EquivarianceViolation(f"generator {gen.name}: edge map is not a bijection", witness=gen.name)
    for j, e in enumerate(graph.edges):
        f = graph.edges[ep[j]]
        if f.omega != e.omega or f.color != e.color:
            raise EquivarianceViolation(
                f"generator {gen.name}: {e.name} -> {f.name} changes multiplicity or color",
                witness=(gen.name, e.name))
        for end in ("range", "source"):
            if graph.vertices[vp[graph.vindex(getattr(e, end))]] != getattr(f, end):
                raise EquivarianceViolation(
                    f"generator {gen.name}: {end} of {e.name} not carried to {end} of {f.name}",
                    witness=(gen.name, e.name))
    return tuple(vp), tuple(ep)


def close_group(graph: Graph, generators: Iterable[GeneratorSpec], cap: int = DEFAULT_CAP,
                skeleton=None) -> SelfSimilarSystem:
    """Close generator data into a finite self-similar group.

    Raises ClosureCapExceeded when some portrait level outgrows ``cap``.
    """
    gens = tuple(sorted(generators, key=lambda g: g.name))
    names = [g.name for g in gens]
    if len(set(names)) != len(names):
        raise SpecError("duplicate generator names")
    letters = tuple((n, False) for n in names) + tuple((n, True) for n in names)
    pos = {n: i for i, n in enumerate(names)}
    ng = len(gens)
    E = len(graph.edges)
    perms = [_perm_arrays(graph, g) for g in gens]
    words = []
    for g in gens:
        row = []
        for e in graph.edges:
            w = g.restrictions.get(e.name)
            if w is None:
                row.append((pos[g.name],))
            else:
                row.append(tuple(pos[n] + (ng if inv else 0) for n, inv in parse_word(w, names)))
        words.append(row)
    # g|_e . s(e) = g . s(e) only needs the vertex permutations; checking it
    # up front keeps a bad table from sending the closure off to the cap
    for gi, g in enumerate(gens):
        for j, e in enumerate(graph.edges):
            v = graph.vindex(e.source)
            for letter in reversed(words[gi][j]):
                vp = perms[letter % ng][0]
                v = vp.index(v) if letter >= ng else vp[v]
            if v != perms[gi][0][graph.vindex(e.source)]:
                raise CocycleViolation(
                    f"generator {g.name}: restriction at {e.name} moves s({e.name}) differently from {g.name}",
                    witness=(g.name, e.name))

    def level_letters(level, below_letters):
        # portraits of all letters at this level
        out = []
        for a in range(ng):
            vp, ep = perms[a]
            if level.below is None:
                rest = ()
            else:
                rest = []
                for e in range(E):
                    x = 0
                    for letter in reversed(words[a][e]):
                        x = level.below.mul(below_letters[letter], x)
                    rest.append(x)
                rest = tuple(rest)
            out.append((vp, ep, rest))
        out += [level.inv_portrait(p) for p in out]
        return out

    def close(level, letter_portraits):
        ident = (tuple(range(len(graph.vertices))), tuple(range(E)),
                 () if level.below is None else (0,) * E)
        level.add(ident)
        queue = deque([0])
        lmul = [dict() for _ in letter_portraits]
        while queue:
            x = queue.popleft()
            for li, lp in enumerate(letter_portraits):
                p = level.mul_portrait(lp, level.elems[x])
                before = len(level.elems)
                y = level.add(p)
                lmul[li][x] = y
                if len(level.elems) > before:
                    if len(level.elems) > cap:
                        raise ClosureCapExceeded(
                            f"closure exceeds cap {cap} at restriction depth {level.depth}",
                            witness={"depth": level.depth, "size": len(level.elems)})
                    queue.append(y)
        lids = [level.index[p] for p in letter_portraits]
        return lids, lmul

    levels = []
    level = _Level(0, None)
    lids, lmul = close(level, level_letters(level, None))
    levels.append((level, lids, lmul))
    while True:
        prev, prev_lids, _ = levels[-1]
        level = _Level(prev.depth + 1, prev)
        lids, lmul = close(level, level_letters(level, prev_lids))
        levels.append((level, lids, lmul))
        if len(level.elems) == len(prev.elems):
            break

    final, final_lids, final_lmul = levels[-1]
    prev = levels[-2][0]
    # projection final -> prev is a bijection; invert it to resolve restrictions
    proj = _projection(levels)
    unproj = {p: i for i, p in enumerate(proj)}
    n = len(final.elems)
    vperm = tuple(p[0] for p in final.elems)
    eperm = tuple(p[1] for p in final.elems)
    rest = tuple(tuple(unproj[r] for r in p[2]) for p in final.elems)

    # shortest words from the BFS tree
    wordlist = [None] * n
    wordlist[0] = ()
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for li in range(len(letters)):
                y = final_lmul[li][x]
                if wordlist[y] is None:
                    wordlist[y] = (li,) + wordlist[x]
                    nxt.append(y)
        frontier = nxt
    letter_mul = tuple(tuple(final_lmul[li][x] for x in range(n)) for li in range(len(letters)))

    sys = SelfSimilarSystem(graph, gens, vperm, eperm, rest, tuple(wordlist), letters, letter_mul,
                            cap, skeleton)
    _check_axioms(sys)
    return sys


def _projection(levels):
    """Map ids of the last level to ids of the level below it."""
    maps = [None]
    for k in range(1, len(levels)):
        level, below = levels[k][0], levels[k - 1][0]
        down = maps[k - 1]
        proj = []
        for p in level.elems:
            rest = () if down is None else tuple(down[r] for r in p[2])
            proj.append(below.index[(p[0], p[1], rest)])
        maps.append(proj)
    return maps[-1]


def _check_axioms(sys: SelfSimilarSystem) -> None:
    gr = sys.graph
    src = [gr.vindex(e.source) for e in gr.edges]
    for g in sys.elements:
        for j in range(len(gr.edges)):
            h = sys.rest[g][j]
            if sys.vperm[h][src[j]] != sys.vperm[g][src[j]]:
                raise CocycleViolation(
                    f"element {sys.label(g)}: restriction at {gr.edges[j].name} moves its source "
                    "differently from the element itself",
                    witness=(sys.label(g), gr.edges[j].name))


def check_cocycle(sys: SelfSimilarSystem) -> list:
    """Exhaustive check of (gh)|_e = g|_{h.e} h|_e; returns violations."""
    bad = []
    E = len(sys.graph.edges)
    for g in sys.elements:
        for h in sys.elements:
            gh = sys.mul(g, h)
            for e in range(E):
                lhs = sys.rest[gh][e]
                rhs = sys.mul(sys.rest[g][sys.eperm[h][e]], sys.rest[h][e])
                if lhs != rhs:
                    bad.append((g, h, e))
    return bad


@dataclass(frozen=True)
class PseudoFreeness:
    holds: bool
    element: int | None = None
    path: Path | None = None

    def __bool__(self):
        return self.holds


def is_pseudo_free(sys: SelfSimilarSystem) -> PseudoFreeness:
    """Search the fixing automaton for a path back to the identity.

    States are (g, v) with g != 1 fixing v; an edge e into v fixed by g
    leads to (g|_e, s(e)).  Reaching the identity yields a witness.
    """
    key = "pseudo_free"
    if key in sys._cache:
        return sys._cache[key]
    gr = sys.graph
    parent = {}
    queue = deque()
    for g in range(1, sys.order):
        for i, v in enumerate(gr.vertices):
            if sys.vperm[g][i] == i:
                parent[(g, v)] = None
                queue.append((g, v))
    result = PseudoFreeness(True)
    while queue:
        state = queue.popleft()
        g, v = state
        for e in gr.incoming[v]:
            j = gr.eindex(e.name)
            if sys.eperm[g][j] != j:
                continue
            h = sys.rest[g][j]
            if h == 0:
                edges = [(e.name, 0)]
                cur = state
                while parent[cur] is not None:
                    cur, name = parent[cur]
                    edges.append((name, 0))
                edges.reverse()
                start = cur
                result = PseudoFreeness(False, start[0], Path(start[1], tuple(edges)))
                queue.clear()
                break
            nxt = (h, e.source)
            if nxt not in parent:
                parent[nxt] = (state, e.name)
                queue.append(nxt)
    sys._cache[key] = result
    return result


def vertex_stabilizer(sys: SelfSimilarSystem, v: str) -> tuple:
    i = sys.graph.vindex(v)
    return tuple(g for g in sys.elements if sys.vperm[g][i] == i)


def trivially_acting_pairs(sys: SelfSimilarSystem, M) -> tuple:
    """Pairs (g, v), g != 1, v in M, with g acting trivially on vE*M.

    Greatest fixpoint: start from all (g, v) with g.v = v and discard
    pairs with some edge e in vE^1 M that g moves or whose restricted pair
    (g|_e, s(e)) has already been discarded.
    """
    gr = sys.graph
    M = frozenset(M)
    alive = {(g, v) for g in sys.elements for v in M
             if sys.vperm[g][gr.vindex(v)] == gr.vindex(v)}
    changed = True
    while changed:
        changed = False
        for g, v in sorted(alive):
            for e in gr.edges_into(v, M):
                j = gr.eindex(e.name)
                if sys.eperm[g][j] != j or (sys.rest[g][j], e.source) not in alive:
                    alive.discard((g, v))
                    changed = True
                    break
    return tuple(sorted((g, v) for g, v in alive if g != 0))
