"""Example systems used by the tests, scripts and CLI goldens.

Builders return plain spec dictionaries in the file schema;
``ssgraph.io.build_system`` turns them into systems.
"""
from __future__ import annotations

import random


def _e(name, rng, src, color=None, omega=False):
    d = {"name": name, "range": rng, "source": src}
    if color is not None:
        d["color"] = color
    if omega:
        d["multiplicity"] = "omega"
    return d


def enm(n: int, m: int, swap: str = "full") -> dict:
    """E_{n,m}: v0 with m loops e_j, and v1..vn each with a loop f_i and an
    edge g_i into v0.  ``swap`` picks the group: "none", "full" (cyclic
    rotation of the v_i, their edges and the loops at v0) or "vertices"
    (rotate only the v_i and their edges, fixing the loops at v0)."""
    vs = ["v0"] + [f"v{i}" for i in range(1, n + 1)]
    edges = [_e(f"f{i}", f"v{i}", f"v{i}") for i in range(1, n + 1)]
    edges += [_e(f"g{i}", "v0", f"v{i}") for i in range(1, n + 1)]
    edges += [_e(f"e{j}", "v0", "v0") for j in range(1, m + 1)]
    spec = {"rank": 1, "vertices": vs, "edges": edges, "group": {"generators": []}}
    if swap != "none" and n > 1:
        nxt = {i: i % n + 1 for i in range(1, n + 1)}
        gen = {
            "name": "s",
            "vertexPerm": {f"v{i}": f"v{nxt[i]}" for i in nxt},
            "edgePerm": {**{f"f{i}": f"f{nxt[i]}" for i in nxt}, **{f"g{i}": f"g{nxt[i]}" for i in nxt}},
            "restrictions": {},
        }
        if swap == "full" and m > 1:
            gen["edgePerm"].update({f"e{j}": f"e{j % m + 1}" for j in range(1, m + 1)})
        spec["group"]["generators"].append(gen)
    return spec


def e22(swap: str = "full") -> dict:
    return enm(2, 2, swap)


def e2_omega() -> dict:
    """E_{2,infinity}: the two loop families at v0 are omega edges."""
    spec = e22("full")
    for e in spec["edges"]:
        if e["name"] in ("e1", "e2"):
            e["multiplicity"] = "omega"
    return spec


def single_loop() -> dict:
    return {"rank": 1, "vertices": ["v"], "edges": [_e("e", "v", "v")], "group": {"generators": []}}


def rose(k: int) -> dict:
    """One vertex with k loops, trivial group."""
    return {"rank": 1, "vertices": ["v"], "edges": [_e(f"a{i}", "v", "v") for i in range(1, k + 1)],
            "group": {"generators": []}}


def source_only() -> dict:
    return {"rank": 1, "vertices": ["w"], "edges": [], "group": {"generators": []}}


def adding_machine() -> dict:
    """Binary odometer on a one-vertex two-loop graph: an infinite group."""
    spec = rose(2)
    spec["edges"] = [_e("x0", "v", "v"), _e("x1", "v", "v")]
    spec["group"]["generators"] = [{
        "name": "a", "vertexPerm": {}, "edgePerm": {"x0": "x1", "x1": "x0"},
        "restrictions": {"x0": "1", "x1": "a"},
    }]
    return spec


def cycle(p: int, rotate_by: int | None = 1) -> dict:
    """C_p with vertices c0..c{p-1}; edge k has range c_k and source c_{k+1}.

    Every vertex also has a hair h_k receiving an edge from c_k, so the
    graph has more than one tail.  The group is generated by rotation by
    ``rotate_by`` (None for the trivial group).
    """
    vs = [f"c{k}" for k in range(p)] + [f"h{k}" for k in range(p)]
    edges = [_e(f"z{k}", f"c{k}", f"c{(k + 1) % p}") for k in range(p)]
    edges += [_e(f"y{k}", f"h{k}", f"c{k}") for k in range(p)]
    gens = []
    if rotate_by is not None:
        r = rotate_by % p
        gens.append({
            "name": "r",
            "vertexPerm": {**{f"c{k}": f"c{(k + r) % p}" for k in range(p)},
                           **{f"h{k}": f"h{(k + r) % p}" for k in range(p)}},
            "edgePerm": {**{f"z{k}": f"z{(k + r) % p}" for k in range(p)},
                         **{f"y{k}": f"y{(k + r) % p}" for k in range(p)}},
            "restrictions": {},
        })
    return {"rank": 1, "vertices": vs, "edges": edges, "group": {"generators": gens}}


def twin_cycles(p: int) -> dict:
    """Two disjoint copies of C_p feeding a sink vertex, swapped and rotated."""
    vs = [f"a{k}" for k in range(p)] + [f"b{k}" for k in range(p)] + ["t"]
    edges = [_e(f"za{k}", f"a{k}", f"a{(k + 1) % p}") for k in range(p)]
    edges += [_e(f"zb{k}", f"b{k}", f"b{(k + 1) % p}") for k in range(p)]
    edges += [_e("ta", "t", "a0"), _e("tb", "t", "b0")]
    swap = {
        "name": "s",
        "vertexPerm": {**{f"a{k}": f"b{k}" for k in range(p)}, **{f"b{k}": f"a{k}" for k in range(p)}},
        "edgePerm": {**{f"za{k}": f"zb{k}" for k in range(p)}, **{f"zb{k}": f"za{k}" for k in range(p)},
                     "ta": "tb", "tb": "ta"},
        "restrictions": {},
    }
    return {"rank": 1, "vertices": vs, "edges": edges, "group": {"generators": [swap]}}


def breaking_example(case: int = 4) -> dict:
    """v carries loops and receives an omega edge o from a source z.

    MT(v) = {v} and v receives finitely many edges from it, so v is a
    breaking vertex: with one loop (case 3) the loop is a circuit without
    entry, with two loops (case 4) the tail {v} has none.
    """
    loops = [_e("a", "v", "v")] + ([_e("b", "v", "v")] if case == 4 else [])
    return {"rank": 1, "vertices": ["v", "z"], "edges": loops + [_e("o", "v", "z", omega=True)],
            "group": {"generators": []}}


def nonfree_rose() -> dict:
    """Three loops; g fixes a with g|_a = 1 and swaps b, c: not pseudo-free."""
    spec = {"rank": 1, "vertices": ["v"],
            "edges": [_e("a", "v", "v"), _e("b", "v", "v"), _e("c", "v", "v")],
            "group": {"generators": [{"name": "g", "vertexPerm": {}, "edgePerm": {"b": "c", "c": "b"},
                                      "restrictions": {"a": "1"}}]}}
    return spec


# rank two


def torus() -> dict:
    return {"rank": 2, "vertices": ["v"],
            "edges": [_e("b", "v", "v", 1), _e("r", "v", "v", 2)],
            "factorizations": [{"left": ["b", "r"], "right": ["r", "b"]}],
            "group": {"generators": []}}


def cycle_product(a: int, b: int) -> dict:
    """C_a x C_b as a 2-graph on vertices (i, j)."""
    vs = [f"x{i}_{j}" for i in range(a) for j in range(b)]
    edges, facts = [], []
    for i in range(a):
        for j in range(b):
            edges.append(_e(f"b{i}_{j}", f"x{i}_{j}", f"x{(i + 1) % a}_{j}", 1))
            edges.append(_e(f"r{i}_{j}", f"x{i}_{j}", f"x{i}_{(j + 1) % b}", 2))
    for i in range(a):
        for j in range(b):
            facts.append({"left": [f"b{i}_{j}", f"r{(i + 1) % a}_{j}"],
                          "right": [f"r{i}_{j}", f"b{i}_{(j + 1) % b}"]})
    return {"rank": 2, "vertices": vs, "edges": edges, "factorizations": facts,
            "group": {"generators": []}}


def loop_kgraph() -> dict:
    """Single loop as a rank-one k-graph."""
    return {"rank": 1, "vertices": ["v"], "edges": [_e("e", "v", "v")], "group": {"generators": []}}


def layered_2graph() -> dict:
    """Tori at u and w joined by p (color 1) and q (color 2) with range u
    and source w, so u >= w.  The tails are {u} and {u, w}."""
    edges = [_e("bu", "u", "u", 1), _e("ru", "u", "u", 2), _e("bw", "w", "w", 1), _e("rw", "w", "w", 2),
             _e("p", "u", "w", 1), _e("q", "u", "w", 2)]
    facts = [
        {"left": ["bw", "rw"], "right": ["rw", "bw"]},
        {"left": ["bu", "ru"], "right": ["ru", "bu"]},
        {"left": ["bu", "q"], "right": ["ru", "p"]},
        {"left": ["p", "rw"], "right": ["q", "bw"]},
    ]
    return {"rank": 2, "vertices": ["u", "w"], "edges": edges, "factorizations": facts,
            "group": {"generators": []}}


def swapped_torus() -> dict:
    """Two blue loops b1, b2 and one red loop r; Z/2 swaps the blue loops."""
    edges = [_e("b1", "v", "v", 1), _e("b2", "v", "v", 1), _e("r", "v", "v", 2)]
    facts = [{"left": ["b1", "r"], "right": ["r", "b1"]}, {"left": ["b2", "r"], "right": ["r", "b2"]}]
    gens = [{"name": "s", "vertexPerm": {}, "edgePerm": {"b1": "b2", "b2": "b1"}, "restrictions": {}}]
    return {"rank": 2, "vertices": ["v"], "edges": edges, "factorizations": facts,
            "group": {"generators": gens}}


def random_digraph(rng: random.Random, max_vertices: int = 6, max_edges: int = 10,
                   omega_rate: float = 0.0) -> dict:
    n = rng.randint(1, max_vertices)
    vs = [f"v{i}" for i in range(n)]
    m = rng.randint(0, max_edges)
    edges = []
    for k in range(m):
        e = _e(f"e{k}", rng.choice(vs), rng.choice(vs), omega=rng.random() < omega_rate)
        edges.append(e)
    return {"rank": 1, "vertices": vs, "edges": edges, "group": {"generators": []}}


def random_self_similar(rng: random.Random, max_vertices: int = 3, max_edges: int = 7,
                        n_gens: int = 1) -> dict:
    """Random restriction tables on a random multigraph.

    Edges are drawn between few vertices so parallel classes are common.
    Generators fix vertices and permute each parallel class (so
    equivariance holds automatically); restrictions are the identity, a
    generator or a short word.  The closure may be infinite; callers cap it.
    """
    n = rng.randint(1, max_vertices)
    vs = [f"v{i}" for i in range(n)]
    edges = [_e(f"e{k}", rng.choice(vs), rng.choice(vs)) for k in range(rng.randint(1, max_edges))]
    spec = {"rank": 1, "vertices": vs, "edges": edges, "group": {"generators": []}}
    names = [chr(ord("a") + i) for i in range(n_gens)]
    classes = {}
    for e in edges:
        classes.setdefault((e["range"], e["source"]), []).append(e["name"])
    for nm in names:
        perm = {}
        for group in classes.values():
            img = group[:]
            rng.shuffle(img)
            perm.update(dict(zip(group, img)))
        rest = {}
        for e in edges:
            word = [rng.choice(names + ["1", "1"]) for _ in range(rng.randint(1, 2))]
            rest[e["name"]] = " ".join(word)
        spec["group"]["generators"].append({"name": nm, "vertexPerm": {}, "edgePerm": perm,
                                            "restrictions": rest})
    return spec
