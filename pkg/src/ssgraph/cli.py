"""Command line interface.

Exit codes: 0 success, 1 invalid input, 2 failed precondition.
"""
from __future__ import annotations

import argparse
import sys as _sys
from fractions import Fraction

from . import io
from .action import is_pseudo_free
from .errors import MalformedSequence, SSGraphError
from .graph import singular_vertices
from .kgraph import (
    convergence_certificate, hereditary_saturated_lattice, m_perg, maximal_g_tails_k, periodicity_group,
    spectrum_components_k,
)
from .oracle import (
    maximal_tails_bruteforce, periodicity_bruteforce, pseudo_free_bruteforce, quasi_orbit_order_oracle,
)
from .spectrum import is_simple, prim_spectrum, quasi_orbit_space
from .tails import (
    breaking_vertices, classify_singular_vertex, enumerate_maximal_g_tails, fmt_set, sing0, tail_key,
)


def _load(args, kgraph=None):
    sys, spec = io.load_system(args.file, args.cap, kgraph)
    return sys, spec, io.Options.from_spec(spec)


def _tails_of(sys) -> list:
    if sys.skeleton is not None:
        return list(maximal_g_tails_k(sys))
    return [t.vertices for t in enumerate_maximal_g_tails(sys)]


def _pick_tails(sys, arg) -> list:
    tails = _tails_of(sys)
    if arg is None:
        return tails
    want = frozenset(x.strip() for x in arg.strip("{}").split(",") if x.strip())
    if want not in tails:
        raise MalformedSequence(f"{fmt_set(want)} is not a maximal G-tail", witness=sorted(want))
    return [want]


# commands return (text, payload)


def cmd_validate(args):
    sys, spec, _ = _load(args)
    pf = is_pseudo_free(sys)
    text = (f"ok: rank {sys.graph.rank}, {len(sys.graph.vertices)} vertices, {len(sys.graph.edges)} edges, "
            f"group order {sys.order}, pseudo-free {'yes' if pf else 'no'}")
    payload = {"rank": sys.graph.rank, "vertices": len(sys.graph.vertices), "edges": len(sys.graph.edges),
               "groupOrder": sys.order, "pseudoFree": bool(pf)}
    if not pf:
        text += f" (witness {sys.label(pf.element)} fixes {pf.path})"
        payload["witness"] = [sys.label(pf.element), str(pf.path)]
    return text, payload


def cmd_tails(args):
    sys, _, _ = _load(args)
    if sys.skeleton is not None:
        tails = maximal_g_tails_k(sys)
        lines = [fmt_set(M) for M in tails]
        hs = hereditary_saturated_lattice(sys)
        lines.append("hereditary saturated: " + " < ".join(fmt_set(H) for H in hs.sets))
        return "\n".join(lines), {"tails": [sorted(M) for M in tails],
                                  "hereditarySaturated": [sorted(H) for H in hs.sets]}
    tails = enumerate_maximal_g_tails(sys)
    lines = [str(t) for t in tails]
    payload = [{"vertices": sorted(t.vertices), "kind": t.kind, "period": t.period} for t in tails]
    return "\n".join(lines), {"tails": payload}


def cmd_classify(args):
    sys, _, _ = _load(args, kgraph=False)
    vs = [args.vertex] if args.vertex else list(singular_vertices(sys.graph))
    lines, rows = [], []
    for v in vs:
        case = classify_singular_vertex(sys, v)
        lines.append(f"{v}: case {case}")
        rows.append({"vertex": v, "case": case})
    bv, s0 = breaking_vertices(sys), sing0(sys)
    lines.append(f"breaking vertices: {fmt_set(bv)}")
    lines.append(f"sing0: {fmt_set(s0)}")
    return "\n".join(lines), {"singular": rows, "breaking": list(bv), "sing0": list(s0)}


def cmd_spectrum(args):
    sys, _, opts = _load(args)
    if sys.skeleton is not None:
        box = args.box or opts.per_box
        sp = spectrum_components_k(sys, box)
        names = [c.label() for c in sp.components]
        rel = [f"{fmt_set(a.tail)} < {fmt_set(b.tail)}" for i, a in enumerate(sp.components)
               for j, b in enumerate(sp.components) if i != j and sp.leq[i][j]]
        text = f"components: {' , '.join(names)}; order: {', '.join(rel) if rel else 'discrete'}"
        payload = {"components": [{"tail": sorted(c.tail), "per": [list(r) for r in c.per.basis],
                                   "torusRank": c.per.rank} for c in sp.components],
                   "leq": [list(r) for r in sp.leq], "box": box}
        return text, payload
    sp = prim_spectrum(sys)
    payload = {"components": [{"kind": c.kind, "tail": sorted(c.tail), "vertex": c.vertex, "period": c.period}
                              for c in sp.components],
               "leq": [list(r) for r in sp.leq], "summary": sp.summary()}
    return sp.summary(), payload


def cmd_simplicity(args):
    sys, _, _ = _load(args, kgraph=False)
    v = is_simple(sys)
    if v:
        return "simple", {"simple": True, "failures": []}
    lines = ["not simple"] + [f"clause ({c}): {w}" for c, w in v.failures]
    return "\n".join(lines), {"simple": False, "failures": [[c, list(w)] for c, w in v.failures]}


def cmd_per(args):
    sys, _, opts = _load(args, kgraph=True)
    box = args.box or opts.per_box
    tails = _pick_tails(sys, args.tail)
    lines, rows = [], []
    for M in tails:
        r = periodicity_group(sys, M, box)
        lines.append(str(r) if len(tails) == 1 else f"{fmt_set(M)}: {r}")
        rows.append({"tail": sorted(M), "basis": [list(b) for b in r.lattice.basis], "box": box,
                     "certificate": r.certificate})
    return "\n".join(lines), {"per": rows}


def cmd_mperg(args):
    sys, _, opts = _load(args, kgraph=True)
    box = args.box or opts.per_box
    lines, rows = [], []
    for M in _pick_tails(sys, args.tail):
        r = m_perg(sys, M, box)
        lines.append(f"{fmt_set(M)}: M_PerG = {fmt_set(r.vertices)} ({r.certificate})")
        rows.append({"tail": sorted(M), "mperg": sorted(r.vertices), "certificate": r.certificate})
    return "\n".join(lines), {"mperg": rows}


def _point(s: str):
    if "@" not in s:
        raise MalformedSequence(f"point {s!r} must look like TAIL@THETA", witness=s)
    tail, theta = s.split("@", 1)
    M = frozenset(x.strip() for x in tail.strip("{}").split(",") if x.strip())
    try:
        th = tuple(Fraction(x) for x in theta.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedSequence(f"bad character {theta!r}", witness=s) from exc
    return M, th


def cmd_converge(args):
    sys, _, _ = _load(args, kgraph=True)
    target = _point(args.target)
    seq = [_point(s) for s in args.seq or []]
    c = convergence_certificate(sys, target, seq, args.path_len, args.char_box)
    return f"{c.verdict}: {c.detail}", {"verdict": c.verdict, "detail": c.detail}


def cmd_oracle(args):
    sys, _, opts = _load(args)
    depth = args.depth or opts.oracle_depth
    window = args.window or opts.omega_window
    checks = []
    main = sorted(_tails_of(sys), key=tail_key)
    brute = sorted(maximal_tails_bruteforce(sys), key=tail_key)
    checks.append(("tails", main == brute))
    pf, _ = pseudo_free_bruteforce(sys, min(depth, 10), window)
    checks.append(("pseudo-free", bool(is_pseudo_free(sys)) == pf))
    if sys.skeleton is None:
        q = quasi_orbit_space(sys)
        leq = quasi_orbit_order_oracle(sys, [(p.kind, p.tail, p.vertex) for p in q.points], depth, window)
        checks.append(("quasi-orbit order", leq == q.leq))
    else:
        box = args.box or opts.per_box
        for M in main:
            found = periodicity_group(sys, M, box).found
            checks.append((f"Per {fmt_set(M)}", sorted(found) == sorted(periodicity_bruteforce(sys, M, box))))
    lines = [f"{name}: {'agree' if ok else 'DISAGREE'}" for name, ok in checks]
    payload = {"checks": [{"name": n, "agree": ok} for n, ok in checks], "depth": depth, "window": window}
    return "\n".join(lines), payload, (0 if all(ok for _, ok in checks) else 1)


def cmd_export(args):
    sys, spec, _ = _load(args)
    if args.dot:
        if args.of == "quasi-orbits":
            return io.quasi_orbit_dot(quasi_orbit_space(sys)).rstrip("\n"), None
        return io.spectrum_dot(prim_spectrum(sys)).rstrip("\n"), None
    return io.dumps(io.export_spec(sys, spec.get("options"))).rstrip("\n"), None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ssgraph", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        s = sub.add_parser(name, help=help)
        s.add_argument("file")
        s.add_argument("--json", action="store_true", help="machine-readable report")
        s.add_argument("--cap", type=int, default=None, help="group closure cap")
        s.set_defaults(fn=fn)
        return s

    add("validate", cmd_validate, "check a system file")
    add("tails", cmd_tails, "maximal G-tails")
    add("classify", cmd_classify, "singular vertex cases").add_argument("--vertex")
    s = add("spectrum", cmd_spectrum, "primitive spectrum components")
    s.add_argument("--box", type=int)
    add("simplicity", cmd_simplicity, "simplicity verdict")
    for name, fn in (("per", cmd_per), ("mperg", cmd_mperg)):
        s = add(name, fn, "periodicity lattice" if name == "per" else "M_PerG vertices")
        s.add_argument("--box", type=int)
        s.add_argument("--tail", help="comma-separated vertices of one tail")
    s = add("converge", cmd_converge, "bounded convergence certificate")
    s.add_argument("--target", required=True, help="TAIL@THETA, e.g. v@1/2,0")
    s.add_argument("--seq", action="append", help="sequence entry TAIL@THETA; the last one repeats")
    s.add_argument("--path-len", type=int, default=2)
    s.add_argument("--char-box", type=int, default=2)
    s = add("oracle", cmd_oracle, "compare with brute force")
    s.add_argument("--depth", type=int)
    s.add_argument("--window", type=int)
    s.add_argument("--box", type=int)
    s = add("export", cmd_export, "canonical spec or DOT")
    s.add_argument("--dot", action="store_true")
    s.add_argument("--of", choices=["spectrum", "quasi-orbits"], default="spectrum")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = args.fn(args)
    except SSGraphError as exc:
        if getattr(args, "json", False):
            _sys.stdout.write(io.dumps(io.report(args.command, error=type(exc).__name__, message=str(exc),
                                                 witness=exc.witness)))
        else:
            print(f"error: {type(exc).__name__}: {exc}", file=_sys.stderr)
            if exc.witness is not None:
                print(f"witness: {exc.witness}", file=_sys.stderr)
        return exc.exit_code
    text, payload, code = out if len(out) == 3 else (*out, 0)
    if args.json and payload is not None:
        _sys.stdout.write(io.dumps(io.report(args.command, **payload)))
    else:
        print(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
