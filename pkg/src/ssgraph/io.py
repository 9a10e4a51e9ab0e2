"""System files, canonical export, DOT and machine reports."""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema
import yaml

from .action import DEFAULT_CAP, GeneratorSpec, SelfSimilarSystem, close_group, parse_word
from .errors import SpecError
from .graph import build_graph
from .kgraph import kgraph_action, validate_kgraph
from .tails import fmt_set

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Options:
    closure_cap: int = DEFAULT_CAP
    per_box: int = 3
    oracle_depth: int = 12
    omega_window: int = 3

    @classmethod
    def from_spec(cls, spec: dict) -> "Options":
        o = spec.get("options", {}) or {}
        d = cls()
        return cls(o.get("closureCap", d.closure_cap), o.get("perBox", d.per_box),
                   o.get("oracleDepth", d.oracle_depth), o.get("omegaWindow", d.omega_window))


@lru_cache(maxsize=1)
def schema() -> dict:
    return json.loads(resources.files("ssgraph").joinpath("schema.json").read_text())


def read_spec(path) -> dict:
    """Parse a JSON or YAML system file (YAML for .yaml/.yml)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc.strerror}", witness=str(path)) from exc
    try:
        if path.suffix in (".yaml", ".yml"):
            return yaml.safe_load(text)
        return json.loads(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise SpecError(f"cannot parse {path}: {exc}", witness=str(path)) from exc


def validate_spec(spec) -> None:
    """Raise SpecError naming the JSON path of the first schema violation."""
    validator = jsonschema.Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(spec), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        where = "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in err.absolute_path)
        raise SpecError(f"schema violation at {where}: {err.message}", witness=where)


def generator_specs(spec: dict) -> list:
    out = []
    for g in (spec.get("group") or {}).get("generators", []):
        out.append(GeneratorSpec(g["name"], dict(g.get("vertexPerm", {})), dict(g.get("edgePerm", {})),
                                 dict(g.get("restrictions", {}))))
    return out


def build_system(spec: dict, cap: int | None = None, kgraph: bool | None = None) -> SelfSimilarSystem:
    """Validate and close a spec.

    Rank >= 2 always goes through the k-graph path; rank one does when
    ``kgraph`` is true (no omega edges, no sources allowed there).
    """
    validate_spec(spec)
    opts = Options.from_spec(spec)
    cap = opts.closure_cap if cap is None else cap
    gens = generator_specs(spec)
    rank = spec.get("rank", 1)
    if kgraph is None:
        kgraph = rank >= 2
    if kgraph:
        return kgraph_action(validate_kgraph(spec), gens, cap)
    return close_group(build_graph(spec), gens, cap)


def load_system(path, cap: int | None = None, kgraph: bool | None = None):
    """(system, spec) for a file."""
    spec = read_spec(path)
    return build_system(spec, cap, kgraph), spec


def _word(w, names) -> str:
    toks = [n + ("'" if inv else "") for n, inv in parse_word(w, names)]
    return " ".join(toks) or "1"


def export_spec(sys: SelfSimilarSystem, options: dict | None = None) -> dict:
    """Canonical spec of a system: sorted names, explicit defaults dropped."""
    gr = sys.graph
    edges = []
    for e in gr.edges:
        d = {"name": e.name, "range": e.range, "source": e.source}
        if gr.rank > 1:
            d["color"] = e.color
        if e.omega:
            d["multiplicity"] = "omega"
        edges.append(d)
    names = [g.name for g in sys.generators]
    gens = []
    for g in sys.generators:
        gens.append({
            "name": g.name,
            "vertexPerm": {v: w for v, w in sorted(g.vertex_perm.items()) if v != w},
            "edgePerm": {e: f for e, f in sorted(g.edge_perm.items()) if e != f},
            "restrictions": {e: _word(w, names) for e, w in sorted(g.restrictions.items())},
        })
    out = {"rank": gr.rank, "vertices": list(gr.vertices), "edges": edges}
    if sys.skeleton is not None and gr.rank > 1:
        facts = []
        for (a, b), (c, d) in sorted(sys.skeleton.swap.items()):
            if gr.edge(a).color < gr.edge(b).color:
                facts.append({"left": [a, b], "right": [c, d]})
        out["factorizations"] = facts
    out["group"] = {"generators": gens}
    if options:
        out["options"] = dict(sorted(options.items()))
    return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=str) + "\n"


def report(command: str, **payload) -> dict:
    return {"schemaVersion": SCHEMA_VERSION, "command": command, **payload}


def _dot_id(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def hasse_dot(labels, leq, shapes=None, name: str = "order") -> str:
    """DOT for the Hasse diagram of a finite partial order; arrows point up."""
    n = len(labels)
    shapes = shapes or ["ellipse"] * n
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for i, (lab, shp) in enumerate(zip(labels, shapes)):
        lines.append(f"  n{i} [label={_dot_id(lab)}, shape={shp}];")
    for i in range(n):
        for j in range(n):
            if i == j or not leq[i][j]:
                continue
            if any(k not in (i, j) and leq[i][k] and leq[k][j] for k in range(n)):
                continue
            lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def quasi_orbit_dot(space) -> str:
    return hasse_dot([p.label() for p in space.points], space.leq, name="quasi_orbits")


def spectrum_dot(spec) -> str:
    labels, shapes = [], []
    for c in spec.components:
        if c.kind == "circle":
            labels.append(f"circle[{fmt_set(c.tail)}]\nT (n={c.period})")
            shapes.append("doublecircle")
        else:
            labels.append(c.label())
            shapes.append("box" if c.kind == "point" else "diamond")
    return hasse_dot(labels, spec.leq, shapes, name="spectrum")
