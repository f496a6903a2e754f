"""Text and JSON interchange formats.

Signature text: one line, arity-tagged, e.g. ``sig d=3 [1,1,0,0]``; the
JSON equivalent is ``{"arity": 3, "values": [...]}``.  Entries written as
integers or fractions ("1/2") stay exact and enable the rational oracle.

Graph files: a ``n m`` header line followed by m ``u v`` lines, 0-indexed,
with self-loops as ``u u``; ``#`` starts a comment.

Matrices are serialized as 2x2 arrays of [re, im] pairs.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

import numpy as np

from .classify import ClassificationOutcome
from .errors import ArgumentError
from .evaluator import ApproxResult
from .graphs import Multigraph, OpenGadget
from .signatures import SymmetricSignature, signature
from .stability import StabilityCertificate

_SIG_RE = re.compile(r"^\s*sig\s+d\s*=\s*(\d+)\s*\[([^\]]*)\]\s*$")


def parse_number(tok: str):
    tok = tok.strip()
    if "/" in tok:
        return Fraction(tok)
    try:
        return int(tok)
    except ValueError:
        return float(tok)


def number_to_json(v):
    if isinstance(v, (tuple, list)):
        return [number_to_json(x) for x in v]
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else str(v)
    if isinstance(v, int):
        return v
    if isinstance(v, float):
        return v + 0.0  # drops the sign of -0.0
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v) + 0.0
    c = complex(v)
    if c.imag == 0:
        return c.real + 0.0
    return [c.real, c.imag]


def parse_signature(text: str) -> SymmetricSignature:
    """Parse either the one-line text form or the JSON object form."""
    stripped = text.strip()
    if stripped.startswith("{"):
        obj = json.loads(stripped)
        values = [parse_number(v) if isinstance(v, str) else v for v in obj["values"]]
        sig = signature(values)
        if "arity" in obj and int(obj["arity"]) != sig.arity:
            raise ArgumentError("arity field does not match the number of values")
        return sig
    m = _SIG_RE.match(stripped)
    if not m:
        raise ArgumentError("expected `sig d=<arity> [v0,v1,...]` or a JSON object")
    arity = int(m.group(1))
    values = [parse_number(t) for t in m.group(2).split(",") if t.strip()]
    sig = signature(values)
    if sig.arity != arity:
        raise ArgumentError(f"declared arity {arity} but {len(values)} values")
    return sig


def dump_signature(sig: SymmetricSignature) -> str:
    body = ",".join(str(v) for v in sig.values)
    return f"sig d={sig.arity} [{body}]"


def signature_to_json(sig: SymmetricSignature) -> dict:
    return {"arity": sig.arity, "values": [number_to_json(v) for v in sig.values]}


def parse_graph(text: str) -> Multigraph:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ArgumentError("empty graph file")
    head = lines[0].split()
    if len(head) != 2:
        raise ArgumentError("graph header must be `n m`")
    n, m = int(head[0]), int(head[1])
    if len(lines) - 1 != m:
        raise ArgumentError(f"expected {m} edge lines, found {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ArgumentError(f"bad edge line: {ln!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return Multigraph(n, tuple(edges))


def dump_graph(g: Multigraph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def matrix_to_json(M) -> list:
    return [[[c.real + 0.0, c.imag + 0.0] for c in row] for row in M.rows()]


def certificate_to_json(cert: StabilityCertificate) -> dict:
    return {
        "eps": cert.eps,
        "margin": None if cert.margin == float("inf") else cert.margin,
        "roots": [[r.real, r.imag] for r in np.atleast_1d(np.asarray(cert.roots, dtype=complex))],
    }


def outcome_to_json(out: ClassificationOutcome) -> dict:
    doc = {"tag": out.tag, "params": {k: number_to_json(v) for k, v in out.params.items()}}
    if out.matrix is not None:
        doc["matrix"] = matrix_to_json(out.matrix)
        doc["use_reversal"] = out.use_reversal
    if out.certificate is not None:
        doc["certificate"] = certificate_to_json(out.certificate)
    return doc


def approx_to_json(res: ApproxResult) -> dict:
    return {
        "estimate": res.estimate,
        "k_used": res.k_used,
        "eps_requested": res.eps_requested,
        "eps_certificate": res.eps_certificate,
        "delta": res.delta,
        "delta_certified": res.delta_certified,
        "transform": matrix_to_json(res.transform),
        "scale_factor": res.scale_factor,
        "reversed": res.reversed,
        "converged": res.converged,
        "diagnostics": {
            "estimates": res.diagnostics["estimates"],
            "engine": res.diagnostics["engine"],
            "rung_sound": res.diagnostics["rung_sound"],
            "rungs_tried": res.diagnostics["rungs_tried"],
            "imag_residue": res.diagnostics["imag_residue"],
        },
    }


def parse_gadget(text: str):
    """Gadget JSON: inner graph, dangling list, named signatures, edge signature.

    Schema: {"n": int, "edges": [[u,v],...], "dangling": [[vertex,count],...],
             "signatures": {name: {"arity":..,"values":[..]}},
             "assign": [name per vertex], "edge_signature": [b0,b1,b2]}
    """
    obj = json.loads(text)
    g = Multigraph(int(obj["n"]), tuple((int(u), int(v)) for u, v in obj["edges"]))
    named = {}
    for name, spec in obj["signatures"].items():
        values = [parse_number(v) if isinstance(v, str) else v for v in spec["values"]]
        named[name] = signature(values)
    assign = tuple(named[name] for name in obj["assign"])
    dangling = tuple((int(v), int(c)) for v, c in obj["dangling"])
    edge_sig = [parse_number(v) if isinstance(v, str) else v for v in obj["edge_signature"]]
    return OpenGadget(g, dangling, assign), edge_sig


def roots_csv(rows) -> str:
    """CSV of roots: columns re,im,poly_id."""
    lines = ["re,im,poly_id"]
    for r, poly_id in rows:
        c = complex(r)
        lines.append(f"{c.real!r},{c.imag!r},{poly_id}")
    return "\n".join(lines) + "\n"
