"""Batch command-line front end.

Subcommands: check, classify, decompose, realize, amalgamate, audit, dot,
rules.  JSON in, deterministic JSON out (sorted keys, no timestamps); exit
0 on success regardless of mathematical verdict, 2 on malformed input, 3
on budget refusal.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import chains, decomp, modules, report, symbolic
from .budgets import Budget, BudgetExceeded, DEFAULT_BUDGET
from .chains import ChainDescriptor
from .modules import FiniteModule
from .rings import DVR, PULLBACK


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _budget(args) -> Budget:
    b = DEFAULT_BUDGET
    if getattr(args, "budget_subspaces", None):
        b = Budget(
            triples=b.triples,
            submodule_dim=dict(b.submodule_dim),
            max_submodules=args.budget_subspaces,
            end_elements=b.end_elements,
            iso_combinations=b.iso_combinations,
        )
    return b


def _load_module(args) -> FiniteModule:
    """Module from file: either matrix data or a descriptor to realize."""
    obj = _load_json(args.infile)
    if "chain" in obj:
        d = ChainDescriptor.from_json(obj)
        p = obj.get("p", args.p)
        M = chains.realize(d, p, truncation=args.trunc).module
    else:
        M = FiniteModule.from_json(obj)
    if args.mode and M.mode != args.mode:
        raise ValueError(f"module has mode {M.mode}, expected {args.mode}")
    return M


def _emit(args, obj) -> None:
    if args.pretty:
        text = _pretty(obj)
    else:
        text = json.dumps(obj, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _pretty(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k in obj:
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(
            _pretty(v, indent) if isinstance(v, (dict, list)) else f"{pad}- {json.dumps(v)}"
            for v in obj
        )
    return f"{pad}{json.dumps(obj)}"


def cmd_check(args) -> int:
    M = _load_module(args)
    budget = _budget(args)
    verdict = decomp.classify(M, budget)
    out = {
        "valid": True,
        "dim": M.dim,
        "mode": M.mode,
        "indecomposable": verdict.indecomposable.to_json(),
        "pap_multiplication": verdict.pap_multiplication.to_json(),
        "multiplication": verdict.multiplication.to_json(),
        "consistency": verdict.consistency,
    }
    if verdict.separated is not None:
        out["separated"] = verdict.separated.to_json()
    if verdict.witness is not None:
        out["witness"] = verdict.witness
    _emit(args, out)
    return _verdict_exit(verdict)


def _verdict_exit(verdict) -> int:
    """0 normally; 3 when the brute-force verdicts were refused by budget."""
    for v in (verdict.pap_multiplication, verdict.multiplication):
        if v is not None and v.value is None and v.note.startswith("budget refusal"):
            return 3
    return 0


def cmd_classify(args) -> int:
    M = _load_module(args)
    verdict = decomp.classify(M, _budget(args))
    _emit(args, verdict.to_json())
    return _verdict_exit(verdict)


def cmd_decompose(args) -> int:
    M = _load_module(args)
    parts = decomp.decompose(M, _budget(args))
    _emit(args, {"summands": [A.to_json() for A in parts]})
    return 0


def cmd_realize(args) -> int:
    obj = _load_json(args.infile)
    d = ChainDescriptor.from_json(obj)
    p = obj.get("p", args.p)
    realized = chains.realize(d, p, truncation=args.trunc)
    _emit(args, realized.to_json())
    return 0


def cmd_amalgamate(args) -> int:
    obj = _load_json(args.infile)
    parts = [chains.SeparatedTriple(n, m) for n, m in obj["parts"]]
    idents = [tuple(pair) for pair in obj["identifications"]]
    allow = bool(obj.get("allow_cycles", False)) or args.include_bands
    M, rep = chains.amalgamate(parts, idents, obj.get("p", args.p), allow_cycles=allow)
    _emit(args, {"module": M.to_json(), "representation": rep.to_json()})
    return 0


def cmd_audit(args) -> int:
    budget = report.audit_budget(args.p, _budget(args))
    rep = report.audit(
        args.s_max, args.exp_max, args.p,
        include_bands=args.include_bands, budget=budget,
    )
    _emit(args, rep)
    return 0


def cmd_rules(args) -> int:
    _emit(args, {"rules": symbolic.rule_table()})
    return 0


def cmd_dot(args) -> int:
    obj = _load_json(args.infile)
    if "chain" in obj:
        d = ChainDescriptor.from_json(obj)
        v = d.validate()
        if not v:
            raise ValueError(f"invalid descriptor: {v.note}")
        text = descriptor_dot(d)
    elif obj.get("dim") == 0 or (
        "X" in obj and len(obj["X"]) == 0
    ):
        text = "digraph M {\n}"
    else:
        raise ValueError("dot needs a descriptor file or a zero module")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def descriptor_dot(d: ChainDescriptor) -> str:
    """Graph of the basis monomials with x- and y-action edges.

    Linked socle vectors appear as one merged, double-circled node; every
    deepest branch element points at the 0 sink.
    """
    if not d.is_finite:
        raise ValueError("dot rendering needs a finite descriptor")
    lines = ["digraph M {", '  rankdir="LR";']
    node_of = {}  # (gen, branch, depth) -> node id
    for i, t in enumerate(d.pairs, start=1):
        node_of[(i, "a", 0)] = f"a{i}"
        for j in range(1, t.n):
            node_of[(i, "x", j)] = f"x{j}_a{i}"
        for j in range(1, t.m):
            node_of[(i, "y", j)] = f"y{j}_a{i}"
    # merge link i: deepest x-node of a_i with deepest y-node of a_(i+1)
    for i in range(1, d.s):
        t, t2 = d.pairs[i - 1], d.pairs[i]
        merged = f"link{i}"
        node_of[(i, "x", t.n - 1)] = merged
        node_of[(i + 1, "y", t2.m - 1)] = merged
    decl = {}
    for key in sorted(node_of):
        nid = node_of[key]
        if nid in decl:
            continue
        shape = "doublecircle" if nid.startswith("link") else "ellipse"
        decl[nid] = f'  {nid} [shape={shape}];'
    lines.extend(decl[nid] for nid in sorted(decl))
    lines.append("  zero [label=\"0\", shape=point];")
    edges = []
    for i, t in enumerate(d.pairs, start=1):
        prev = node_of[(i, "a", 0)]
        for j in range(1, t.n):
            edges.append(f'  {prev} -> {node_of[(i, "x", j)]} [label="x"];')
            prev = node_of[(i, "x", j)]
        edges.append(f'  {prev} -> zero [label="x"];')
        prev = node_of[(i, "a", 0)]
        for j in range(1, t.m):
            edges.append(f'  {prev} -> {node_of[(i, "y", j)]} [label="y"];')
            prev = node_of[(i, "y", j)]
        edges.append(f'  {prev} -> zero [label="y"];')
    lines.extend(sorted(set(edges), key=edges.index))
    lines.append("}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pbmod", description="exact-arithmetic module classification workbench"
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, infile=True):
        if infile:
            sp.add_argument("--in", dest="infile", required=True, help="input JSON file")
        sp.add_argument("--p", type=int, default=2, help="prime (when not in the file)")
        sp.add_argument("--trunc", type=int, default=None, help="truncation for infinite ends")
        sp.add_argument("--mode", choices=[PULLBACK, DVR], default=None)
        sp.add_argument("--budget-subspaces", type=int, default=None,
                        help="cap on enumerated submodules")
        sp.add_argument("--include-bands", action="store_true")
        sp.add_argument("--pretty", action="store_true")
        sp.add_argument("--out", default=None, help="write output to file")

    for name, fn in (
        ("check", cmd_check),
        ("classify", cmd_classify),
        ("decompose", cmd_decompose),
        ("realize", cmd_realize),
        ("amalgamate", cmd_amalgamate),
        ("dot", cmd_dot),
    ):
        sp = sub.add_parser(name)
        common(sp)
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("audit")
    sp.add_argument("--s-max", type=int, default=2)
    sp.add_argument("--exp-max", type=int, default=2)
    common(sp, infile=False)
    sp.set_defaults(fn=cmd_audit)

    sp = sub.add_parser("rules")
    common(sp, infile=False)
    sp.set_defaults(fn=cmd_rules)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except BudgetExceeded as e:
        print(f"budget refusal: {e}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
