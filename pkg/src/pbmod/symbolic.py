"""Symbolic handling of the infinite-length objects.

Claims about genuinely infinite modules (the ring itself, its branches,
their fraction fields, the divisible torsion module E and its layer chain
A_n) are data in a fixed rule table, never computed: no finite truncation
reproduces them.  The one worked example: (A_n : E) = 0 exactly, while in
any finite shadow A_N the colon (A_n : A_N) is the nonzero power (t^(N-n)).
Finite truncations are computed and always labeled as shadows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import chains, modules
from .modules import FiniteModule, Submodule
from .rings import DVR, INF, PULLBACK, GeneralIdeal, RingSpec, nilpotent_generator_matrix
from .verdicts import Verdict

KINDS = (
    "regular_pullback",
    "regular_dvr",
    "quotient_field",
    "prufer",
    "prufer_layer",
    "cyclic_torsion",
    "separated_triple_infinite",
)


@dataclass(frozen=True)
class SymbolicModule:
    kind: str
    n: Optional[Union[int, float]] = None
    m: Optional[Union[int, float]] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown symbolic kind {self.kind!r}")
        if self.kind in ("prufer_layer", "cyclic_torsion"):
            if not isinstance(self.n, int) or self.n < 1:
                raise ValueError(f"{self.kind} needs a layer index n >= 1")
        if self.kind == "separated_triple_infinite":
            if self.n != INF and self.m != INF:
                raise ValueError("separated_triple_infinite needs an infinite branch")

    def to_json(self):
        out = {"kind": self.kind}
        if self.n is not None:
            out["n"] = "inf" if self.n == INF else self.n
        if self.m is not None:
            out["m"] = "inf" if self.m == INF else self.m
        return out

    @staticmethod
    def from_json(obj) -> "SymbolicModule":
        def dec(v):
            return INF if v == "inf" else v

        return SymbolicModule(
            obj["kind"], dec(obj.get("n")), dec(obj.get("m"))
        )


PREDICATES = ("pap_multiplication", "simple", "divisible", "indecomposable")

# Rule table for the infinite objects.  Values are exact-by-rule, keyed by
# a stable claim identifier naming the mathematical fact itself; callable
# entries dispatch on the layer index.
_RULES = {
    ("regular_pullback", "pap_multiplication"): (
        True,
        "rule:free-cyclic-module-is-pap-multiplication",
    ),
    ("regular_dvr", "pap_multiplication"): (
        True,
        "rule:free-cyclic-module-is-pap-multiplication",
    ),
    ("cyclic_torsion", "pap_multiplication"): (
        True,
        "rule:cyclic-torsion-quotient-is-pap-multiplication",
    ),
    ("prufer_layer", "pap_multiplication"): (
        True,
        "rule:divisible-layer-is-cyclic-torsion",
    ),
    ("prufer", "pap_multiplication"): (
        False,
        "rule:divisible-torsion-module-is-not-pap-multiplication",
    ),
    ("quotient_field", "pap_multiplication"): (
        False,
        "rule:fraction-field-is-not-pap-multiplication",
    ),
    ("separated_triple_infinite", "pap_multiplication"): (
        True,
        "rule:infinite-separated-pair-is-pap-multiplication",
    ),
    ("regular_pullback", "indecomposable"): (True, "rule:local-ring-is-indecomposable"),
    ("regular_dvr", "indecomposable"): (True, "rule:local-ring-is-indecomposable"),
    ("quotient_field", "indecomposable"): (
        True,
        "rule:fraction-field-is-indecomposable",
    ),
    ("prufer", "indecomposable"): (True, "rule:divisible-torsion-is-indecomposable"),
    ("prufer_layer", "indecomposable"): (True, "rule:cyclic-is-indecomposable"),
    ("cyclic_torsion", "indecomposable"): (True, "rule:cyclic-is-indecomposable"),
    ("separated_triple_infinite", "indecomposable"): (
        True,
        "rule:infinite-separated-pair-is-indecomposable",
    ),
    ("prufer", "divisible"): (True, "rule:divisible-by-construction"),
    ("quotient_field", "divisible"): (True, "rule:divisible-by-construction"),
}


def symbolic_predicates(m: SymbolicModule, which: str) -> Verdict:
    """Rule-table lookup; every verdict names the rule it came from."""
    if which not in PREDICATES:
        raise ValueError(f"unknown predicate {which!r}")
    if which == "simple":
        value = m.kind in ("prufer_layer", "cyclic_torsion") and m.n == 1
        return Verdict(value, note="rule:simple-iff-first-layer")
    if (m.kind, which) in _RULES:
        value, rule = _RULES[(m.kind, which)]
        return Verdict(value, note=f"{rule} [symbolic]")
    if which == "divisible":
        return Verdict(False, note="rule:nondivisible-by-construction")
    raise ValueError(f"no rule for kind {m.kind!r}, predicate {which!r}")


def rule_table():
    """Dump of every symbolic rule, deterministic order."""
    rows = []
    for (kind, pred), (value, rule) in sorted(_RULES.items()):
        rows.append({"kind": kind, "predicate": pred, "value": value, "rule": rule})
    rows.append(
        {
            "kind": "prufer_layer|cyclic_torsion",
            "predicate": "simple",
            "value": "n == 1",
            "rule": "rule:simple-iff-first-layer",
        }
    )
    rows.append(
        {
            "kind": "prufer_layer",
            "predicate": "colon_in_divisible_hull",
            "value": "zero",
            "rule": "rule:layer-colon-in-divisible-hull-vanishes",
        }
    )
    return rows


def symbolic_colon(n: int) -> dict:
    """The exact colon (A_n : E) of a layer inside the divisible module.

    The symbolic value is zero; every finite shadow disagrees (the
    truncated colon is a nonzero power that shrinks as the truncation
    grows), which is why this value is a rule, not a computation.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError("layer index must be a positive integer")
    return {
        "symbolic": "zero",
        "rule": "rule:layer-colon-in-divisible-hull-vanishes",
        "shadow_note": "finite truncation at N gives the power (t^(N-n)), nonzero for every N",
    }


def truncate_prufer(N: int, p: int = 2) -> FiniteModule:
    """Shadow of the divisible module: one Jordan block of size N.

    The layer A_k is the kernel of X^k; the divisibility identity
    P*A_(k+1) = A_k holds for every k < N.
    """
    if N < 1:
        raise ValueError("truncation must be >= 1")
    J = np.zeros((N, N), dtype=np.int64)
    for i in range(N - 1):
        J[i + 1, i] = 1
    return FiniteModule(p, J)


def prufer_layer_submodule(M: FiniteModule, n: int) -> Submodule:
    """A_n inside a truncated shadow: the kernel of X^n."""
    from . import linalg

    if n > M.dim:
        raise ValueError(f"layer {n} exceeds truncation {M.dim}")
    return Submodule.from_rows(
        M, linalg.nullspace(linalg.matpow(M.X, n, M.p), M.p), check=False
    )


def truncation_colon(n: int, N: int, p: int = 2) -> GeneralIdeal:
    """(A_n : A_N) inside the size-N shadow, by linear algebra."""
    if n > N:
        raise ValueError(f"layer {n} exceeds truncation {N}")
    J = np.zeros((N, N), dtype=np.int64)
    for i in range(N - 1):
        J[i + 1, i] = 1
    M = FiniteModule(p, J)
    return modules.colon_ideal(prufer_layer_submodule(M, n), M)


def truncate(m: SymbolicModule, N: int, p: int = 2) -> FiniteModule:
    """Finite shadow of a truncatable symbolic module, flagged truncated."""
    if N < 1:
        raise ValueError("truncation must be >= 1")
    if m.kind == "quotient_field":
        raise ValueError(
            "quotient_field has no finite shadow "
            "(rule:fraction-field-has-no-nonzero-finite-quotient)"
        )
    if m.kind in ("prufer", "regular_dvr"):
        J = np.zeros((N, N), dtype=np.int64)
        for i in range(N - 1):
            J[i + 1, i] = 1
        return FiniteModule(p, J, truncated=True)
    if m.kind in ("prufer_layer", "cyclic_torsion"):
        n = m.n
        J = np.zeros((n, n), dtype=np.int64)
        for i in range(n - 1):
            J[i + 1, i] = 1
        # a layer is exactly the cyclic torsion quotient, so no flag
        return FiniteModule(p, J, truncated=(m.kind == "prufer_layer"))
    if m.kind == "regular_pullback":
        spec = RingSpec(p, N, PULLBACK)
        X = nilpotent_generator_matrix(spec, 0)
        Y = nilpotent_generator_matrix(spec, 1)
        return FiniteModule(p, X, Y, truncated=True)
    if m.kind == "separated_triple_infinite":
        t = chains.SeparatedTriple(m.n, m.m)
        r = chains.realize(t, p, truncation=N)
        return r.module
    raise ValueError(f"kind {m.kind!r} is not truncatable")
