"""Deterministic audit sweeps over realized chain descriptors.

Every row re-derives its verdicts from scratch by brute force and records
the claim it audits by a stable claim identifier.  Disagreement between a
claimed list membership and the oracle verdict is report content, never an
error; budget refusals are listed per instance and the sweep continues.
"""

from __future__ import annotations

import itertools

from . import __version__, chains, decomp, modules
from .budgets import Budget, BudgetExceeded, DEFAULT_BUDGET
from .chains import ChainDescriptor, SeparatedTriple
from .verdicts import Verdict

CLAIM_COLON_FAMILY = "claim:cover-colon-avoids-one-sided-powers"
CLAIM_COVER_BICONDITIONAL = "claim:module-and-separated-cover-share-multiplication-property"
CLAIM_LIST_MEMBERSHIP = "claim:listed-normal-forms-have-multiplication-property"

# audit instances go up to dimension 9 at p = 2; the sweep widens the
# default lattice budget accordingly instead of refusing those rows
AUDIT_SUBMODULE_DIM = {2: 10, 3: 6}


def audit_budget(p: int, base: Budget = DEFAULT_BUDGET) -> Budget:
    return base.with_submodule_dim(p, AUDIT_SUBMODULE_DIM.get(p, 0))


def colon_family_check(rep, budget: Budget) -> dict:
    """Check no submodule of the cover has a forbidden colon ideal.

    Forbidden family: the zero ideal and the one-sided powers (either
    branch power alone).  Applies to covers of non-separated modules.
    """
    out = {"claim": CLAIM_COLON_FAMILY, "value": True, "violations": []}
    try:
        subs = modules.enumerate_submodules(rep.S, budget)
    except BudgetExceeded as e:
        out["value"] = None
        out["refusal"] = str(e)
        return out
    for T in subs:
        col = modules.colon_ideal(T, rep.S)
        split = col.recognize_split()
        if split is not None and split.tag in ("zero", "p1", "p2"):
            out["value"] = False
            out["violations"].append(
                {"submodule": T.basis.tolist(), "colon": str(split)}
            )
    return out


def cover_biconditional_check(M, rep, budget: Budget) -> dict:
    """Both sides brute-forced: the module and its separated cover agree."""
    out = {"claim": CLAIM_COVER_BICONDITIONAL}
    try:
        left = modules.multiplication_predicates_cached(
            M, "pseudo_absorbing_primary_multiplication", budget
        )
        right = modules.multiplication_predicates_cached(
            rep.S, "pseudo_absorbing_primary_multiplication", budget
        )
    except BudgetExceeded as e:
        out["value"] = None
        out["refusal"] = str(e)
        return out
    out["module"] = left.value
    out["cover"] = right.value
    out["value"] = left.value == right.value
    return out


def _instance_row(descriptor: ChainDescriptor, p: int, budget: Budget) -> dict:
    realized = chains.realize(descriptor, p)
    M = realized.module
    rep = realized.representation
    row = {
        "kind": "chain",
        "descriptor": descriptor.to_json(),
        "dim": M.dim,
        "claims": [CLAIM_LIST_MEMBERSHIP],
        "refusals": [],
    }
    try:
        verdict = decomp.classify(M, budget)
        row["syntactic"] = verdict.syntactic
        row["separated"] = verdict.separated.value
        row["indecomposable"] = verdict.indecomposable.value
        row["pap_multiplication"] = verdict.pap_multiplication.to_json()
        row["multiplication"] = verdict.multiplication.to_json()
        row["consistency"] = verdict.consistency
        if verdict.witness is not None:
            row["witness"] = verdict.witness
    except BudgetExceeded as e:
        row["refusals"].append(str(e))
        row["consistency"] = "unknown"
    if descriptor.s >= 2:
        row["colon_family"] = colon_family_check(rep, budget)
        row["cover_biconditional"] = cover_biconditional_check(M, rep, budget)
    return row


def _band_row(parts, p: int, budget: Budget) -> dict:
    M, rep = chains.amalgamate(
        parts, [(0, 1), (1, 0)], p, allow_cycles=True
    )
    row = {
        "kind": "band",
        "parts": [t.to_json() for t in parts],
        "dim": M.dim,
        "claims": [CLAIM_LIST_MEMBERSHIP],
        "refusals": [],
    }
    try:
        verdict = decomp.classify(M, budget)
        row["syntactic"] = verdict.syntactic
        row["separated"] = verdict.separated.value
        row["indecomposable"] = verdict.indecomposable.value
        row["pap_multiplication"] = verdict.pap_multiplication.to_json()
        row["consistency"] = verdict.consistency
    except BudgetExceeded as e:
        row["refusals"].append(str(e))
        row["consistency"] = "unknown"
    return row


def band_parts(exp_max: int):
    """Closed-cycle gluing data: both branches of both parts consumed."""
    seen = set()
    out = []
    for a, b in itertools.product(
        itertools.product(range(2, exp_max + 1), repeat=2), repeat=2
    ):
        key = min((a, b), (b, a))
        if key in seen:
            continue
        seen.add(key)
        out.append([SeparatedTriple(*a), SeparatedTriple(*b)])
    return out


def audit(
    s_max: int,
    exp_max: int,
    p: int,
    include_bands: bool = False,
    budget: Budget = None,
) -> dict:
    """Sweep every valid canonical descriptor within the bounds."""
    if budget is None:
        budget = audit_budget(p)
    descriptors = chains.enumerate_descriptors(s_max, exp_max)
    instances = [_instance_row(d, p, budget) for d in descriptors]
    if include_bands:
        instances += [_band_row(parts, p, budget) for parts in band_parts(exp_max)]
    summary = {
        "instances": len(instances),
        "agree": sum(1 for r in instances if r.get("consistency") == "agree"),
        "disagree": sum(1 for r in instances if r.get("consistency") == "disagree"),
        "unknown": sum(1 for r in instances if r.get("consistency") == "unknown"),
        "refusals": sum(len(r["refusals"]) for r in instances),
    }
    return {
        "version": __version__,
        "parameters": {
            "s_max": s_max,
            "exp_max": exp_max,
            "p": p,
            "include_bands": include_bands,
        },
        "budgets": {
            "submodule_dim": dict(budget.submodule_dim),
            "max_submodules": budget.max_submodules,
            "triples": budget.triples,
        },
        "instances": instances,
        "summary": summary,
    }
