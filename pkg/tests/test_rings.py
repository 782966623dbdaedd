import itertools

import numpy as np
import pytest

from pbmod import rings
from pbmod.budgets import DEFAULT_BUDGET
from pbmod.rings import (
    DVR,
    PULLBACK,
    GeneralIdeal,
    QuotientRingElement,
    RingSpec,
    SplitIdeal,
    general_ideal_algebra,
    ideal_predicates_bruteforce,
    make_quotient_ring,
    ring_arith,
    ring_tables,
    split_ideal_algebra,
)

Q3 = make_quotient_ring(2, 3)
Q2_3 = make_quotient_ring(3, 2)
D4 = make_quotient_ring(2, 4, DVR)


def elt(spec, **mono):
    coeffs = np.zeros(spec.dim, dtype=np.int64)
    for k, v in mono.items():
        if k == "c":
            coeffs[0] = v
        elif k.startswith("x"):
            coeffs[int(k[1:])] = v
        elif k.startswith("y"):
            coeffs[spec.N - 1 + int(k[1:])] = v
    return QuotientRingElement.make(spec, coeffs)


def test_ring_spec_shapes():
    assert Q3.dim == 5 and Q3.size == 32 and Q3.unit_count == 16
    assert D4.dim == 4 and D4.size == 16
    assert Q2_3.dim == 3 and Q2_3.size == 27 and Q2_3.unit_count == 2 * 3**2
    with pytest.raises(ValueError):
        make_quotient_ring(4, 3)
    with pytest.raises(ValueError):
        make_quotient_ring(2, 0)


def test_arithmetic_relations():
    x, y = elt(Q3, x1=1), elt(Q3, y1=1)
    assert (x * y).is_zero
    assert ((x + y) ** 2 - (x * x + y * y)).is_zero
    u = elt(Q3, c=1, x1=1)
    v = elt(Q3, c=1, x1=1, x2=1)
    assert (u * v - elt(Q3, c=1)).is_zero  # (1+x)(1+x+x^2) = 1 mod x^3, p=2
    assert u.is_unit and not x.is_unit
    assert ring_arith(x, y, "mul").is_zero


def test_unit_orbit_reduction():
    tables = ring_tables(Q3)
    # associate classes: scaling by units never changes the canonical code
    for a in range(tables.size):
        for u in np.nonzero(tables.unit_mask)[0][:4]:
            assert tables.canon[tables.table[a, u]] == tables.canon[a]


def all_split_ideals(N):
    yield SplitIdeal("zero")
    yield SplitIdeal("unit")
    for n in range(1, N + 1):
        yield SplitIdeal("p1", n=n)
        yield SplitIdeal("p2", m=n)
    for n in range(1, N + 1):
        for m in range(1, N + 1):
            yield SplitIdeal("mixed", n=n, m=m)


def test_split_embed_recognize_roundtrip():
    for I in all_split_ideals(3):
        G = I.embed(Q3)
        got = G.recognize_split()
        # exponents above N-1 collapse to the same embedded ideal; compare keys
        assert got.embed(Q3).key() == G.key()


def test_split_algebra_matches_embedded_algebra():
    # colon excluded: its exact value can have a zero component, which no
    # finite truncation reproduces (the truncated colon picks up the
    # monomials killed by the cutoff)
    ideals = list(all_split_ideals(2))
    for I, J in itertools.product(ideals, ideals):
        for op in ("sum", "product", "intersect"):
            K = split_ideal_algebra(I, J, op)
            KG = general_ideal_algebra(I.embed(Q3), J.embed(Q3), op)
            assert K.embed(Q3).key() == KG.key(), (I, J, op)


def test_split_colon_exact_values():
    assert split_ideal_algebra(
        SplitIdeal("mixed", n=2, m=2), SplitIdeal("mixed", n=1, m=1), "colon"
    ) == SplitIdeal("mixed", n=1, m=1)
    # only the zero ideal divides a branch power into zero
    assert split_ideal_algebra(
        SplitIdeal("zero"), SplitIdeal("p1", n=1), "colon"
    ) == SplitIdeal("p2", m=1)
    assert split_ideal_algebra(
        SplitIdeal("mixed", n=1, m=1), SplitIdeal("zero"), "colon"
    ) == SplitIdeal("unit")


def test_radical_of_proper_ideal_is_maximal():
    for I in all_split_ideals(3):
        if I.tag == "unit":
            continue
        G = I.embed(Q3)
        R = G.radical()
        assert R.key() == SplitIdeal("mixed", n=1, m=1).embed(Q3).key()


def test_general_ideal_generation_and_membership():
    x = np.zeros(Q3.dim, dtype=np.int64)
    x[1] = 1
    G = GeneralIdeal.from_generators(Q3, x.reshape(1, -1))
    assert G.dim == 2  # span{x, x^2}
    assert G.contains(np.array([0, 1, 1, 0, 0]))
    assert not G.contains(np.array([0, 0, 0, 1, 0]))
    diag = np.array([0, 1, 0, 1, 0], dtype=np.int64)
    D = GeneralIdeal.from_generators(Q3, diag.reshape(1, -1))
    assert D.recognize_split() is None  # the diagonal ideal is not split


def test_bruteforce_predicates_examples():
    # the maximal ideal is prime; a deeper mixed ideal is 2AP but not prime
    P = SplitIdeal("mixed", n=1, m=1).embed(Q3)
    assert ideal_predicates_bruteforce(P, "prime", DEFAULT_BUDGET).value
    I = SplitIdeal("mixed", n=2, m=2).embed(Q3)
    assert not ideal_predicates_bruteforce(I, "prime", DEFAULT_BUDGET).value
    assert ideal_predicates_bruteforce(I, "two_absorbing_primary", DEFAULT_BUDGET).value
    # in Q3 every product of two nonunits lands in P^2, so mixed(2,2) is
    # even 2-absorbing; depth 3 in Q4 is not
    assert ideal_predicates_bruteforce(I, "two_absorbing", DEFAULT_BUDGET).value
    Q4 = make_quotient_ring(2, 4)
    J = SplitIdeal("mixed", n=3, m=3).embed(Q4)
    v = ideal_predicates_bruteforce(J, "two_absorbing", DEFAULT_BUDGET)
    assert v.value is False and v.witness is not None
    a, b, c = v.witness
    assert J.contains((a * b * c).vector())
    assert not J.contains((a * b).vector())
    assert not J.contains((a * c).vector())
    assert not J.contains((b * c).vector())
    assert ideal_predicates_bruteforce(J, "two_absorbing_primary", DEFAULT_BUDGET).value


def test_dvr_power_recognition():
    t = np.zeros(D4.dim, dtype=np.int64)
    t[1] = 1
    G = GeneralIdeal.from_generators(D4, t.reshape(1, -1))
    assert G.recognize_power() == 1
    assert GeneralIdeal.from_basis(D4, np.eye(4, dtype=np.int64)).recognize_power() == 0


def test_json_roundtrips():
    spec2 = RingSpec.from_json(Q3.to_json())
    assert spec2 == Q3
    I = SplitIdeal("mixed", n=2, m=1)
    assert SplitIdeal.from_json(I.to_json()) == I
    G = I.embed(Q3)
    G2 = GeneralIdeal.from_json(G.to_json())
    assert G2.key() == G.key()
