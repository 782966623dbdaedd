import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pbmod import chains, modules as md
from pbmod.chains import INF, ChainDescriptor, SeparatedTriple
from pbmod.modules import Submodule


def desc(*pairs):
    return ChainDescriptor(tuple(SeparatedTriple(n, m) for n, m in pairs))


def test_validate_descriptor():
    assert chains.validate_descriptor(desc((2, 2))).value
    assert chains.validate_descriptor(desc((2, 1), (1, 2))).value
    assert chains.validate_descriptor(desc((2, INF), (INF, 2))).value
    # linking exponents must be finite and at least 2
    assert not chains.validate_descriptor(desc((1, 1), (1, 2))).value
    assert not chains.validate_descriptor(desc((INF, 1), (1, 2))).value
    assert not chains.validate_descriptor(desc((2, 2), (INF, 2), (2, 2))).value
    with pytest.raises(ValueError):
        desc((2, 0))


def test_chain_types_and_mirror():
    assert desc((2, 2)).chain_type() == 1
    assert desc((INF, 2)).chain_type() == 2
    assert desc((2, INF)).chain_type() == 3
    assert desc((2, INF), (INF, 2)).chain_type() == 4
    d = desc((2, 1), (3, 2))
    assert d.mirror() == desc((2, 3), (1, 2))
    assert d.mirror().mirror() == d
    assert desc((2, 1)).canonical() == desc((1, 2))


def test_realize_single_triple():
    r = chains.realize(desc((2, 2)), 2)
    M = r.module
    assert M.dim == 3 and not r.truncated
    assert (M.X == np.array([[0, 0, 0], [1, 0, 0], [0, 0, 0]])).all()
    assert (M.Y == np.array([[0, 0, 0], [0, 0, 0], [1, 0, 0]])).all()
    assert md.is_separated(M).value
    assert len(r.generators) == 1


def test_realize_chain_dims():
    # dim = sum(n_i + m_i - 1) - (s - 1)
    for pairs in [((2, 1), (1, 2)), ((3, 2), (2, 3)), ((2, 2), (2, 2), (2, 2))]:
        d = desc(*pairs)
        expect = sum(n + m - 1 for n, m in pairs) - (len(pairs) - 1)
        assert chains.realize(d, 2).module.dim == expect
    big = chains.realize(desc((4, 2), (5, 3)), 2)
    assert big.module.dim == 11
    # a glued link vector lies in both operator images
    assert md.is_separated(big.module).value is False


def test_realize_truncation():
    d = desc((INF, INF))
    with pytest.raises(ValueError):
        chains.realize(d, 2)
    r = chains.realize(d, 2, truncation=3)
    assert r.truncated and r.module.dim == 3 + 3 - 1
    assert not chains.realize(desc((2, 2)), 2, truncation=5).truncated


def test_amalgamate_matches_realize():
    d = desc((2, 1), (1, 2))
    parts = [SeparatedTriple(2, 1), SeparatedTriple(1, 2)]
    M, rep = chains.amalgamate(parts, [(0, 1)], 2)
    st_, _ = md.iso_search(M, chains.realize(d, 2).module)
    assert st_ == "found"


def test_amalgamate_refusals():
    parts = [SeparatedTriple(2, 2), SeparatedTriple(2, 2)]
    # gluing off the socle is not allowed: branch of length 1 on the x side
    with pytest.raises(ValueError, match="non-socle"):
        chains.amalgamate([SeparatedTriple(1, 2), SeparatedTriple(1, 2)], [(0, 1)], 2)
    with pytest.raises(ValueError, match="cycle"):
        chains.amalgamate(parts, [(0, 1), (1, 0)], 2)
    M, rep = chains.amalgamate(parts, [(0, 1), (1, 0)], 2, allow_cycles=True)
    assert M.dim == 4


def test_mirror_swap_property():
    for pairs in [((2, 2),), ((2, 1), (1, 2)), ((3, 1), (2, 2)), ((2, 2), (3, 3))]:
        d = desc(*pairs)
        A = chains.realize(d, 2).module
        B = md.swap_operators(chains.realize(d.mirror(), 2).module)
        assert md.iso_search(A, B)[0] == "found"


def test_separated_representation_checks():
    for pairs in [((2, 2),), ((2, 1), (1, 2)), ((3, 2), (2, 3))]:
        r = chains.realize(desc(*pairs), 2)
        rep = chains.separated_representation(r)
        assert chains.verify_separated_representation(rep, r.module).value


def test_separated_representation_detects_bad_kernel():
    r = chains.realize(desc((2, 1), (1, 2)), 2)
    rep = chains.separated_representation(r)
    S = rep.S
    # replace the difference-vector kernel by a generator line: not in PS
    bad_rows = np.zeros((1, S.dim), dtype=np.int64)
    bad_rows[0, 0] = 1
    bad = chains.SeparatedRepresentation(
        S, Submodule.from_rows(S, bad_rows, check=False), rep.phi, rep.quotient,
        rep.parts,
    )
    v = chains.verify_separated_representation(bad, r.module)
    assert v.value is False and "(b)" in v.note


def test_separated_representation_unsupported():
    M = chains.realize(desc((2, 2)), 2).module
    with pytest.raises(ValueError, match="unsupported"):
        chains.separated_representation(M)


def test_enumerate_descriptors():
    ds = chains.enumerate_descriptors(1, 3)
    assert desc((1, 1)) in ds and desc((3, 3)) in ds
    assert len(ds) == 6  # canonical pairs (n, m) with n <= m <= 3
    ds2 = chains.enumerate_descriptors(2, 2)
    assert all(d == d.canonical() for d in ds2)
    assert all(chains.validate_descriptor(d).value for d in ds2)


def test_descriptor_json_roundtrip():
    for d in [desc((2, 2)), desc((INF, 2), (2, INF)), desc((2, 1), (1, 2))]:
        assert ChainDescriptor.from_json(d.to_json()) == d
    with pytest.raises(ValueError):
        ChainDescriptor.from_json({"chain": [[0, 1]]})


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.integers(2, 3), st.integers(2, 3)), min_size=1, max_size=3))
def test_dim_formula_property(pairs):
    d = desc(*pairs)
    M = chains.realize(d, 2).module
    assert M.dim == sum(n + m - 1 for n, m in pairs) - (len(pairs) - 1)
    assert M.validate().value
    assert md.top_dimension(M) == len(pairs)
