import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qlskit import qls
from qlskit.fixtures import example_qlis_pair_dim8, qlis8_q_cell01_variant
from qlskit.numlin import DimensionError, random_unitary
from qlskit.qlis import (
    CompositionError,
    IsometrySquare,
    SkewPPM,
    check_mutually_orthogonal_qlis,
    check_orthogonal_qlis,
    check_orthogonal_sppm,
    compose_skew_ppm,
    diagonal_from_unitaries,
    embed_qls_as_qlis,
    identity_square,
    validate_qlis,
    validate_skew_ppm,
)

seeds = st.integers(0, 2**32 - 1)


def test_fixture_squares_validate():
    q, k, t = example_qlis_pair_dim8()
    assert validate_qlis(q).passed
    assert validate_qlis(k).passed
    assert validate_skew_ppm(t).passed
    assert q.block_dims.sum() == 8 * 4


def test_printed_t_is_orthogonal():
    t = example_qlis_pair_dim8()[2]
    rep = check_orthogonal_sppm(t)
    assert rep.passed and rep.routes_agree
    assert rep.nonzero_count == 16 and rep.common_trace == pytest.approx(2.0)


def test_corrected_q_reproduces_printed_t():
    _, k, t = example_qlis_pair_dim8()
    q = qlis8_q_cell01_variant()
    assert validate_qlis(q).passed
    assert np.abs(compose_skew_ppm(k, q).parts - t.parts).max() <= 1e-12
    assert check_orthogonal_qlis(k, q).passed


def test_composition_is_skew_ppm_for_any_valid_pair():
    q, k, _ = example_qlis_pair_dim8()
    for a, b in ((k, q), (q, k), (q, q)):
        assert validate_skew_ppm(compose_skew_ppm(a, b)).passed


def test_self_composition_is_never_orthogonal():
    q, k, _ = example_qlis_pair_dim8()
    for s in (q, k, identity_square(4, 2)):
        rep = check_orthogonal_qlis(s, s)
        assert not rep.passed and rep.routes_agree


def test_composition_errors():
    q, _, _ = example_qlis_pair_dim8()
    with pytest.raises(CompositionError):
        compose_skew_ppm(q, identity_square(8, 4))
    with pytest.raises(CompositionError):
        compose_skew_ppm(identity_square(4, 2), identity_square(4, 3))
    blocks = [list(r) for r in q.blocks]
    blocks[0][0] = 2 * blocks[0][0]
    bad = IsometrySquare(8, 4, q.block_dims, tuple(map(tuple, blocks)))
    assert not validate_qlis(bad).passed
    with pytest.raises(CompositionError):
        compose_skew_ppm(bad, q)


def test_shape_errors():
    with pytest.raises(DimensionError):
        IsometrySquare(2, 2, np.ones((2, 2), dtype=int), ((np.eye(2), None), (None, None)))
    with pytest.raises(DimensionError):
        SkewPPM(2, 2, np.zeros((2, 2, 3, 3)))
    with pytest.raises(ValueError):
        diagonal_from_unitaries([np.eye(2), 2 * np.eye(2)])


def test_validate_qlis_dims_key():
    u = random_unitary(2, np.random.default_rng(0))
    s = IsometrySquare.from_blocks([[u, None], [None, u[:, :1]]])
    rep = validate_qlis(s)
    assert rep.violations["row_dims"] == 1 and not rep.passed


@settings(max_examples=30, deadline=None)
@given(seeds, st.sampled_from([(2, 2), (3, 1), (1, 3)]))
def test_embedding_agrees_with_qls_check(seed, st_dims):
    rng = np.random.default_rng(seed)
    n = st_dims[0] * st_dims[1]
    if st_dims[1] == 1 or st_dims[0] == 1:
        a, b = qls.generate_cyclic_mols(3, 2)
        if rng.random() < 0.5:
            b = a
        rows, cols = rng.permutation(3), rng.permutation(3)
        a = qls.apply_equivalence(a, qls.random_equivalence(3, rng, rows, cols))
        b = qls.apply_equivalence(b, qls.random_equivalence(3, rng, rows, cols))
    else:
        a = qls.random_block_qls(2, 2, rng)
        b = qls.random_block_qls(2, 2, rng)
    ea, eb = embed_qls_as_qlis(a), embed_qls_as_qlis(b)
    assert validate_qlis(ea).passed and ea.d == a.n
    rep = check_orthogonal_qlis(ea, eb)
    assert rep.routes_agree
    assert rep.passed == qls.check_orthogonal(a, b).passed


def test_embedded_mols_trace_is_n_over_d():
    a, b = qls.generate_cyclic_mols(5, 2)
    rep = check_orthogonal_qlis(embed_qls_as_qlis(a), embed_qls_as_qlis(b))
    assert rep.passed and rep.common_trace == pytest.approx(1.0)


def test_mutual_family_reports():
    fam = [embed_qls_as_qlis(q) for q in qls.generate_cyclic_mols(5, 3)]
    reps = check_mutually_orthogonal_qlis(fam)
    assert set(reps) == {(0, 1), (0, 2), (1, 2)}
    assert all(r.passed for r in reps.values())


def test_zero_sppm():
    rep = check_orthogonal_sppm(SkewPPM(2, 2, np.zeros((2, 2, 2, 2))))
    assert not rep.passed and rep.nonzero_count == 0 and rep.routes_agree
