import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qlskit import codes
from qlskit.codes import (
    NotOrthogonalError,
    NotUEBError,
    UnitaryFamily,
    build_encoder,
    build_encoder_from_sppm,
    check_kl_generic,
    check_kl_paper,
    is_ueb,
    pauli_family,
    qlis_to_ueb,
    shift_clock_family,
    ueb_to_qlis,
)
from qlskit.fixtures import example_qlis_pair_dim8, qlis8_q_cell01_variant
from qlskit.numlin import kron_all, random_unitary
from qlskit.qlis import check_orthogonal_qlis, compose_skew_ppm, identity_square


def detects_random_local_errors(enc, rng, trials=4, tol=1e-9):
    """Oracle: V^dagger (E (x) I (x) I) V proportional to I, with full krons."""
    v = enc.map
    for leg, dim in enumerate(enc.legs):
        for _ in range(trials):
            e = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
            ops = [np.eye(x) for x in enc.legs]
            ops[leg] = e
            m = v.conj().T @ kron_all(ops) @ v
            lam = np.trace(m) / m.shape[0]
            if np.abs(m - lam * np.eye(m.shape[0])).max() > tol * 10:
                return False
    return True


@pytest.fixture(scope="module")
def t8():
    return example_qlis_pair_dim8()[2]


def test_encoder_from_printed_t(t8):
    enc = build_encoder_from_sppm(t8)
    assert enc.legs == (8, 4, 8) and enc.logical_dim == 4
    assert codes.encoder_isometry_violation(enc) <= 1e-9
    assert check_kl_paper(enc).passed
    assert check_kl_generic(enc).passed
    assert detects_random_local_errors(enc, np.random.default_rng(1))


def test_kl_paper_constants(t8):
    rep = check_kl_paper(build_encoder_from_sppm(t8))
    assert set(rep.violations) == {"eq11", "eq12", "eq13"}
    assert rep.scalars == {"eq11": 1 / 8, "eq12": 1 / 4, "eq13": 1 / 8}


def test_encoder_from_corrected_pair(t8):
    _, k, _ = example_qlis_pair_dim8()
    enc = build_encoder(k, qlis8_q_cell01_variant())
    assert np.array_equal(enc.map, build_encoder_from_sppm(t8).map)


def test_corrupted_encoder_fails_with_witness(t8):
    enc = codes.corrupt_encoder(t8, (0, 0), t8.parts[0, 1])
    p, g = check_kl_paper(enc), check_kl_generic(enc)
    assert not p.passed and p.witness is not None
    assert not g.passed and g.witness is not None
    assert not detects_random_local_errors(enc, np.random.default_rng(2))


def test_build_rejects_non_orthogonal():
    s = identity_square(4, 2)
    with pytest.raises(NotOrthogonalError) as info:
        build_encoder(s, s)
    assert info.value.report is not None and not info.value.report.passed


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3]))
def test_kl_checks_agree_with_oracle_on_ueb_codes(seed, d):
    rng = np.random.default_rng(seed)
    fam = shift_clock_family(d)
    u = random_unitary(d, rng)
    members = tuple(u @ m for m in fam.members)  # still a UEB
    sq = ueb_to_qlis(UnitaryFamily(d, members))
    enc = build_encoder(identity_square(d * d, d), sq)
    assert check_kl_paper(enc).passed and check_kl_generic(enc).passed
    assert detects_random_local_errors(enc, rng, trials=2)


def test_kl_agree_on_non_code():
    s = identity_square(4, 2)
    enc = codes.encoder_from_sppm(compose_skew_ppm(s, s))
    assert not check_kl_paper(enc).passed
    assert codes.kl_agree(enc)
    assert not detects_random_local_errors(enc, np.random.default_rng(3))


def trace_gram_oracle(members, d):
    n = len(members)
    g = np.zeros((n, n), dtype=complex)
    for a in range(n):
        for b in range(n):
            g[a, b] = sum(np.conj(members[a][r, c]) * members[b][r, c] for r in range(d) for c in range(d))
    return g


@pytest.mark.parametrize("fam", [pauli_family(), shift_clock_family(3), shift_clock_family(4)])
def test_standard_uebs(fam):
    d = fam.d
    assert np.allclose(trace_gram_oracle(fam.members, d), d * np.eye(d * d))
    assert is_ueb(fam)
    sq = ueb_to_qlis(fam)
    rep = check_orthogonal_qlis(identity_square(d * d, d), sq)
    assert rep.passed and rep.common_trace == pytest.approx(d)
    assert codes.same_family(qlis_to_ueb(sq), fam)


def test_non_uebs():
    i, x, _, z = pauli_family().members
    assert not is_ueb(UnitaryFamily(2, (i, i, x, z)))
    assert not is_ueb(UnitaryFamily(2, (i, x, z)))
    assert not is_ueb(UnitaryFamily(2, (i, x, z, 2 * z)))
    with pytest.raises(NotUEBError):
        ueb_to_qlis(UnitaryFamily(2, (i, i, x, z)))


def test_identity_square_is_not_a_ueb():
    with pytest.raises(NotOrthogonalError):
        qlis_to_ueb(identity_square(4, 2))
    with pytest.raises(NotUEBError):
        qlis_to_ueb(example_qlis_pair_dim8()[0])


def test_weyl_basis_is_ueb():
    for n in (2, 3, 5):
        ops = [op for _, op in codes.weyl_basis(n)]
        assert is_ueb(UnitaryFamily(n, tuple(ops)))
