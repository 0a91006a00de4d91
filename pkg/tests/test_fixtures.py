import json

import numpy as np
import pytest

from qlskit import fixtures, formats
from qlskit.numlin import is_unitary
from qlskit.qls import validate_qls

S2, S3, S5 = np.sqrt(2), np.sqrt(3), np.sqrt(5)


@pytest.mark.parametrize("fid", fixtures.FIXTURE_IDS)
def test_shipped_file_matches_constructor(fid):
    path = fixtures.fixture_path(fid)
    assert json.loads(path.read_text()) == fixtures.fixture_doc(fid)
    kind, obj = formats.load(path)
    built = fixtures.load_fixture(fid)
    assert formats.to_doc(obj) == formats.to_doc(built)


def test_export_reproduces_shipped_files(tmp_path):
    for path in fixtures.write_fixture_files(tmp_path):
        assert path.read_bytes() == fixtures.fixture_path(path.stem).read_bytes()


def test_qls4_entries():
    q = fixtures.example_qls_dim4()
    e = q.entries
    assert validate_qls(q).passed
    assert np.allclose(e[1, 0], [0, 1 / S2, -1 / S2, 0])
    assert np.allclose(e[1, 1], [1j / S5, 0, 0, 2 / S5])
    assert np.allclose(e[2, 1], [2 / S5, 0, 0, 1j / S5])
    assert np.array_equal(e[3, 0], np.eye(4)[3])


def test_u9_entries():
    u = fixtures.example_unitary_u()
    assert is_unitary(u)
    w = np.exp(2j * np.pi / 3)
    assert u[1, 1] == pytest.approx(w / S3)
    assert u[3, 3] == pytest.approx((1 + 1j) / S3)
    assert u[5, 5] == pytest.approx((1 - 1j / S2) / S3)
    assert u[7, 7] == pytest.approx(-1 / S2)
    assert u[8, 8] == pytest.approx(1)
    u[0, 0] = 7  # returned copy, cache untouched
    assert fixtures.example_unitary_u()[0, 0] == pytest.approx(1 / S3)


def test_oqls9_uses_u_columns():
    left, right = fixtures.example_orthogonal_pair_dim9()
    u = fixtures.example_unitary_u()
    assert np.array_equal(left.entries[6, 0], u[:, 3])
    assert np.array_equal(right.entries[3, 6], u[:, 0])
    assert np.array_equal(left.entries[0, 1], np.eye(9)[2])


def test_qlis8_nonempty_cells():
    q, k, t = fixtures.example_qlis_pair_dim8()
    assert (q.block_dims > 0).sum() == 16
    assert np.array_equal(q.block_dims, k.block_dims)
    assert int(t.nonzero_mask().sum()) == 16


def test_unknown_fixture():
    with pytest.raises(KeyError):
        fixtures.fixture_doc("nope")
